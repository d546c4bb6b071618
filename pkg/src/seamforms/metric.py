"""Intrinsic cone metrics.

A glued boundary is triangulated into a closed oriented surface whose
geometry lives entirely in per-triangle side lengths.  Vertices carry tags
(interior / seam / fold) and their planar source coordinates per piece.

Edges are glued explicitly: mates[t, j] names the triangle side identified
with side j of triangle t.  Identifying edges by vertex pairs instead would
be wrong here, because two triangles may share both endpoints without
sharing an edge (two congruent pieces produce identical interior chords
between seam vertices, and a pita glues one chart to itself).

Matched seam edges must have exactly equal lengths on both sides, but the
planar chords of two pieces sampled at the same arclengths differ by
O(spacing^3).  Averaging the chord pair fixes the metric but would leave
each piece's planar chart inconsistent with it, so after averaging, each
piece's boundary polygon is projected (minimal-norm Gauss-Newton) onto the
set of polygons whose side lengths equal the averaged targets.  Interior
points then triangulate against the projected polygon and every triangle's
side lengths come verbatim from one planar chart, which keeps interior
vertices flat to machine precision and both sides of the seam consistent.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse
import scipy.sparse.linalg
import scipy.spatial

from . import _kernels
from .errors import MeshingError, MetricError
from .gluing import GluedBoundary

TWO_PI = 2.0 * math.pi

TAG_INTERIOR = 0
TAG_SEAM = 1
TAG_FOLD = 2

TAG_NAMES = {TAG_INTERIOR: "interior", TAG_SEAM: "seam", TAG_FOLD: "fold"}

DEFECT_TOTAL_TOL = 1e-9
INTERIOR_FLAT_TOL = 1e-10
LOCAL_CONVEXITY_TOL = 1e-9
TRI_SLACK_TOL = 1e-12
MIRROR_RMS_RTOL = 1e-6


@dataclass
class PieceChart:
    """Planar source data for one piece.

    boundary_xy is indexed by the piece-local boundary position (the sampled
    polygon, counterclockwise); boundary_global maps those positions to
    metric vertex ids.  For a pita the same metric vertex appears at two
    local positions.
    """

    boundary_global: np.ndarray  # (n_b,) int
    boundary_xy: np.ndarray  # (n_b, 2) projected planar coords
    interior_global: np.ndarray  # (n_i,) int
    interior_xy: np.ndarray  # (n_i, 2)


@dataclass
class ConeMetric:
    kind: str  # "dform" | "pita" | "relaxed" | "raw"
    n_vertices: int
    tags: np.ndarray  # (N,) int8
    triangles: np.ndarray  # (F, 3) int32, consistently oriented
    tri_lengths: np.ndarray  # (F, 3) float, side j = |v_j v_{j+1}|
    tri_piece: np.ndarray  # (F,) int32, -1 for raw metrics
    mates: np.ndarray = field(default_factory=lambda: np.zeros((0, 3, 2), np.int32))
    tri_chart: np.ndarray | None = None  # (F, 3, 2) planar coords per corner
    pieces: list = field(default_factory=list)  # list[PieceChart]
    seam_edges: np.ndarray = field(default_factory=lambda: np.zeros((0, 2), np.int32))
    seam_edge_half: np.ndarray = field(default_factory=lambda: np.zeros((0, 2, 2), np.int32))
    seam_chains: list = field(default_factory=list)  # {"vertices": [...], "closed": bool}
    strictness_threshold: float = 1e-9
    seam_spacing: float = 0.0
    max_seam_curvature: float = 0.0
    defect_smear: float = 0.0
    scale_factor: float = 1.0

    def __post_init__(self):
        if len(self.mates) == 0 and len(self.triangles):
            self.mates = _mates_from_vertex_pairs(self.triangles)

    # ---- derived geometry ----

    def corner_angles(self) -> np.ndarray:
        """(F, 3) interior angles at each triangle corner."""
        l01 = self.tri_lengths[:, 0]
        l12 = self.tri_lengths[:, 1]
        l20 = self.tri_lengths[:, 2]
        a0, a1, a2 = _kernels.tri_angles(l01, l12, l20)
        return np.stack([a0, a1, a2], axis=1)

    def defects(self) -> np.ndarray:
        """Angle defect 2*pi - (total angle) at every vertex."""
        angles = self.corner_angles()
        total = np.zeros(self.n_vertices)
        np.add.at(total, self.triangles.ravel(), angles.ravel())
        return TWO_PI - total

    def n_edges(self) -> int:
        return 3 * len(self.triangles) // 2

    def half_edge_vertices(self, t: int, j: int) -> tuple[int, int]:
        return int(self.triangles[t, j]), int(self.triangles[t, (j + 1) % 3])

    def strict_vertices(self) -> np.ndarray:
        return np.nonzero(self.defects() > self.strictness_threshold)[0]

    def vertex_counts(self) -> dict:
        return {
            name: int(np.sum(self.tags == code))
            for code, name in TAG_NAMES.items()
        }

    # ---- serialization ----

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n_vertices": self.n_vertices,
            "tags": self.tags.tolist(),
            "triangles": self.triangles.tolist(),
            "tri_lengths": self.tri_lengths.tolist(),
            "tri_piece": self.tri_piece.tolist(),
            "mates": self.mates.tolist(),
            "tri_chart": None if self.tri_chart is None else self.tri_chart.tolist(),
            "pieces": [
                {
                    "boundary_global": p.boundary_global.tolist(),
                    "boundary_xy": p.boundary_xy.tolist(),
                    "interior_global": p.interior_global.tolist(),
                    "interior_xy": p.interior_xy.tolist(),
                }
                for p in self.pieces
            ],
            "seam_edges": self.seam_edges.tolist(),
            "seam_edge_half": self.seam_edge_half.tolist(),
            "seam_chains": self.seam_chains,
            "strictness_threshold": self.strictness_threshold,
            "seam_spacing": self.seam_spacing,
            "max_seam_curvature": self.max_seam_curvature,
            "defect_smear": self.defect_smear,
            "scale_factor": self.scale_factor,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ConeMetric":
        pieces = [
            PieceChart(
                boundary_global=np.asarray(p["boundary_global"], dtype=np.int32),
                boundary_xy=np.asarray(p["boundary_xy"], dtype=float),
                interior_global=np.asarray(p["interior_global"], dtype=np.int32),
                interior_xy=np.asarray(p["interior_xy"], dtype=float),
            )
            for p in d.get("pieces", [])
        ]
        return cls(
            kind=d["kind"],
            n_vertices=int(d["n_vertices"]),
            tags=np.asarray(d["tags"], dtype=np.int8),
            triangles=np.asarray(d["triangles"], dtype=np.int32),
            tri_lengths=np.asarray(d["tri_lengths"], dtype=float),
            tri_piece=np.asarray(d["tri_piece"], dtype=np.int32),
            mates=np.asarray(d["mates"], dtype=np.int32).reshape(-1, 3, 2) if "mates" in d else np.zeros((0, 3, 2), np.int32),
            tri_chart=None if d.get("tri_chart") is None else np.asarray(d["tri_chart"], dtype=float).reshape(-1, 3, 2),
            pieces=pieces,
            seam_edges=np.asarray(d.get("seam_edges", []), dtype=np.int32).reshape(-1, 2),
            seam_edge_half=np.asarray(d.get("seam_edge_half", []), dtype=np.int32).reshape(-1, 2, 2),
            seam_chains=d.get("seam_chains", []),
            strictness_threshold=float(d.get("strictness_threshold", 1e-9)),
            seam_spacing=float(d.get("seam_spacing", 0.0)),
            max_seam_curvature=float(d.get("max_seam_curvature", 0.0)),
            defect_smear=float(d.get("defect_smear", 0.0)),
            scale_factor=float(d.get("scale_factor", 1.0)),
        )

    def save_json(self, path):
        with open(path, "w") as f:
            json.dump(self.to_dict(), f)
            f.write("\n")

    @classmethod
    def load_json(cls, path) -> "ConeMetric":
        with open(path) as f:
            return cls.from_dict(json.load(f))


def angle_defect(metric: ConeMetric, v: int) -> float:
    return float(metric.defects()[v])


# ---------------------------------------------------------------------------
# boundary polygon projection (seam chord reconciliation)


def _project_polygon(xy: np.ndarray, targets: np.ndarray, tol=1e-13, max_iter=12) -> np.ndarray:
    """Minimally move polygon vertices so side k has length targets[k].

    Gauss-Newton for the underdetermined system |x_{k+1} - x_k| = m_k with
    minimal-norm updates; JJ^T is cyclic tridiagonal.
    """
    x = np.array(xy, dtype=float)
    n = len(x)
    scale = float(np.mean(targets))
    for _ in range(max_iter):
        d = np.roll(x, -1, axis=0) - x
        lens = np.hypot(d[:, 0], d[:, 1])
        g = lens - targets
        if np.max(np.abs(g)) <= tol * scale:
            return x
        u = d / lens[:, None]
        # JJ^T: diag 2, off-diag -u_k . u_{k+1} (cyclic)
        off = -np.einsum("ij,ij->i", u, np.roll(u, -1, axis=0))
        rows = np.concatenate([np.arange(n), np.arange(n), np.arange(n)])
        cols = np.concatenate([np.arange(n), (np.arange(n) + 1) % n, (np.arange(n) - 1) % n])
        vals = np.concatenate([np.full(n, 2.0), off, np.roll(off, 1)])
        jjt = scipy.sparse.csc_matrix((vals, (rows, cols)), shape=(n, n))
        lam = scipy.sparse.linalg.spsolve(jjt, -g)
        # vertex k receives +lam_{k-1} u_{k-1} - lam_k u_k
        x = x + np.roll(lam, 1)[:, None] * np.roll(u, 1, axis=0) - lam[:, None] * u
    d = np.roll(x, -1, axis=0) - x
    g = np.hypot(d[:, 0], d[:, 1]) - targets
    if np.max(np.abs(g)) > 1e-9 * scale:
        raise MeshingError("seam chord reconciliation did not converge")
    return x


# ---------------------------------------------------------------------------
# per-piece triangulation


def _inside_polygon(points: np.ndarray, poly: np.ndarray) -> np.ndarray:
    """Crossing-number point-in-polygon, vectorized over points."""
    x = points[:, 0][:, None]
    y = points[:, 1][:, None]
    x1, y1 = poly[:, 0][None, :], poly[:, 1][None, :]
    x2 = np.roll(poly[:, 0], -1)[None, :]
    y2 = np.roll(poly[:, 1], -1)[None, :]
    straddles = (y1 <= y) != (y2 <= y)
    with np.errstate(divide="ignore", invalid="ignore"):
        xs = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
    hits = straddles & (x < xs)
    return (hits.sum(axis=1) % 2).astype(bool)


def _distance_to_boundary(points: np.ndarray, poly: np.ndarray) -> np.ndarray:
    """Min distance from each point to the polygon boundary segments."""
    a = poly
    b = np.roll(poly, -1, axis=0)
    ab = b - a
    ab2 = np.einsum("ij,ij->i", ab, ab)
    out = np.empty(len(points))
    chunk = 1024
    for i in range(0, len(points), chunk):
        p = points[i : i + chunk]
        ap = p[:, None, :] - a[None, :, :]
        t = np.clip(np.einsum("pej,ej->pe", ap, ab) / ab2[None, :], 0.0, 1.0)
        closest = a[None, :, :] + t[..., None] * ab[None, :, :]
        d = np.linalg.norm(p[:, None, :] - closest, axis=2)
        out[i : i + chunk] = d.min(axis=1)
    return out


def _interior_points(poly: np.ndarray, spacing: float, rng) -> np.ndarray:
    """Jittered-grid points strictly inside the polygon with a margin."""
    lo = poly.min(axis=0)
    hi = poly.max(axis=0)
    nx = max(int(math.ceil((hi[0] - lo[0]) / spacing)), 1)
    ny = max(int(math.ceil((hi[1] - lo[1]) / spacing)), 1)
    ix, iy = np.meshgrid(np.arange(nx), np.arange(ny), indexing="ij")
    base = np.stack([lo[0] + (ix.ravel() + 0.5) * spacing, lo[1] + (iy.ravel() + 0.5) * spacing], axis=1)
    pts = base + rng.uniform(-0.3, 0.3, size=base.shape) * spacing
    keep = _inside_polygon(pts, poly)
    pts = pts[keep]
    if len(pts):
        pts = pts[_distance_to_boundary(pts, poly) >= 0.6 * spacing]
    return pts


def _mesh_piece(poly: np.ndarray, interior: np.ndarray):
    """Triangulate polygon + interior points; all triangles counterclockwise.

    Boundary vertices come first (polygon order).  Raises if the polygon
    boundary is not fully present in the filtered Delaunay triangulation.
    """
    n_b = len(poly)
    pts = np.vstack([poly, interior]) if len(interior) else poly.copy()
    if len(pts) < 3:
        raise MeshingError("piece has fewer than 3 points")
    if len(pts) == 3:
        tris = np.array([[0, 1, 2]])
    else:
        tris = scipy.spatial.Delaunay(pts).simplices.astype(np.int64)
    # orient counterclockwise
    p0, p1, p2 = pts[tris[:, 0]], pts[tris[:, 1]], pts[tris[:, 2]]
    cross = (p1[:, 0] - p0[:, 0]) * (p2[:, 1] - p0[:, 1]) - (p1[:, 1] - p0[:, 1]) * (p2[:, 0] - p0[:, 0])
    flip = cross < 0
    tris[flip] = tris[flip][:, [0, 2, 1]]
    # drop triangles outside a non-convex polygon
    centroids = pts[tris].mean(axis=1)
    tris = tris[_inside_polygon(centroids, poly)]
    # boundary samples collinear to within roundoff can spawn zero-area
    # slivers just outside the polygon whose centroids pass the inside
    # test; an inside triangle always walks boundary edges forward (the
    # polygon is counterclockwise), so anything walking one backward goes
    boundary_rev = {((k + 1) % n_b, k) for k in range(n_b)}
    keep_rows = [
        t
        for t in range(len(tris))
        if not any((int(tris[t, j]), int(tris[t, (j + 1) % 3])) in boundary_rev for j in range(3))
    ]
    tris = tris[keep_rows]
    if not len(tris):
        raise MeshingError("no triangles remained after filtering")

    # every boundary edge must appear, and appear in forward direction
    directed = {}
    for t in range(len(tris)):
        for j in range(3):
            directed[(int(tris[t, j]), int(tris[t, (j + 1) % 3]))] = t
    for k in range(n_b):
        if (k, (k + 1) % n_b) not in directed:
            raise MeshingError(
                f"boundary edge {k} missing from Delaunay triangulation; "
                "interior spacing too small relative to boundary sampling"
            )
    return pts, tris


# ---------------------------------------------------------------------------
# assembly


def _assemble(
    kind: str,
    projected: list,
    local_to_global: list,
    edge_matches: list,
    interiors: list,
    seam_tags: list,
    meta: dict,
) -> ConeMetric:
    """Mesh each piece against its projected polygon and glue the pieces
    into one closed oriented surface."""
    n_pieces = len(projected)
    n_groups = len(seam_tags)
    tags = list(seam_tags)
    all_tris = []
    all_lens = []
    all_piece = []
    all_chart = []
    piece_charts = []
    local_tris = []  # per piece, final orientation, local indices
    tri_offset = [0]
    next_id = n_groups
    for p in range(n_pieces):
        poly = projected[p]
        interior = np.asarray(interiors[p], dtype=float).reshape(-1, 2)
        pts, tris = _mesh_piece(poly, interior)
        n_b = len(poly)
        ids = np.concatenate([local_to_global[p], next_id + np.arange(len(interior), dtype=np.int64)])
        next_id += len(interior)
        tags.extend([TAG_INTERIOR] * len(interior))

        if p == 1:
            # the second piece is seen from the far side of the glued
            # surface: flip its winding to keep a consistent orientation
            tris = tris[:, [0, 2, 1]]
        d01 = pts[tris[:, 1]] - pts[tris[:, 0]]
        d12 = pts[tris[:, 2]] - pts[tris[:, 1]]
        d20 = pts[tris[:, 0]] - pts[tris[:, 2]]
        lens = np.stack(
            [np.hypot(d01[:, 0], d01[:, 1]), np.hypot(d12[:, 0], d12[:, 1]), np.hypot(d20[:, 0], d20[:, 1])],
            axis=1,
        )
        all_tris.append(ids[tris])
        all_lens.append(lens)
        all_piece.append(np.full(len(tris), p, dtype=np.int32))
        all_chart.append(pts[tris])
        local_tris.append(tris)
        tri_offset.append(tri_offset[-1] + len(tris))
        piece_charts.append(
            PieceChart(
                boundary_global=local_to_global[p].astype(np.int32),
                boundary_xy=poly,
                interior_global=ids[n_b:].astype(np.int32),
                interior_xy=interior,
            )
        )

    triangles = np.vstack(all_tris).astype(np.int32)
    tri_lengths = np.vstack(all_lens)
    tri_piece = np.concatenate(all_piece)
    tri_chart = np.vstack(all_chart)

    # glue edges: within a piece by shared local vertex pairs, across the
    # seam by the matched-edge table
    half = {}  # (piece, local_a, local_b) -> (global_tri, side)
    for p in range(n_pieces):
        tris = local_tris[p]
        for r in range(len(tris)):
            for j in range(3):
                key = (p, int(tris[r, j]), int(tris[r, (j + 1) % 3]))
                if key in half:
                    raise MeshingError("duplicate directed edge in piece chart")
                half[key] = (tri_offset[p] + r, j)
    mates = np.full((len(triangles), 3, 2), -1, dtype=np.int32)
    for (p, a, b), (t, j) in half.items():
        rev = half.get((p, b, a))
        if rev is not None:
            mates[t, j] = rev

    def _boundary_half(p, i):
        n_b = len(projected[p])
        fwd = half.get((p, i, (i + 1) % n_b))
        bwd = half.get((p, (i + 1) % n_b, i))
        if (fwd is None) == (bwd is None):
            raise MeshingError(f"piece {p} polygon edge {i} not matched to exactly one triangle side")
        return fwd if fwd is not None else bwd

    seam_edge_half = np.zeros((len(edge_matches), 2, 2), dtype=np.int32)
    seam_edges = np.zeros((len(edge_matches), 2), dtype=np.int32)
    for k, ((p, i), (q, jj)) in enumerate(edge_matches):
        (t1, s1) = _boundary_half(p, i)
        (t2, s2) = _boundary_half(q, jj)
        mates[t1, s1] = (t2, s2)
        mates[t2, s2] = (t1, s1)
        seam_edge_half[k] = ((t1, s1), (t2, s2))
        a = int(triangles[t1, s1])
        b = int(triangles[t1, (s1 + 1) % 3])
        seam_edges[k] = (min(a, b), max(a, b))

    if kind == "pita":
        chain = {"vertices": list(range(n_groups)), "closed": False}
    else:
        chain = {"vertices": list(range(n_groups)), "closed": True}

    metric = ConeMetric(
        kind=kind,
        n_vertices=next_id,
        tags=np.asarray(tags, dtype=np.int8),
        triangles=triangles,
        tri_lengths=tri_lengths,
        tri_piece=tri_piece,
        mates=mates,
        tri_chart=tri_chart,
        pieces=piece_charts,
        seam_edges=seam_edges,
        seam_edge_half=seam_edge_half,
        seam_chains=[chain],
        **meta,
    )
    _assert_structure(metric)
    return metric


def triangulate(glued: GluedBoundary, interior_spacing: float | None = None, seed: int = 0) -> ConeMetric:
    """Triangulate a glued boundary into a cone metric.

    interior_spacing is the target gap between interior points in
    normalized chart units (default 3x the seam sample spacing); pieces too
    small for the spacing simply get no interior points.
    """
    if interior_spacing is None:
        interior_spacing = 3.0 * glued.seam_spacing
    if interior_spacing <= 0:
        raise MeshingError("interior_spacing must be positive")

    n_pieces = glued.piece_count
    # matched-edge chord targets
    chords = []
    for p in range(n_pieces):
        xy = glued.boundary_xy[p]
        d = np.roll(xy, -1, axis=0) - xy
        chords.append(np.hypot(d[:, 0], d[:, 1]))
    targets = [np.empty_like(c) for c in chords]
    for (p, i), (q, j) in glued.edge_matches:
        m = 0.5 * (chords[p][i] + chords[q][j])
        targets[p][i] = m
        targets[q][j] = m

    projected = [_project_polygon(glued.boundary_xy[p], targets[p]) for p in range(n_pieces)]

    # local boundary index -> global vertex id
    n_groups = len(glued.groups)
    local_to_global = [np.full(len(glued.boundary_s[p]), -1, dtype=np.int64) for p in range(n_pieces)]
    for gid, grp in enumerate(glued.groups):
        for (p, k) in grp:
            local_to_global[p][k] = gid
    for m in local_to_global:
        if np.any(m < 0):
            raise MeshingError("boundary sample not covered by any seam group")

    seam_tags = [TAG_SEAM] * n_groups
    for f in glued.fold_vertices:
        seam_tags[f] = TAG_FOLD

    rng = np.random.default_rng(seed)
    interiors = [
        _interior_points(projected[p], interior_spacing, np.random.default_rng(rng.integers(2**63)))
        for p in range(n_pieces)
    ]
    if glued.kind == "pita" and len(glued.fold_vertices) == 2:
        # Any crease of the folded piece lies on the straight chart segment
        # between its two cone points, so seed that chord with collinear
        # interior points (graded toward the ends) and clear a band around
        # it; the Delaunay then contains the chord edges and a realization
        # can bend there without stretching any edge.
        ends = []
        for gid in glued.fold_vertices:
            (p, k) = glued.groups[gid][0]
            ends.append(projected[p][k])
        a_xy, b_xy = (np.asarray(e, dtype=float) for e in ends)
        seg = b_xy - a_xy
        seg_len = float(np.hypot(*seg))
        m = max(2, int(math.ceil(math.pi * seg_len / (2.0 * interior_spacing))))
        u = (1.0 - np.cos(math.pi * np.arange(1, m) / m)) / 2.0
        chord = a_xy + u[:, None] * seg
        grid = interiors[0]
        if len(grid):
            t = np.clip(((grid - a_xy) @ seg) / (seg_len * seg_len), 0.0, 1.0)
            d = np.linalg.norm(grid - (a_xy + t[:, None] * seg), axis=1)
            grid = grid[d >= 0.8 * interior_spacing]
        interiors[0] = np.vstack([chord, grid]) if len(grid) else chord

    meta = dict(
        strictness_threshold=max(10.0 * glued.defect_smear, 1e-9),
        seam_spacing=glued.seam_spacing,
        max_seam_curvature=glued.max_seam_curvature,
        defect_smear=glued.defect_smear,
        scale_factor=glued.scale_factor,
    )
    return _assemble(glued.kind, projected, local_to_global, list(glued.edge_matches), interiors, seam_tags, meta)


def skeleton_of(metric: ConeMetric) -> ConeMetric:
    """The same glued surface triangulated on its cone points only.

    Interior vertices are flat, so dropping them leaves the metric intact;
    seam vertices keep their global ids.  Raw metrics and metrics without
    interior vertices are returned unchanged.
    """
    if metric.kind == "raw" or not np.any(metric.tags == TAG_INTERIOR):
        return metric
    n_pieces = len(metric.pieces)
    projected = [p.boundary_xy for p in metric.pieces]
    local_to_global = [p.boundary_global.astype(np.int64) for p in metric.pieces]
    if metric.kind == "pita":
        n_b = len(projected[0])
        m = n_b // 2
        edge_matches = [((0, j), (0, n_b - 1 - j)) for j in range(m)]
        n_groups = m + 1
    else:
        n_b = len(projected[0])
        edge_matches = [((0, i), (1, i)) for i in range(n_b)]
        n_groups = n_b
    seam_tags = [int(metric.tags[g]) for g in range(n_groups)]
    meta = dict(
        strictness_threshold=metric.strictness_threshold,
        seam_spacing=metric.seam_spacing,
        max_seam_curvature=metric.max_seam_curvature,
        defect_smear=metric.defect_smear,
        scale_factor=metric.scale_factor,
    )
    interiors = [np.zeros((0, 2)) for _ in range(n_pieces)]
    return _assemble(metric.kind, projected, local_to_global, edge_matches, interiors, seam_tags, meta)


def _mates_from_vertex_pairs(triangles: np.ndarray) -> np.ndarray:
    """Derive the gluing map when directed vertex pairs are unambiguous
    (true simplicial complexes, e.g. hand-built fixtures)."""
    half = {}
    for t in range(len(triangles)):
        for j in range(3):
            key = (int(triangles[t, j]), int(triangles[t, (j + 1) % 3]))
            if key in half:
                raise MeshingError("directed edge repeats; supply explicit mates")
            half[key] = (t, j)
    mates = np.full((len(triangles), 3, 2), -1, dtype=np.int32)
    for (a, b), (t, j) in half.items():
        rev = half.get((b, a))
        if rev is not None:
            mates[t, j] = rev
    return mates


def _assert_structure(metric: ConeMetric):
    """Closed-oriented-surface sanity that must hold by construction."""
    tris = metric.triangles
    mates = metric.mates
    if mates.shape != (len(tris), 3, 2):
        raise MeshingError("mates array has wrong shape")
    if len(tris) % 2:
        raise MeshingError("odd triangle count cannot close up")
    for t in range(len(tris)):
        for j in range(3):
            mt, mj = int(mates[t, j, 0]), int(mates[t, j, 1])
            if mt < 0:
                raise MeshingError(f"side {j} of triangle {t} is unglued")
            if tuple(mates[mt, mj]) != (t, j):
                raise MeshingError(f"gluing at triangle {t} side {j} is not an involution")
            if mt == t and mj == j:
                raise MeshingError(f"triangle {t} side {j} glued to itself")
            a, b = metric.half_edge_vertices(t, j)
            c, d = metric.half_edge_vertices(mt, mj)
            if (a, b) != (d, c):
                raise MeshingError(
                    f"mated sides ({t},{j}) and ({mt},{mj}) traverse {a, b} vs {c, d}; orientation broken"
                )
            l1 = metric.tri_lengths[t, j]
            l2 = metric.tri_lengths[mt, mj]
            if abs(l1 - l2) > 1e-9 * max(l1, l2):
                raise MeshingError(f"mated sides have inconsistent lengths {l1} vs {l2}")
    v = metric.n_vertices
    e = metric.n_edges()
    f = len(tris)
    if v - e + f != 2:
        raise MeshingError(f"Euler characteristic {v - e + f} != 2")


# ---------------------------------------------------------------------------
# validation


@dataclass
class MetricCheck:
    name: str
    ok: bool
    detail: str


@dataclass
class MetricReport:
    ok: bool
    checks: list
    degenerate_risk: bool
    defect_total_error: float
    max_interior_defect: float
    min_defect: float
    n_strict: int

    def __bool__(self) -> bool:
        return self.ok

    def failed(self):
        return [c for c in self.checks if not c.ok]

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "degenerate_risk": self.degenerate_risk,
            "defect_total_error": self.defect_total_error,
            "max_interior_defect": self.max_interior_defect,
            "min_defect": self.min_defect,
            "n_strict": self.n_strict,
            "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in self.checks],
        }


def _mirror_rms(a: np.ndarray, b: np.ndarray) -> float:
    """Best orthogonal (rotation or reflection) alignment RMS of matched
    planar point sets, relative to their diameter."""
    a = a - a.mean(axis=0)
    b = b - b.mean(axis=0)
    m = b.T @ a
    u, _, vt = np.linalg.svd(m)
    r = u @ vt
    resid = a - b @ r
    diam = max(np.ptp(a, axis=0).max(), np.ptp(b, axis=0).max(), 1e-300)
    return float(np.sqrt(np.mean(resid**2)) / diam)


def _degenerate_risk(metric: ConeMetric) -> tuple[bool, float]:
    """Flat doubly-covered metrics come from mirror-congruent matched seam
    charts; flag them so reconstruction can route to the degenerate path."""
    if metric.kind == "dform" or metric.kind == "relaxed":
        a = metric.pieces[0].boundary_xy
        b = metric.pieces[1].boundary_xy
        rms = _mirror_rms(a, b)
        return rms < MIRROR_RMS_RTOL, rms
    if metric.kind == "pita":
        xy = metric.pieces[0].boundary_xy
        n = len(xy)
        mirrored = xy[np.mod(-np.arange(n), n)]
        rms = _mirror_rms(xy, mirrored)
        return rms < MIRROR_RMS_RTOL, rms
    return False, float("nan")


def validate(metric: ConeMetric) -> MetricReport:
    """Structural and numerical checks; returns a report, never raises."""
    checks = []

    lens = metric.tri_lengths
    perim = lens.sum(axis=1)
    slack = (perim - 2.0 * lens.max(axis=1)) / perim
    worst = float(slack.min()) if len(slack) else 1.0
    checks.append(
        MetricCheck(
            "triangle-inequality",
            bool(np.all(lens > 0) and worst > TRI_SLACK_TOL),
            f"min relative slack {worst:.3e}",
        )
    )

    try:
        _assert_structure(metric)
        checks.append(MetricCheck("closed-oriented-surface", True, "euler=2, edges consistent"))
    except MeshingError as exc:
        checks.append(MetricCheck("closed-oriented-surface", False, str(exc)))

    defects = metric.defects()
    total_err = float(abs(defects.sum() - 4.0 * math.pi))
    checks.append(
        MetricCheck(
            "defect-total-4pi",
            total_err <= DEFECT_TOTAL_TOL,
            f"|sum - 4pi| = {total_err:.3e}",
        )
    )

    interior = metric.tags == TAG_INTERIOR
    max_int = float(np.max(np.abs(defects[interior]))) if interior.any() else 0.0
    if metric.kind == "raw":
        checks.append(MetricCheck("interior-flat", True, "raw metric: not applicable"))
    else:
        checks.append(
            MetricCheck(
                "interior-flat",
                max_int <= INTERIOR_FLAT_TOL,
                f"max |interior defect| = {max_int:.3e}",
            )
        )

    min_def = float(defects.min())
    checks.append(
        MetricCheck(
            "local-convexity",
            min_def >= -LOCAL_CONVEXITY_TOL,
            f"min defect {min_def:.3e}",
        )
    )

    if metric.kind == "raw":
        risk, rms = False, float("nan")
    else:
        risk, rms = _degenerate_risk(metric)
    checks.append(
        MetricCheck(
            "degenerate-risk",
            True,  # informational: riskiness is not a failure
            f"mirror congruence rms {rms:.3e}" + (" -> flat double cover likely" if risk else ""),
        )
    )

    n_strict = int(np.sum(defects > metric.strictness_threshold))
    ok = all(c.ok for c in checks)
    return MetricReport(
        ok=ok,
        checks=checks,
        degenerate_risk=risk,
        defect_total_error=total_err,
        max_interior_defect=max_int,
        min_defect=min_def,
        n_strict=n_strict,
    )


# ---------------------------------------------------------------------------
# raw metric fixtures


def regular_tetrahedron_metric(edge: float = 1.0) -> ConeMetric:
    """All four vertices have defect pi."""
    tris = np.array([[0, 1, 2], [0, 3, 1], [1, 3, 2], [2, 3, 0]], dtype=np.int32)
    lens = np.full((4, 3), float(edge))
    return ConeMetric(
        kind="raw",
        n_vertices=4,
        tags=np.full(4, TAG_SEAM, dtype=np.int8),
        triangles=tris,
        tri_lengths=lens,
        tri_piece=np.full(4, -1, dtype=np.int32),
        strictness_threshold=1e-9,
    )


def cube_metric(edge: float = 1.0) -> ConeMetric:
    """Cube surface, each square face split along a diagonal; defects pi/2."""
    # vertices: bottom 0-3 (z=0), top 4-7 (z=1), matching x/y
    quads = [
        (0, 1, 2, 3),  # bottom (seen from below -> reversed for outward)
        (4, 7, 6, 5),  # top
        (0, 4, 5, 1),
        (1, 5, 6, 2),
        (2, 6, 7, 3),
        (3, 7, 4, 0),
    ]
    # orient: build coordinates, emit faces with outward normals
    pts = np.array(
        [
            [0, 0, 0],
            [1, 0, 0],
            [1, 1, 0],
            [0, 1, 0],
            [0, 0, 1],
            [1, 0, 1],
            [1, 1, 1],
            [0, 1, 1],
        ],
        dtype=float,
    ) * edge
    center = pts.mean(axis=0)
    tris = []
    for (a, b, c, d) in quads:
        for tri in ((a, b, c), (a, c, d)):
            p0, p1, p2 = pts[list(tri)]
            n = np.cross(p1 - p0, p2 - p0)
            if n @ (p0 - center) < 0:
                tri = (tri[0], tri[2], tri[1])
            tris.append(tri)
    tris = np.asarray(tris, dtype=np.int32)
    d01 = pts[tris[:, 1]] - pts[tris[:, 0]]
    d12 = pts[tris[:, 2]] - pts[tris[:, 1]]
    d20 = pts[tris[:, 0]] - pts[tris[:, 2]]
    lens = np.stack([np.linalg.norm(d01, axis=1), np.linalg.norm(d12, axis=1), np.linalg.norm(d20, axis=1)], axis=1)
    return ConeMetric(
        kind="raw",
        n_vertices=8,
        tags=np.full(8, TAG_SEAM, dtype=np.int8),
        triangles=tris,
        tri_lengths=lens,
        tri_piece=np.full(len(tris), -1, dtype=np.int32),
        strictness_threshold=1e-9,
    )
