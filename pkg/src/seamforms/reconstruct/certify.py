"""Convex-position certificates for embedded polyhedra."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.spatial


@dataclass
class EmbeddedPolyhedron:
    """A triangulated closed surface in space.

    Vertex ids match the cone metric the surface was built from; faces may
    be a refinement of the metric triangulation (flat vertices are placed
    on the facets of the solved shape).
    """

    positions: np.ndarray  # (N, 3)
    faces: np.ndarray  # (F, 3) int32
    face_piece: np.ndarray = field(default_factory=lambda: np.zeros(0, np.int32))
    kind: str = "raw"

    def diameter(self) -> float:
        lo = self.positions.min(axis=0)
        hi = self.positions.max(axis=0)
        return float(np.linalg.norm(hi - lo))

    def edge_vectors(self):
        p = self.positions
        f = self.faces
        return p[f[:, [1, 2, 0]]] - p[f]

    def face_normals(self, normalize: bool = True) -> np.ndarray:
        p = self.positions[self.faces]
        n = np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0])
        if normalize:
            ln = np.linalg.norm(n, axis=1, keepdims=True)
            ln[ln == 0] = 1.0
            n = n / ln
        return n

    def to_dict(self) -> dict:
        return {
            "positions": self.positions.tolist(),
            "faces": self.faces.tolist(),
            "face_piece": self.face_piece.tolist(),
            "kind": self.kind,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EmbeddedPolyhedron":
        return cls(
            positions=np.asarray(d["positions"], dtype=float),
            faces=np.asarray(d["faces"], dtype=np.int32),
            face_piece=np.asarray(d.get("face_piece", []), dtype=np.int32),
            kind=d.get("kind", "raw"),
        )


@dataclass
class ConvexityCertificate:
    ok: bool
    degenerate: bool
    max_outside: float  # how far any vertex pokes beyond the hull, / diam
    max_off_hull: float  # how far any vertex sits off the hull surface, / diam
    thickness: float  # smallest extent / largest extent
    volume: float
    area: float
    detail: str

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "degenerate": self.degenerate,
            "max_outside": self.max_outside,
            "max_off_hull": self.max_off_hull,
            "thickness": self.thickness,
            "volume": self.volume,
            "area": self.area,
            "detail": self.detail,
        }


def certify_convex(
    positions: np.ndarray,
    thickness_tol: float = 1e-4,
    surface_tol: float = 1e-6,
) -> ConvexityCertificate:
    """Check that every vertex lies on the boundary of the convex hull.

    Bodies thinner than thickness_tol (relative) are treated as degenerate
    flat double covers: the certificate then checks planarity and that the
    flattened vertex set stays inside its planar hull.
    """
    pts = np.asarray(positions, dtype=float)
    center = pts.mean(axis=0)
    centered = pts - center
    diam = float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0)))
    if diam == 0.0:
        return ConvexityCertificate(False, True, math.inf, math.inf, 0.0, 0.0, 0.0, "all points coincide")

    svals = np.linalg.svd(centered, compute_uv=False)
    thickness = float(svals[-1] / svals[0])
    if thickness < thickness_tol:
        # flat body: measure out-of-plane spread against the best plane
        _, _, vt = np.linalg.svd(centered, full_matrices=False)
        normal = vt[-1]
        off_plane = float(np.max(np.abs(centered @ normal))) / diam
        uv = centered @ vt[:2].T
        hull2 = scipy.spatial.ConvexHull(uv)
        eqs = hull2.equations
        signed = uv @ eqs[:, :2].T + eqs[:, 2]
        outside = float(max(signed.max(), 0.0)) / diam
        ok = off_plane <= surface_tol and outside <= surface_tol
        return ConvexityCertificate(
            ok=ok,
            degenerate=True,
            max_outside=outside,
            max_off_hull=off_plane,
            thickness=thickness,
            volume=0.0,
            area=2.0 * float(hull2.volume),  # both covers of the flat region
            detail=f"flat double cover: off-plane {off_plane:.3e}, outside {outside:.3e}",
        )

    hull = scipy.spatial.ConvexHull(centered)
    eqs = hull.equations  # outward normals, |n| = 1
    signed = centered @ eqs[:, :3].T + eqs[:, 3]
    outside = float(max(signed.max(), 0.0)) / diam
    # distance from the hull surface: inside points have all-negative
    # signed distances; nearest facet plane bounds the true distance
    nearest = -signed.max(axis=1)
    off_hull = float(max(nearest.max(), 0.0)) / diam
    ok = outside <= surface_tol and off_hull <= surface_tol
    return ConvexityCertificate(
        ok=ok,
        degenerate=False,
        max_outside=outside,
        max_off_hull=off_hull,
        thickness=thickness,
        volume=float(hull.volume),
        area=float(hull.area),
        detail=f"outside {outside:.3e}, off-hull {off_hull:.3e}",
    )
