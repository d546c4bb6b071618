"""Seam correspondences between boundary pieces.

Three gluing styles share one result type:

  * dform: two convex pieces of equal perimeter sewn along their full
    boundaries, piece B starting at `offset`.
  * pita: one convex piece self-sewn by folding at arclength s0; the two
    fold endpoints are arclength-antipodal (s0 and s0 + P/2).
  * relaxed: like dform but the pieces may be non-convex as long as the
    matched curvatures satisfy kappa_a(s) + kappa_b(u(s)) >= 0 everywhere.

Pieces are normalized to perimeter 2*pi on construction; `scale_factor`
maps normalized lengths back to the original units.  Seam samples are
uniform in arclength, so matched boundary intervals have exactly equal
lengths on both sides.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .curves import PlanarCurve
from .errors import CurveError, GluingError

TWO_PI = 2.0 * math.pi

PERIMETER_RTOL = 1e-8
CONVEXITY_SLACK = 1e-9


@dataclass
class PairingReport:
    """Local convexity of the gluing: min over the seam of the matched
    curvature sum (or of the single piece's curvature where self-sewn)."""

    ok: bool
    min_sum: float
    location: float  # normalized arclength on piece A of the worst spot

    def __bool__(self) -> bool:
        return self.ok


@dataclass
class GluedBoundary:
    kind: str  # "dform" | "pita" | "relaxed"
    pieces: tuple  # normalized curves, perimeter 2*pi each
    scale_factor: float  # normalized -> original length units
    n_pairs: int  # seam vertex count
    offset: float = 0.0  # normalized (dform/relaxed)
    s0: float = 0.0  # normalized (pita)
    boundary_s: tuple = ()  # per piece: sample arclengths, CCW cyclic
    boundary_xy: tuple = ()  # per piece: sample coordinates (n_i, 2)
    groups: list = field(default_factory=list)  # seam vertex -> [(piece, local idx)]
    edge_matches: list = field(default_factory=list)  # [((p, i), (q, j)), ...]
    fold_vertices: tuple = ()  # group indices of fold endpoints (pita)
    seam_spacing: float = 0.0  # max normalized arclength gap between samples
    defect_smear: float = 0.0  # max (kappa sum) * spacing along the seam
    max_seam_curvature: float = 0.0
    pairing: PairingReport | None = None

    @property
    def piece_count(self) -> int:
        return len(self.pieces)


def _normalize(pieces):
    perims = [p.perimeter() for p in pieces]
    mean = float(np.mean(perims))
    spread = max(abs(p - mean) for p in perims)
    if spread > PERIMETER_RTOL * mean:
        raise GluingError(
            f"piece perimeters differ: {perims} (relative spread {spread / mean:.3g})"
        )
    scaled = tuple(p.scaled(TWO_PI / q) for p, q in zip(pieces, perims))
    return scaled, mean / TWO_PI


def _curvature_or_zero(curve: PlanarCurve, s):
    """Curvature where defined; polylines contribute zero (their corner
    turning shows up as exact defect, not as smear)."""
    try:
        return np.asarray(curve.curvature_at(s), dtype=float)
    except CurveError:
        return np.zeros_like(np.asarray(s, dtype=float))


def _require_convex(curve: PlanarCurve, label: str):
    rep = curve.is_convex(tol=CONVEXITY_SLACK)
    if not rep.ok:
        raise GluingError(
            f"{label} must be convex: min curvature {rep.min_curvature:.3g} "
            f"at arclength {rep.min_location:.6g}"
        )


def _pair_report(curve_a, curve_b, offset_n, probes=8192) -> PairingReport:
    s = np.linspace(0.0, TWO_PI, probes, endpoint=False)
    ka = _curvature_or_zero(curve_a, s)
    kb = _curvature_or_zero(curve_b, np.mod(offset_n + s, TWO_PI))
    tot = ka + kb
    i = int(np.argmin(tot))
    return PairingReport(bool(tot[i] >= -CONVEXITY_SLACK), float(tot[i]), float(s[i]))


def _two_piece(kind: str, piece_a, piece_b, offset: float, n: int) -> GluedBoundary:
    if n < 8:
        raise GluingError("need at least 8 seam samples for a two-piece gluing")
    (na, nb), scale = _normalize([piece_a, piece_b])
    offset_n = math.remainder(offset / scale, TWO_PI) % TWO_PI

    if kind == "dform":
        _require_convex(na, "piece A of a dform")
        _require_convex(nb, "piece B of a dform")
    pairing = _pair_report(na, nb, offset_n)
    if kind == "relaxed" and not pairing.ok:
        raise GluingError(
            f"relaxed gluing violates local convexity: kappa sum "
            f"{pairing.min_sum:.3g} at arclength {pairing.location:.6g}"
        )

    step = TWO_PI / n
    s_a = np.arange(n) * step
    s_b = np.mod(offset_n + s_a, TWO_PI)
    xy_a = na.point_at_arclength(s_a)
    xy_b = nb.point_at_arclength(s_b)

    groups = [[(0, k), (1, k)] for k in range(n)]
    edge_matches = [((0, k), (1, k)) for k in range(n)]

    ka = _curvature_or_zero(na, s_a)
    kb = _curvature_or_zero(nb, s_b)
    ksum = ka + kb
    return GluedBoundary(
        kind=kind,
        pieces=(na, nb),
        scale_factor=scale,
        n_pairs=n,
        offset=offset_n,
        boundary_s=(s_a, s_b),
        boundary_xy=(np.asarray(xy_a), np.asarray(xy_b)),
        groups=groups,
        edge_matches=edge_matches,
        seam_spacing=step,
        defect_smear=float(np.max(ksum)) * step,
        max_seam_curvature=float(max(np.max(np.abs(ka)), np.max(np.abs(kb)))),
        pairing=pairing,
    )


def make_dform(piece_a: PlanarCurve, piece_b: PlanarCurve, offset: float = 0.0, n: int = 128) -> GluedBoundary:
    """Sew two convex pieces of equal perimeter along their boundaries.

    Arclength s on piece A is identified with offset + s on piece B (both
    counterclockwise; offset in original length units).  n is the number of
    matched seam vertices.
    """
    return _two_piece("dform", piece_a, piece_b, offset, n)


def make_relaxed(piece_a: PlanarCurve, piece_b: PlanarCurve, offset: float = 0.0, n: int = 128) -> GluedBoundary:
    """Sew two pieces that need not be convex individually, requiring only
    that matched curvatures sum to >= 0 all along the seam."""
    return _two_piece("relaxed", piece_a, piece_b, offset, n)


def make_pita(piece: PlanarCurve, s0: float = 0.0, n: int = 65) -> GluedBoundary:
    """Self-sew one convex piece by folding its boundary at arclength s0.

    The point at s0 + t is identified with the one at s0 - t; the fold
    endpoints s0 and s0 + P/2 are fixed.  n counts the seam vertices
    including both fold endpoints, so the boundary polygon has 2*(n-1)
    samples.
    """
    if n < 5:
        raise GluingError("need at least 5 seam vertices for a pita fold")
    (nc,), scale = _normalize([piece])
    _require_convex(nc, "a pita piece")
    s0_n = math.remainder(s0 / scale, TWO_PI) % TWO_PI

    m = n - 1
    step = math.pi / m
    s = np.mod(s0_n + np.arange(2 * m) * step, TWO_PI)
    xy = nc.point_at_arclength(s)

    groups = []
    fold = []
    for k in range(m + 1):
        if k == 0:
            groups.append([(0, 0)])
            fold.append(0)
        elif k == m:
            groups.append([(0, m)])
            fold.append(m)
        else:
            groups.append([(0, k), (0, 2 * m - k)])
    edge_matches = [((0, j), (0, 2 * m - 1 - j)) for j in range(m)]

    kappa = _curvature_or_zero(nc, s)
    ksum = kappa + kappa[np.mod(-np.arange(2 * m), 2 * m)]
    i = int(np.argmin(ksum))
    pairing = PairingReport(bool(ksum[i] >= -CONVEXITY_SLACK), float(ksum[i]), float(s[i]))

    return GluedBoundary(
        kind="pita",
        pieces=(nc,),
        scale_factor=scale,
        n_pairs=n,
        s0=s0_n,
        boundary_s=(s,),
        boundary_xy=(np.asarray(xy),),
        groups=groups,
        edge_matches=edge_matches,
        fold_vertices=tuple(fold),
        seam_spacing=step,
        defect_smear=float(np.max(ksum)) * step,
        max_seam_curvature=float(np.max(np.abs(kappa))),
        pairing=pairing,
    )


def correspondence(glued: GluedBoundary):
    """The seam map u(s): arclength on piece A -> matched arclength (on
    piece B for two-piece gluings, on the same piece for a pita).  Inputs
    and outputs are normalized arclengths."""
    if glued.kind in ("dform", "relaxed"):
        off = glued.offset
        return lambda s: np.mod(off + np.asarray(s, dtype=float), TWO_PI)
    s0 = glued.s0
    return lambda s: np.mod(2.0 * s0 - np.asarray(s, dtype=float), TWO_PI)


def curvature_pair(glued: GluedBoundary, s):
    """Matched curvatures (kappa_a(s), kappa_b(u(s))) at normalized arclength s."""
    u = correspondence(glued)(s)
    a = glued.pieces[0]
    b = glued.pieces[-1]
    return _curvature_or_zero(a, np.asarray(s, dtype=float)), _curvature_or_zero(b, u)


def local_convexity_check(glued: GluedBoundary, probes: int = 8192) -> PairingReport:
    """Recompute the matched-curvature admissibility report on a dense grid."""
    s = np.linspace(0.0, TWO_PI, probes, endpoint=False)
    ka, kb = curvature_pair(glued, s)
    tot = ka + kb
    i = int(np.argmin(tot))
    return PairingReport(bool(tot[i] >= -CONVEXITY_SLACK), float(tot[i]), float(s[i]))
