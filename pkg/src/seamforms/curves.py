"""Planar boundary curves.

Every curve is closed, simple, and positively oriented (counterclockwise),
and exposes a uniform arclength API: perimeter, point and curvature at an
arclength, uniform sampling, and rescaling.  Smooth kinds keep a cached
cumulative-arclength table (Gauss-Legendre panels, verified by doubling);
kinds with a closed-form arclength (stadium, fourier-support, polyline) skip
the table entirely.

Curvature sign convention: positive where the curve bends left (convex
pieces have kappa >= 0 everywhere).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CurveError

TWO_PI = 2.0 * math.pi

# 16-point Gauss-Legendre rule on [-1, 1]
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


class _ArclengthTable:
    """Cumulative arclength over a parameter interval [0, t_end].

    Panel integrals use GL-16.  The builder doubles the panel count until
    the total changes by less than rel_tol, so the stored table is already
    at verified resolution.
    """

    def __init__(self, speed, t_end, panels=256, rel_tol=1e-12, max_panels=8192):
        self.speed = speed
        self.t_end = float(t_end)
        total = None
        while True:
            grid, cum = self._build(speed, t_end, panels)
            if total is not None and abs(cum[-1] - total) <= rel_tol * abs(cum[-1]):
                break
            if panels >= max_panels:
                if total is not None and abs(cum[-1] - total) > 1e-8 * abs(cum[-1]):
                    raise CurveError("arclength table did not converge")
                break
            total = cum[-1]
            panels *= 2
        self.grid = grid
        self.cum = cum
        self.panels = panels

    @staticmethod
    def _build(speed, t_end, panels):
        grid = np.linspace(0.0, t_end, panels + 1)
        half = (grid[1] - grid[0]) / 2.0
        mids = (grid[:-1] + grid[1:]) / 2.0
        tt = mids[:, None] + half * _GL_NODES[None, :]
        vals = speed(tt.ravel()).reshape(tt.shape)
        panel = half * vals @ _GL_WEIGHTS
        cum = np.concatenate([[0.0], np.cumsum(panel)])
        return grid, cum

    @property
    def total(self) -> float:
        return float(self.cum[-1])

    def s_of_t(self, t):
        t = np.asarray(t, dtype=float)
        idx = np.clip(np.searchsorted(self.grid, t, side="right") - 1, 0, self.panels - 1)
        a = self.grid[idx]
        half = (t - a) / 2.0
        mid = (t + a) / 2.0
        tt = mid[..., None] + half[..., None] * _GL_NODES
        vals = self.speed(tt.ravel()).reshape(tt.shape)
        return self.cum[idx] + half * (vals @ _GL_WEIGHTS)

    def t_of_s(self, s):
        s = np.mod(np.asarray(s, dtype=float), self.total)
        t = np.interp(s, self.cum, self.grid)
        for _ in range(30):
            err = self.s_of_t(t) - s
            v = self.speed(t)
            step = err / np.maximum(v, 1e-300)
            t = np.clip(t - step, 0.0, self.t_end)
            if np.max(np.abs(err)) < 1e-13 * max(self.total, 1.0):
                break
        return t


@dataclass
class ConvexityReport:
    ok: bool
    min_curvature: float
    min_location: float  # arclength of the worst (first-violating) spot
    total_turning: float

    def __bool__(self) -> bool:
        return self.ok


class PlanarCurve:
    kind = "abstract"

    def perimeter(self) -> float:
        raise NotImplementedError

    def point_at_arclength(self, s):
        """Point(s) on the curve at arclength s (periodic, vectorized)."""
        raise NotImplementedError

    def curvature_at(self, s):
        """Signed curvature at arclength s (periodic, vectorized)."""
        raise NotImplementedError

    def scaled(self, factor: float) -> "PlanarCurve":
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError

    def sample_by_arclength(self, n: int, offset: float = 0.0):
        if n < 3:
            raise CurveError("need at least 3 samples on a closed curve")
        p = self.perimeter()
        s = np.mod(offset + np.arange(n) * (p / n), p)
        return s, self.point_at_arclength(s)

    def is_convex(self, tol: float = 1e-9) -> ConvexityReport:
        p = self.perimeter()
        grid = np.linspace(0.0, p, 8193)[:-1]
        k = self.curvature_at(grid)
        i = int(np.argmin(k))
        # parabolic refinement around the grid minimum
        lo, hi = grid[i] - p / 8192, grid[i] + p / 8192
        fine = np.linspace(lo, hi, 65)
        kf = self.curvature_at(np.mod(fine, p))
        j = int(np.argmin(kf))
        kmin = float(kf[j])
        loc = float(np.mod(fine[j], p))
        if kmin < -tol:
            viol = np.nonzero(k < -tol)[0]
            loc = float(grid[viol[0]]) if viol.size else loc
        turning = self._total_turning()
        ok = kmin >= -tol and abs(turning - TWO_PI) <= 1e-6 * TWO_PI
        return ConvexityReport(ok, kmin, loc, turning)

    def _total_turning(self) -> float:
        p = self.perimeter()
        grid = np.linspace(0.0, p, 4097)
        mids = (grid[:-1] + grid[1:]) / 2.0
        half = (grid[1] - grid[0]) / 2.0
        tt = (mids[:, None] + half * _GL_NODES[None, :]).ravel()
        k = self.curvature_at(np.mod(tt, p)).reshape(-1, 16)
        return float(np.sum(half * k @ _GL_WEIGHTS))


class _SmoothCurve(PlanarCurve):
    """Curve parameterized over [0, 2*pi) with analytic point/speed."""

    _t_end = TWO_PI

    def _point_t(self, t):
        raise NotImplementedError

    def _speed_t(self, t):
        raise NotImplementedError

    def _curvature_t(self, t):
        raise NotImplementedError

    @property
    def _table(self) -> _ArclengthTable:
        tab = getattr(self, "_table_cache", None)
        if tab is None:
            tab = _ArclengthTable(self._speed_t, self._t_end)
            self._table_cache = tab
        return tab

    def perimeter(self) -> float:
        return self._table.total

    def _t_of_s(self, s):
        return self._table.t_of_s(s)

    def point_at_arclength(self, s):
        return self._point_t(self._t_of_s(s))

    def curvature_at(self, s):
        return self._curvature_t(self._t_of_s(s))


class Ellipse(_SmoothCurve):
    kind = "ellipse"

    def __init__(self, a: float, b: float):
        if not (a > 0 and b > 0):
            raise CurveError("ellipse semi-axes must be positive")
        self.a = float(a)
        self.b = float(b)

    def _point_t(self, t):
        return np.stack([self.a * np.cos(t), self.b * np.sin(t)], axis=-1)

    def _speed_t(self, t):
        return np.hypot(self.a * np.sin(t), self.b * np.cos(t))

    def _curvature_t(self, t):
        return self.a * self.b / self._speed_t(t) ** 3

    def scaled(self, factor: float) -> "Ellipse":
        return Ellipse(self.a * factor, self.b * factor)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "a": self.a, "b": self.b}


class Superellipse(_SmoothCurve):
    """|x/a|^p + |y/b|^p = 1 with p >= 2.

    Exponents below 2 produce unbounded curvature at the axes, which breaks
    the regularity requirement, so they are rejected.  The parameterization
    x = a*sgn(cos t)|cos t|^(2/p) has integrable speed blowups at the axis
    points when p > 2; the arclength table integrates through them with a
    per-quadrant clustering substitution.
    """

    kind = "superellipse"

    def __init__(self, a: float, b: float, p: float):
        if not (a > 0 and b > 0):
            raise CurveError("superellipse semi-axes must be positive")
        if p < 2:
            raise CurveError("superellipse exponent must be >= 2 to keep curvature bounded")
        self.a = float(a)
        self.b = float(b)
        self.p = float(p)
        self._q = 2.0 / self.p
        self._m = math.ceil(self.p)

    # -- substituted parameter u in [0, 2*pi): each quadrant of u maps to a
    # quadrant of t with endpoint clustering of order m = ceil(p).  The trig
    # magnitudes are computed from the distances to BOTH quadrant boundaries
    # (alpha from the start, beta to the end), which are exact in the
    # substituted domain; going through t itself cancels catastrophically
    # next to the axis points and stalls the quadrature at ~1e-8.
    _t_end = TWO_PI

    def _decompose(self, u):
        u = np.asarray(u, dtype=float)
        quad = np.clip(np.floor(u / (math.pi / 2.0)), 0, 3).astype(int)
        frac = np.clip(u / (math.pi / 2.0) - quad, 0.0, 1.0)
        m = self._m
        fm = frac**m
        gm = (1.0 - frac) ** m
        denom = fm + gm
        alpha = (math.pi / 2.0) * fm / denom
        beta = (math.pi / 2.0) * gm / denom
        return quad, frac, alpha, beta

    def _trig(self, u):
        quad, _, alpha, beta = self._decompose(u)
        sa = np.sin(alpha)
        sb = np.sin(beta)
        even = quad % 2 == 0
        c_abs = np.where(even, sb, sa)
        s_abs = np.where(even, sa, sb)
        sign_c = np.where((quad == 0) | (quad == 3), 1.0, -1.0)
        sign_s = np.where(quad <= 1, 1.0, -1.0)
        return sign_c, c_abs, sign_s, s_abs

    def _du_factor(self, u):
        quad, frac, _, _ = self._decompose(u)
        m = self._m
        fm = frac**m
        gm = (1.0 - frac) ** m
        num = m * frac ** (m - 1) * gm + m * (1.0 - frac) ** (m - 1) * fm
        return num / (fm + gm) ** 2

    def _point_t(self, u):
        q = self._q
        sign_c, c_abs, sign_s, s_abs = self._trig(u)
        x = self.a * sign_c * c_abs**q
        y = self.b * sign_s * s_abs**q
        return np.stack([x, y], axis=-1)

    def _speed_t(self, u):
        # speed in the substituted parameter; the clustering factor kills
        # the integrable blowup of the raw speed at the axis points
        q = self._q
        _, c_abs, _, s_abs = self._trig(u)
        with np.errstate(divide="ignore", invalid="ignore"):
            dx = self.a * q * c_abs ** (q - 1.0) * s_abs
            dy = self.b * q * s_abs ** (q - 1.0) * c_abs
            v = np.hypot(dx, dy) * self._du_factor(u)
        return np.where(np.isfinite(v), v, 0.0)

    def point_at_arclength(self, s):
        return self._point_t(self._t_of_s(s))

    def curvature_at(self, s):
        pt = self.point_at_arclength(s)
        x = np.asarray(pt)[..., 0]
        y = np.asarray(pt)[..., 1]
        a, b, p = self.a, self.b, self.p
        fx = (p / a) * np.abs(x / a) ** (p - 1.0)
        fy = (p / b) * np.abs(y / b) ** (p - 1.0)
        fxx = (p * (p - 1.0) / a**2) * np.abs(x / a) ** (p - 2.0)
        fyy = (p * (p - 1.0) / b**2) * np.abs(y / b) ** (p - 2.0)
        grad = np.hypot(fx, fy)
        return (fxx * fy**2 + fyy * fx**2) / grad**3

    def scaled(self, factor: float) -> "Superellipse":
        return Superellipse(self.a * factor, self.b * factor, self.p)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "a": self.a, "b": self.b, "p": self.p}


class Stadium(PlanarCurve):
    """Two straights of length `straight` capped by semicircles of `radius`.

    Arclength-natural: s = 0 is the start of the bottom straight at
    (-straight/2, -radius), traversed counterclockwise.  Curvature at the
    four joints follows the half-open piece convention (each piece owns its
    starting point).
    """

    kind = "stadium"

    def __init__(self, radius: float, straight: float):
        if radius <= 0 or straight < 0:
            raise CurveError("stadium needs radius > 0 and straight >= 0")
        self.radius = float(radius)
        self.straight = float(straight)

    def perimeter(self) -> float:
        return TWO_PI * self.radius + 2.0 * self.straight

    def point_at_arclength(self, s):
        r, l = self.radius, self.straight
        p = self.perimeter()
        s = np.mod(np.asarray(s, dtype=float), p)
        x = np.empty_like(s)
        y = np.empty_like(s)
        cap = math.pi * r

        m = s < l
        x[m] = -l / 2.0 + s[m]
        y[m] = -r

        m = (s >= l) & (s < l + cap)
        ang = (s[m] - l) / r - math.pi / 2.0
        x[m] = l / 2.0 + r * np.cos(ang)
        y[m] = r * np.sin(ang)

        m = (s >= l + cap) & (s < 2 * l + cap)
        x[m] = l / 2.0 - (s[m] - l - cap)
        y[m] = r

        m = s >= 2 * l + cap
        ang = (s[m] - 2 * l - cap) / r + math.pi / 2.0
        x[m] = -l / 2.0 + r * np.cos(ang)
        y[m] = r * np.sin(ang)
        return np.stack([x, y], axis=-1)

    def curvature_at(self, s):
        r, l = self.radius, self.straight
        p = self.perimeter()
        s = np.mod(np.asarray(s, dtype=float), p)
        cap = math.pi * r
        on_cap = ((s >= l) & (s < l + cap)) | (s >= 2 * l + cap)
        return np.where(on_cap, 1.0 / r, 0.0)

    def is_convex(self, tol: float = 1e-9) -> ConvexityReport:
        # exact: curvature is a nonnegative step function, each cap turns pi
        kmin = 0.0 if self.straight > 0 else 1.0 / self.radius
        return ConvexityReport(True, kmin, 0.0, TWO_PI)

    def scaled(self, factor: float) -> "Stadium":
        return Stadium(self.radius * factor, self.straight * factor)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "radius": self.radius, "straight": self.straight}


class FourierSupport(PlanarCurve):
    """Strictly convex curve given by its support function

        h(theta) = a0 + sum_k ak[k-1] cos(k theta) + bk[k-1] sin(k theta).

    The boundary point with outer normal (cos t, sin t) is
    c(t) = h(t) (cos t, sin t) + h'(t) (-sin t, cos t); arclength speed is
    h + h'', which must stay positive (checked on construction), and the
    cumulative arclength has a closed form, so no quadrature table is used.
    Perimeter is exactly 2*pi*a0.
    """

    kind = "fourier-support"

    def __init__(self, a0: float, ak=(), bk=()):
        if a0 <= 0:
            raise CurveError("support constant term must be positive")
        self.a0 = float(a0)
        self.ak = np.asarray(ak, dtype=float)
        self.bk = np.asarray(bk, dtype=float)
        if self.ak.ndim != 1 or self.bk.ndim != 1:
            raise CurveError("fourier coefficients must be flat sequences")
        n = max(self.ak.size, self.bk.size)
        self.ak = np.pad(self.ak, (0, n - self.ak.size))
        self.bk = np.pad(self.bk, (0, n - self.bk.size))
        self._k = np.arange(1, n + 1, dtype=float)
        m = self._min_speed()
        if m <= 0:
            raise CurveError(
                f"support function is not strictly convex: min(h + h'') = {m:.3g} <= 0"
            )

    def _harmonics(self, t):
        t = np.asarray(t, dtype=float)
        kt = t[..., None] * self._k
        return np.cos(kt), np.sin(kt)

    def _h(self, t):
        c, s = self._harmonics(t)
        return self.a0 + c @ self.ak + s @ self.bk

    def _dh(self, t):
        c, s = self._harmonics(t)
        return (-s * self._k) @ self.ak + (c * self._k) @ self.bk

    def _speed(self, t):
        # h + h''
        c, s = self._harmonics(t)
        w = 1.0 - self._k**2
        return self.a0 + (c * w) @ self.ak + (s * w) @ self.bk

    def _min_speed(self) -> float:
        t = np.linspace(0.0, TWO_PI, 16385)[:-1]
        v = self._speed(t)
        i = int(np.argmin(v))
        fine = t[i] + np.linspace(-1.0, 1.0, 129) * (TWO_PI / 16384)
        return float(np.min(self._speed(fine)))

    def min_speed(self) -> float:
        """Smallest curvature radius h + h'' along the curve."""
        return self._min_speed()

    def perimeter(self) -> float:
        return TWO_PI * self.a0

    def _arclength_of_t(self, t):
        t = np.asarray(t, dtype=float)
        k = self._k
        w = (1.0 - k**2) / k
        kt = t[..., None] * k
        return self.a0 * t + (np.sin(kt) * w) @ self.ak - ((np.cos(kt) - 1.0) * w) @ self.bk

    def _t_of_s(self, s):
        p = self.perimeter()
        s = np.mod(np.asarray(s, dtype=float), p)
        t = s / self.a0
        for _ in range(40):
            err = self._arclength_of_t(t) - s
            t = t - err / self._speed(t)
            if np.max(np.abs(err)) < 1e-14 * p:
                break
        return np.mod(t, TWO_PI)

    def point_at_arclength(self, s):
        t = self._t_of_s(s)
        h = self._h(t)
        dh = self._dh(t)
        ct, st = np.cos(t), np.sin(t)
        return np.stack([h * ct - dh * st, h * st + dh * ct], axis=-1)

    def curvature_at(self, s):
        return 1.0 / self._speed(self._t_of_s(s))

    def scaled(self, factor: float) -> "FourierSupport":
        return FourierSupport(self.a0 * factor, self.ak * factor, self.bk * factor)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "a0": self.a0,
            "ak": self.ak.tolist(),
            "bk": self.bk.tolist(),
        }


class FourierRadial(_SmoothCurve):
    """Star-shaped curve r(theta) = r0 + sum_k ak cos(k theta) + bk sin(k theta).

    The radius must stay positive; curvature may change sign, so this is the
    kind to use for non-convex pieces in relaxed gluings.
    """

    kind = "fourier-radial"

    def __init__(self, r0: float, ak=(), bk=()):
        self.r0 = float(r0)
        self.ak = np.asarray(ak, dtype=float)
        self.bk = np.asarray(bk, dtype=float)
        if self.ak.ndim != 1 or self.bk.ndim != 1:
            raise CurveError("fourier coefficients must be flat sequences")
        n = max(self.ak.size, self.bk.size)
        self.ak = np.pad(self.ak, (0, n - self.ak.size))
        self.bk = np.pad(self.bk, (0, n - self.bk.size))
        self._k = np.arange(1, n + 1, dtype=float)
        t = np.linspace(0.0, TWO_PI, 8193)[:-1]
        if np.min(self._r(t)) <= 0:
            raise CurveError("radial function must stay positive")

    def _r(self, t):
        kt = np.asarray(t, dtype=float)[..., None] * self._k
        return self.r0 + np.cos(kt) @ self.ak + np.sin(kt) @ self.bk

    def _dr(self, t):
        kt = np.asarray(t, dtype=float)[..., None] * self._k
        return (-np.sin(kt) * self._k) @ self.ak + (np.cos(kt) * self._k) @ self.bk

    def _ddr(self, t):
        kt = np.asarray(t, dtype=float)[..., None] * self._k
        k2 = self._k**2
        return (-np.cos(kt) * k2) @ self.ak + (-np.sin(kt) * k2) @ self.bk

    def _point_t(self, t):
        r = self._r(t)
        return np.stack([r * np.cos(t), r * np.sin(t)], axis=-1)

    def _speed_t(self, t):
        return np.hypot(self._r(t), self._dr(t))

    def _curvature_t(self, t):
        r, dr, ddr = self._r(t), self._dr(t), self._ddr(t)
        return (r * r + 2.0 * dr * dr - r * ddr) / (r * r + dr * dr) ** 1.5

    def scaled(self, factor: float) -> "FourierRadial":
        return FourierRadial(self.r0 * factor, self.ak * factor, self.bk * factor)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "r0": self.r0,
            "ak": self.ak.tolist(),
            "bk": self.bk.tolist(),
        }


class Polyline(PlanarCurve):
    """Closed polygon given as a vertex list (first vertex not repeated).

    Must be simple and counterclockwise.  Pointwise curvature is undefined;
    use turning_angles() for the exterior angles at the vertices.
    """

    kind = "polyline"

    def __init__(self, points):
        pts = np.asarray(points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 3:
            raise CurveError("polyline needs an (n, 2) array with n >= 3")
        if np.allclose(pts[0], pts[-1]):
            pts = pts[:-1]
        edges = np.roll(pts, -1, axis=0) - pts
        lens = np.hypot(edges[:, 0], edges[:, 1])
        if np.min(lens) <= 0:
            raise CurveError("polyline has a zero-length edge")
        area2 = float(np.sum(pts[:, 0] * np.roll(pts[:, 1], -1) - np.roll(pts[:, 0], -1) * pts[:, 1]))
        if area2 <= 0:
            raise CurveError("polyline must be positively oriented (counterclockwise)")
        self.points = pts
        self._edge_lens = lens
        self._cum = np.concatenate([[0.0], np.cumsum(lens)])
        self._check_simple()

    def _check_simple(self):
        pts = self.points
        n = len(pts)
        a = pts
        b = np.roll(pts, -1, axis=0)
        for i in range(n):
            for j in range(i + 1, n):
                if j == i or (j + 1) % n == i or (i + 1) % n == j:
                    continue
                if _segments_cross(a[i], b[i], a[j], b[j]):
                    raise CurveError(f"polyline self-intersects (edges {i} and {j})")

    def perimeter(self) -> float:
        return float(self._cum[-1])

    def point_at_arclength(self, s):
        p = self.perimeter()
        s = np.mod(np.asarray(s, dtype=float), p)
        idx = np.clip(np.searchsorted(self._cum, s, side="right") - 1, 0, len(self.points) - 1)
        frac = (s - self._cum[idx]) / self._edge_lens[idx]
        a = self.points[idx]
        b = self.points[(idx + 1) % len(self.points)]
        return a + frac[..., None] * (b - a)

    def curvature_at(self, s):
        raise CurveError(
            "curvature is not defined for polyline curves; use turning_angles() "
            "for the exterior angles at the vertices"
        )

    def turning_angles(self):
        """Exterior turning angle at each vertex (positive = left turn)."""
        pts = self.points
        e_in = pts - np.roll(pts, 1, axis=0)
        e_out = np.roll(pts, -1, axis=0) - pts
        cross = e_in[:, 0] * e_out[:, 1] - e_in[:, 1] * e_out[:, 0]
        dot = np.einsum("ij,ij->i", e_in, e_out)
        return np.arctan2(cross, dot)

    def vertex_arclengths(self):
        return self._cum[:-1].copy()

    def is_convex(self, tol: float = 1e-9) -> ConvexityReport:
        turns = self.turning_angles()
        i = int(np.argmin(turns))
        bad = np.nonzero(turns < -tol)[0]
        loc = float(self._cum[bad[0] if bad.size else i])
        total = float(np.sum(turns))
        ok = bool(turns[i] >= -tol and abs(total - TWO_PI) <= 1e-9)
        return ConvexityReport(ok, float(turns[i]), loc, total)

    def scaled(self, factor: float) -> "Polyline":
        return Polyline(self.points * factor)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "points": self.points.tolist()}


def _segments_cross(p1, p2, p3, p4) -> bool:
    d = lambda a, b, c: (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    d1, d2 = d(p3, p4, p1), d(p3, p4, p2)
    d3, d4 = d(p1, p2, p3), d(p1, p2, p4)
    return ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0))


_KINDS = {
    "ellipse": lambda d: Ellipse(d["a"], d["b"]),
    "superellipse": lambda d: Superellipse(d["a"], d["b"], d["p"]),
    "stadium": lambda d: Stadium(d["radius"], d["straight"]),
    "fourier-support": lambda d: FourierSupport(d["a0"], d.get("ak", ()), d.get("bk", ())),
    "fourier-radial": lambda d: FourierRadial(d["r0"], d.get("ak", ()), d.get("bk", ())),
    "polyline": lambda d: Polyline(d["points"]),
}


def make_curve(spec: dict) -> PlanarCurve:
    """Build a curve from its dict form ({'kind': ..., ...parameters})."""
    if not isinstance(spec, dict) or "kind" not in spec:
        raise CurveError("curve spec must be a dict with a 'kind' entry")
    kind = spec["kind"]
    if kind not in _KINDS:
        raise CurveError(f"unknown curve kind {kind!r}; known: {sorted(_KINDS)}")
    try:
        return _KINDS[kind](spec)
    except KeyError as exc:
        raise CurveError(f"curve kind {kind!r} is missing parameter {exc}") from exc


def regular_ngon(n: int, side: float | None = None, circumradius: float | None = None) -> Polyline:
    """Regular n-gon centered at the origin with a vertex on the +x axis."""
    if n < 3:
        raise CurveError("need n >= 3")
    if (side is None) == (circumradius is None):
        raise CurveError("give exactly one of side or circumradius")
    r = circumradius if circumradius is not None else side / (2.0 * math.sin(math.pi / n))
    t = TWO_PI * np.arange(n) / n
    return Polyline(np.stack([r * np.cos(t), r * np.sin(t)], axis=1))


# Thin functional aliases over the method API.

def perimeter(c: PlanarCurve) -> float:
    return c.perimeter()


def point_at_arclength(c: PlanarCurve, s):
    return c.point_at_arclength(s)


def curvature_at(c: PlanarCurve, s):
    return c.curvature_at(s)


def is_convex(c: PlanarCurve, tol: float = 1e-9) -> ConvexityReport:
    return c.is_convex(tol)


def sample_by_arclength(c: PlanarCurve, n: int, offset: float = 0.0):
    return c.sample_by_arclength(n, offset)
