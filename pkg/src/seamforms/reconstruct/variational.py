"""Reconstruction of the convex body from its cone metric.

Unknowns are the distances r_i from an interior apex point to the cone
points.  For a candidate r, the surface triangles span tetrahedra with the
apex; the body closes up exactly when the total dihedral angle around
every radial edge equals 2*pi.  Writing kappa_i(r) for the deficit, the
solver follows the path kappa(r) = t * kappa(r_start) from t = 1 down to
t = 0 with a Newton corrector at every step.

The triangulation is kept in convex position along the way by intrinsic
edge flips whenever the two base dihedral angles meeting at an edge exceed
pi.  Flips never touch seam edges (the surface bends there by positive
curvature), so every triangle stays inside one planar piece chart and the
charts can be carried through flips verbatim; this is what later lets flat
interior vertices be placed back barycentrically.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

from .. import _kernels
from ..errors import SolverError
from ..metric import ConeMetric

TWO_PI = 2.0 * math.pi


@dataclass
class ReconstructOptions:
    kappa_tol: float = 1e-8  # final closure tolerance, radians; the flip
    # hysteresis floors attainable closure near 3x flip_slack
    step_tol: float = 3e-8  # corrector tolerance along the path
    eps_len: float = 1e-6  # relative edge length certificate
    thickness_tol: float = 1e-4  # below this, the body counts as flat
    surface_tol: float = 1e-6  # hull certificate tolerance, relative
    max_steps: int = 1500
    max_newton: int = 200  # hard cap; stagnation usually exits earlier
    pin_threshold: float = 0.05  # below this, t shrinks geometrically
    fd_scale: float = 1e-7
    svd_rcond: float = 1e-4
    flip_slack: float = 1e-9  # hysteresis so cocircular noise cannot cycle
    margin_floor: float = 1e-15
    min_dt: float = 1e-7
    max_flip_sweeps: int = 60


class _Mesh:
    """Mutable triangulation state for the solver."""

    def __init__(self, metric: ConeMetric):
        self.tri = metric.triangles.astype(np.int64).copy()
        self.lens = metric.tri_lengths.astype(float).copy()
        self.mates = metric.mates.astype(np.int64).copy()
        self.piece = metric.tri_piece.astype(np.int64).copy()
        self.n = metric.n_vertices
        if metric.tri_chart is not None:
            self.chart = metric.tri_chart.astype(float).copy()
        else:
            self.chart = _canonical_charts(self.lens)
        f = len(self.tri)
        self.is_seam = np.zeros((f, 3), dtype=bool)
        for (t1, j1), (t2, j2) in metric.seam_edge_half:
            self.is_seam[t1, j1] = True
            self.is_seam[t2, j2] = True
        self.flips_done = 0
        self._incidence = None

    def faces_by_vertex(self):
        if self._incidence is None:
            inc = [[] for _ in range(self.n)]
            for t in range(len(self.tri)):
                for j in range(3):
                    inc[self.tri[t, j]].append(t)
            self._incidence = [np.array(sorted(set(rows)), dtype=np.int64) for rows in inc]
        return self._incidence

    def _fd_batch(self):
        """Row/column index arrays for the vectorized Jacobian."""
        inc = self.faces_by_vertex()
        rows_all = np.concatenate(inc)
        vcol = np.repeat(np.arange(self.n), [len(x) for x in inc])
        return rows_all, vcol

    def tet_rows(self, r, rows=None):
        tri = self.tri if rows is None else self.tri[rows]
        lens = self.lens if rows is None else self.lens[rows]
        out = _kernels.tet_angles(
            r[tri[:, 0]], r[tri[:, 1]], r[tri[:, 2]],
            lens[:, 0], lens[:, 1], lens[:, 2],
        )
        om = np.stack(out[0:3], axis=1)
        ph = np.stack(out[3:6], axis=1)
        return om, ph, out[6]

    def kappa(self, r, om=None):
        if om is None:
            om, _, _ = self.tet_rows(r)
        total = np.zeros(self.n)
        np.add.at(total, self.tri.ravel(), om.ravel())
        return TWO_PI - total

    def valid(self, r, floor):
        if np.any(r <= 0):
            return False
        _, _, margin = self.tet_rows(r)
        return bool(np.all(np.isfinite(margin)) and np.all(margin > floor))

    def jacobian(self, r, fd_scale):
        # forward differences, all columns in one kernel batch: row m
        # perturbs vertex vcol[m] inside face rows_all[m]
        om0, _, _ = self.tet_rows(r)
        rows_all, vcol = self._fd_batch()
        h = fd_scale * r[vcol]
        tri_rows = self.tri[rows_all]
        rv = r[tri_rows] + (tri_rows == vcol[:, None]) * h[:, None]
        lens_rows = self.lens[rows_all]
        out = _kernels.tet_angles(
            rv[:, 0], rv[:, 1], rv[:, 2],
            lens_rows[:, 0], lens_rows[:, 1], lens_rows[:, 2],
        )
        om2 = np.stack(out[0:3], axis=1)
        delta = (om2 - om0[rows_all]) / h[:, None]
        jac = np.zeros((self.n, self.n))
        np.subtract.at(jac, (tri_rows.ravel(), np.repeat(vcol, 3)), delta.ravel())
        return jac

    # -- intrinsic flips ---------------------------------------------------

    def flip(self, t1: int, j1: int, r=None, floor: float = 0.0) -> bool:
        t2, j2 = self.mates[t1, j1]
        t2, j2 = int(t2), int(j2)
        if self.is_seam[t1, j1]:
            return False
        ja, jb, jc = j1, (j1 + 1) % 3, (j1 + 2) % 3
        kb, ka, kd = j2, (j2 + 1) % 3, (j2 + 2) % 3
        va, vb, vc = self.tri[t1, ja], self.tri[t1, jb], self.tri[t1, jc]
        vd = self.tri[t2, kd]
        # copies, not views: these rows are overwritten below
        a = self.chart[t1, ja].copy()
        b = self.chart[t1, jb].copy()
        c = self.chart[t1, jc].copy()
        # develop the far corner into t1's frame across the shared edge
        b2 = self.chart[t2, kb].copy()
        a2 = self.chart[t2, ka].copy()
        d = _develop(b2, a2, self.chart[t2, kd].copy(), b, a)

        # the new diagonal must cross the old one strictly
        if not _quad_convex(a, b, c, d):
            return False

        new_len = float(np.hypot(c[0] - d[0], c[1] - d[1]))
        if r is not None:
            # refuse flips whose replacement tetrahedra are degenerate at
            # the current apex distances; a barely-past-threshold edge can
            # otherwise trade a valid pair for an invalid one
            l_ad = float(self.lens[t2, ka])
            l_db = float(self.lens[t2, kd])
            l_bc = float(self.lens[t1, jb])
            l_ca = float(self.lens[t1, jc])
            ra, rb = float(r[va]), float(r[vb])
            rc, rd = float(r[vc]), float(r[vd])
            if (
                _tet_margin(ra, rd, rc, l_ad, new_len, l_ca) <= floor
                or _tet_margin(rd, rb, rc, l_db, l_bc, new_len) <= floor
            ):
                return False
        m_bc = tuple(self.mates[t1, jb])
        m_ca = tuple(self.mates[t1, jc])
        m_ad = tuple(self.mates[t2, ka])
        m_db = tuple(self.mates[t2, kd])
        l_bc = self.lens[t1, jb]
        l_ca = self.lens[t1, jc]
        l_ad = self.lens[t2, ka]
        l_db = self.lens[t2, kd]
        s_bc = self.is_seam[t1, jb]
        s_ca = self.is_seam[t1, jc]
        s_ad = self.is_seam[t2, ka]
        s_db = self.is_seam[t2, kd]

        self.tri[t1] = (va, vd, vc)
        self.chart[t1] = (a, d, c)
        self.lens[t1] = (l_ad, new_len, l_ca)
        self.is_seam[t1] = (s_ad, False, s_ca)
        self.tri[t2] = (vd, vb, vc)
        self.chart[t2] = (d, b, c)
        self.lens[t2] = (l_db, l_bc, new_len)
        self.is_seam[t2] = (s_db, s_bc, False)
        self.mates[t1] = ((m_ad), (t2, 2), (m_ca))
        self.mates[t2] = ((m_db), (m_bc), (t1, 1))
        for (mt, mj), back in ((m_ad, (t1, 0)), (m_ca, (t1, 2)), (m_db, (t2, 0)), (m_bc, (t2, 1))):
            self.mates[int(mt), int(mj)] = back
        self.flips_done += 1
        self._incidence = None
        return True

    def delaunay_pass(self, r, opts: "ReconstructOptions"):
        """Flip until no interior edge has base dihedrals summing past pi."""
        f = len(self.tri)
        for _ in range(opts.max_flip_sweeps):
            _, ph, _ = self.tet_rows(r)
            flipped = 0
            for t in range(f):
                for j in range(3):
                    mt, mj = int(self.mates[t, j, 0]), int(self.mates[t, j, 1])
                    if (mt, mj) < (t, j) or self.is_seam[t, j]:
                        continue
                    if ph[t, j] + ph[mt, mj] > math.pi + opts.flip_slack:
                        if self.flip(t, j, r, opts.margin_floor):
                            flipped += 1
                            ph[t] = self._ph_row(r, t)
                            ph[mt] = self._ph_row(r, mt)
            if flipped == 0:
                return
        raise SolverError("edge flipping did not settle")

    def _ph_row(self, r, t: int):
        """Base dihedrals of one apex tetrahedron, scalar math.

        Mirrors the kernel but avoids array dispatch; the flip loop calls
        this per touched triangle, which dominates solve time otherwise.
        """
        i0, i1, i2 = self.tri[t]
        r0, r1, r2 = float(r[i0]), float(r[i1]), float(r[i2])
        l01, l12, l20 = (float(x) for x in self.lens[t])
        xb = (r0 * r0 + r1 * r1 - l01 * l01) / (2.0 * r0)
        yb2 = r1 * r1 - xb * xb
        yb = math.sqrt(yb2) if yb2 > 0.0 else 0.0
        xc = (r0 * r0 + r2 * r2 - l20 * l20) / (2.0 * r0)
        yc = (r1 * r1 + r2 * r2 - l12 * l12 - 2.0 * xb * xc) / (2.0 * yb) if yb > 0.0 else 0.0
        zc2 = r2 * r2 - xc * xc - yc * yc
        zc = math.sqrt(zc2) if zc2 > 0.0 else 0.0
        o = (0.0, 0.0, 0.0)
        a = (r0, 0.0, 0.0)
        b = (xb, yb, 0.0)
        c = (xc, yc, zc)
        return (
            _dihedral_scalar(a, b, o, c),
            _dihedral_scalar(b, c, o, a),
            _dihedral_scalar(c, a, o, b),
        )

    def snapshot(self):
        return (
            self.tri.copy(),
            self.lens.copy(),
            self.mates.copy(),
            self.chart.copy(),
            self.is_seam.copy(),
            self.flips_done,
        )

    def restore(self, snap):
        self.tri, self.lens, self.mates, self.chart, self.is_seam, self.flips_done = (
            snap[0].copy(),
            snap[1].copy(),
            snap[2].copy(),
            snap[3].copy(),
            snap[4].copy(),
            snap[5],
        )
        self._incidence = None


def _canonical_charts(lens: np.ndarray) -> np.ndarray:
    """Per-triangle planar coordinates straight from side lengths."""
    l01 = lens[:, 0]
    l12 = lens[:, 1]
    l20 = lens[:, 2]
    x2 = (l01**2 + l20**2 - l12**2) / (2.0 * l01)
    y2 = np.sqrt(np.maximum(l20**2 - x2**2, 0.0))
    chart = np.zeros((len(lens), 3, 2))
    chart[:, 1, 0] = l01
    chart[:, 2, 0] = x2
    chart[:, 2, 1] = y2
    return chart


def _dihedral_scalar(p, q, u, v):
    """Interior dihedral at edge (p, q) flanked by u and v, float math."""
    ex, ey, ez = q[0] - p[0], q[1] - p[1], q[2] - p[2]
    en2 = ex * ex + ey * ey + ez * ez
    if en2 <= 0.0:
        en2 = 1e-300
    ux, uy, uz = u[0] - p[0], u[1] - p[1], u[2] - p[2]
    vx, vy, vz = v[0] - p[0], v[1] - p[1], v[2] - p[2]
    tu = (ux * ex + uy * ey + uz * ez) / en2
    tv = (vx * ex + vy * ey + vz * ez) / en2
    ux, uy, uz = ux - tu * ex, uy - tu * ey, uz - tu * ez
    vx, vy, vz = vx - tv * ex, vy - tv * ey, vz - tv * ez
    dot = ux * vx + uy * vy + uz * vz
    cx = uy * vz - uz * vy
    cy = uz * vx - ux * vz
    cz = ux * vy - uy * vx
    return math.atan2(math.sqrt(cx * cx + cy * cy + cz * cz), dot)


def _develop(b2, a2, d2, b, a):
    """Rigid motion taking segment (b2, a2) to (b, a), applied to d2."""
    u_from = a2 - b2
    u_to = a - b
    nf = math.hypot(u_from[0], u_from[1])
    nt = math.hypot(u_to[0], u_to[1])
    cu = (u_from[0] * u_to[0] + u_from[1] * u_to[1]) / (nf * nt)
    su = (u_from[0] * u_to[1] - u_from[1] * u_to[0]) / (nf * nt)
    v = d2 - b2
    return np.array([b[0] + cu * v[0] - su * v[1], b[1] + su * v[0] + cu * v[1]])


def _tet_margin(r0, r1, r2, l01, l12, l20) -> float:
    """Degeneracy margin of the apex tetrahedron, matching the kernels."""
    xb = (r0 * r0 + r1 * r1 - l01 * l01) / (2.0 * r0)
    yb2 = r1 * r1 - xb * xb
    xc = (r0 * r0 + r2 * r2 - l20 * l20) / (2.0 * r0)
    yc = (r1 * r1 + r2 * r2 - l12 * l12 - 2.0 * xb * xc) / (2.0 * math.sqrt(yb2)) if yb2 > 0.0 else 0.0
    zc2 = r2 * r2 - xc * xc - yc * yc
    scale = max(r0, r1, r2, l01, l12, l20)
    return min(yb2, zc2) / (scale * scale)


def _quad_convex(a, b, c, d) -> bool:
    """c and d strictly on opposite sides of ab, and a and b strictly on
    opposite sides of cd."""

    def cross(p, q, s):
        return (q[0] - p[0]) * (s[1] - p[1]) - (q[1] - p[1]) * (s[0] - p[0])

    s1 = cross(a, b, c)
    s2 = cross(a, b, d)
    s3 = cross(c, d, a)
    s4 = cross(c, d, b)
    return (s1 * s2 < 0.0) and (s3 * s4 < 0.0)


# ---------------------------------------------------------------------------


def solve_variational(
    metric: ConeMetric,
    opts: ReconstructOptions | None = None,
    r0: np.ndarray | None = None,
    max_steps: int | None = None,
):
    """Find apex distances r with kappa(r) = 0 and lay out the vertices.

    `r0` optionally warm-starts the radii (it is ignored when the apex
    tetrahedra it induces are invalid).  Returns (mesh, r, positions,
    info).  Raises SolverError when the path stalls; callers may fall back
    to the least-squares embedding.
    """
    opts = opts or ReconstructOptions()
    budget = opts.max_steps if max_steps is None else max_steps
    mesh = _Mesh(metric)
    history: list = []

    scale = float(mesh.lens.max())
    r = None
    if r0 is not None:
        cand = np.asarray(r0, dtype=float).copy()
        if len(cand) == mesh.n and np.all(cand > 0) and mesh.valid(cand, opts.margin_floor):
            r = cand
            history.append({"event": "warm-start"})
    if r is None:
        r = np.full(mesh.n, 3.0 * scale)
        for _ in range(60):
            if mesh.valid(r, opts.margin_floor):
                break
            r *= 2.0
        else:
            raise SolverError("no valid starting radii", history=history)

    mesh.delaunay_pass(r, opts)
    kappa0 = mesh.kappa(r)
    history.append({"event": "start", "r0": float(r[0]), "kappa_max": float(np.abs(kappa0).max())})

    t = 1.0
    dt = 0.25
    steps = 0
    while t > opts.pin_threshold:
        steps += 1
        if steps > budget:
            raise SolverError("continuation exceeded step budget", history=history)
        t_try = t - dt if t - dt > opts.pin_threshold else opts.pin_threshold
        snap = mesh.snapshot()
        r_snap = r.copy()
        ok = _newton_correct(mesh, r, t_try * kappa0, opts.step_tol, opts)
        if ok:
            history.append({"event": "step", "t": t_try, "dt": dt, "flips": mesh.flips_done})
            t = t_try
            dt = min(2.0 * dt, 0.5)
        else:
            mesh.restore(snap)
            r = r_snap
            dt *= 0.5
            history.append({"event": "backtrack", "t": t, "dt": dt})
            if dt < opts.min_dt:
                raise SolverError("continuation stalled", history=history)

    # Endgame.  At kappa = 0 the closure equations acquire an exact three
    # dimensional null space (apex translations), so three Jacobian
    # directions weaken like t and additive t-steps would need unbounded
    # corrections.  Geometric shrinking of t keeps them bounded.
    if not _geometric_tail(mesh, r, kappa0, t, opts, history):
        raise SolverError("final closure polish failed", history=history)

    residual = float(np.abs(mesh.kappa(r)).max())
    positions, closure = _layout(mesh, r)
    positions, closure = _polish_layout(mesh, r, positions, closure)
    info = {
        "kappa_residual": residual,
        "steps": steps,
        "flips": mesh.flips_done,
        "layout_closure": closure,
        "history": history,
    }
    return mesh, r, positions, info


def _sigma_max(jac: np.ndarray) -> float:
    """Largest singular value by a few rounds of power iteration."""
    v = np.full(jac.shape[1], 1.0 / math.sqrt(jac.shape[1]))
    s = 0.0
    for _ in range(8):
        w = jac.T @ (jac @ v)
        s = float(np.linalg.norm(w))
        if s <= 0.0:
            return 0.0
        v = w / s
    return math.sqrt(s)


def _newton_step(jac: np.ndarray, res: np.ndarray, rcond: float) -> np.ndarray:
    """Damped (Tikhonov) Newton direction.

    The closure equations have an exact three dimensional null space at the
    solution (the apex can translate inside the finished body), so three
    Jacobian directions weaken along the path; near the inflated start the
    uniform breathing direction is weak too, and the residual can lie
    almost entirely inside it.  Hard truncation would then return a zero
    step, while an undamped solve amplifies the weak components by 1/sigma
    and jumps basins.  Damping with lam = rcond * sigma_max keeps strong
    components Newton-exact and weak ones moving at a bounded rate.
    """
    lam = rcond * _sigma_max(jac)
    a = jac.T @ jac
    a[np.diag_indices_from(a)] += lam * lam
    rhs = -(jac.T @ res)
    try:
        return np.linalg.solve(a, rhs)
    except np.linalg.LinAlgError:
        return np.linalg.lstsq(a, rhs, rcond=None)[0]


def _geometric_tail(mesh: _Mesh, r: np.ndarray, kappa0: np.ndarray, t_start: float, opts: ReconstructOptions, history: list) -> bool:
    """Finish the path with multiplicative steps in t.

    Near t = 0 the Jacobian's three apex-translation directions weaken
    proportionally to t, so the state moves by a bounded amount per
    *relative* decrease of t; fixed-size decrements would need unbounded
    steps.  Shrinking t geometrically keeps every corrector solve inside
    its convergence basin all the way down.
    """
    kmax = float(np.abs(kappa0).max())
    if kmax <= 0:
        return True
    t = t_start
    ratio = 0.5
    fails = 0
    while t * kmax > 0.5 * opts.kappa_tol:
        t_try = t * ratio
        tol = max(opts.step_tol, 0.02 * t_try * kmax)
        snap = mesh.snapshot()
        r_snap = r.copy()
        if _newton_correct(mesh, r, t_try * kappa0, tol, opts):
            history.append({"event": "tail-step", "t": t_try, "ratio": ratio})
            t = t_try
            ratio = max(0.5, ratio * ratio)  # speed back up after slowdowns
            fails = 0
        else:
            mesh.restore(snap)
            r[:] = r_snap
            ratio = math.sqrt(ratio)
            fails += 1
            history.append({"event": "tail-backtrack", "t": t, "ratio": ratio})
            if fails > 40 or ratio > 0.999:
                # wedged, usually on a flip tie the path runs along; close
                # enough to zero the final corrector often still lands, so
                # fall through and let it verify rather than give up here
                history.append({"event": "tail-abort", "t": t})
                break
    # residual left by the last nonzero target is below kappa_tol / 2, so
    # one last corrector run at target zero only has noise to clean up
    ok = _newton_correct(mesh, r, np.zeros_like(kappa0), opts.kappa_tol, opts)
    if ok:
        history.append({"event": "tail-final"})
    return ok


def _newton_correct(mesh: _Mesh, r: np.ndarray, target: np.ndarray, tol: float, opts: ReconstructOptions) -> bool:
    """One corrector solve: flips settle first, then damped Newton.

    Trial points are scored on the frozen mesh while they stay valid on
    it; this keeps the search smooth and cheap.  A trial that collapses a
    tetrahedron is not discarded outright: the collapse is the flip event
    (the two base angles at an edge reach pi exactly when the apex becomes
    coplanar with the quad), so the trial is re-scored after a flip pass
    and kept, flips included, if it is valid and decreasing there.

    Damping adapts: full steps relax it, short steps raise it, and a
    rejected step raises it and retries rather than giving up, so the
    iteration only fails after damping alone has stopped helping.  The
    iteration cap is a hard stop; the usual exit for a non-converging
    solve is the stagnation test on the achieved decrease.
    """
    lm = opts.svd_rcond
    grow_left = 4
    stagnant = 0
    for _ in range(opts.max_newton):
        mesh.delaunay_pass(r, opts)
        res = mesh.kappa(r) - target
        if float(np.abs(res).max()) <= tol:
            return True
        norm = float(np.linalg.norm(res))
        jac = mesh.jacobian(r, opts.fd_scale)
        dr = _newton_step(jac, res, lm)
        if not np.all(np.isfinite(dr)):
            return False
        alpha = 1.0
        accepted = False
        while alpha >= 2.0**-24:
            r2 = r + alpha * dr
            if np.all(r2 > 0):
                flip_score = alpha >= 0.5  # near-full steps may cross a flip
                if mesh.valid(r2, opts.margin_floor):
                    res2 = mesh.kappa(r2) - target
                    n2 = float(np.linalg.norm(res2))
                    if n2 < norm * (1.0 - 1e-6 * alpha) or float(np.abs(res2).max()) <= tol:
                        r[:] = r2
                        accepted = True
                        break
                else:
                    flip_score = True  # collapse of a tetrahedron is the flip event
                if flip_score:
                    # kappa is continuous but kinked across flips, so a step
                    # the frozen mesh rejects can be fine on the flipped one
                    snap = mesh.snapshot()
                    try:
                        mesh.delaunay_pass(r2, opts)
                    except SolverError:
                        mesh.restore(snap)
                        alpha *= 0.5
                        continue
                    if mesh.valid(r2, opts.margin_floor):
                        res2 = mesh.kappa(r2) - target
                        n2 = float(np.linalg.norm(res2))
                        if n2 < norm * (1.0 - 1e-6 * alpha) or float(np.abs(res2).max()) <= tol:
                            r[:] = r2
                            accepted = True
                            break
                    mesh.restore(snap)
            alpha *= 0.5
        if not accepted:
            if grow_left > 0 and lm < 3e-2:
                lm = min(lm * 10.0, 3e-2)
                grow_left -= 1
                continue
            return False
        grow_left = 4
        stagnant = stagnant + 1 if n2 > 0.999 * norm else 0
        if stagnant >= 3:
            return False
        if alpha >= 0.5:
            lm = max(lm / 3.0, 1e-9)
        elif alpha <= 2.0**-4:
            lm = min(lm * 5.0, 1e-2)
    mesh.delaunay_pass(r, opts)
    return bool(np.abs(mesh.kappa(r) - target).max() <= tol)


def _layout(mesh: _Mesh, r: np.ndarray):
    """Place vertices in space with the apex at the origin.

    Each new vertex is cut out by three spheres: its apex distance and its
    distances to two already placed vertices of a shared face.  The mirror
    ambiguity resolves by outward orientation (positive determinant with
    the apex inside).
    """
    f = len(mesh.tri)
    pos = np.full((mesh.n, 3), np.nan)
    done = np.zeros(f, dtype=bool)

    t0 = 0
    v0, v1, v2 = (int(x) for x in mesh.tri[t0])
    l01, l12, l20 = (float(x) for x in mesh.lens[t0])
    r0, r1, r2 = float(r[v0]), float(r[v1]), float(r[v2])
    xb = (r0 * r0 + r1 * r1 - l01 * l01) / (2.0 * r0)
    yb = math.sqrt(max(r1 * r1 - xb * xb, 0.0))
    xc = (r0 * r0 + r2 * r2 - l20 * l20) / (2.0 * r0)
    yc = (r1 * r1 + r2 * r2 - l12 * l12 - 2.0 * xb * xc) / (2.0 * yb)
    zc = math.sqrt(max(r2 * r2 - xc * xc - yc * yc, 0.0))
    pos[v0] = (r0, 0.0, 0.0)
    pos[v1] = (xb, yb, 0.0)
    pos[v2] = (xc, yc, zc)  # +z makes det(v0, v1, v2) > 0: outward winding
    done[t0] = True

    queue = deque([t0])
    closure = 0.0
    placed_faces = 1
    while queue:
        t = queue.popleft()
        for j in range(3):
            mt = int(mesh.mates[t, j, 0])
            if done[mt]:
                continue
            ids = [int(x) for x in mesh.tri[mt]]
            known = [k for k in range(3) if np.isfinite(pos[ids[k], 0])]
            if len(known) < 2:
                continue
            if len(known) == 3:
                done[mt] = True
                placed_faces += 1
                queue.append(mt)
                continue
            (miss,) = [k for k in range(3) if k not in known]
            w = ids[miss]
            # sides of mt: side k connects ids[k] -> ids[k+1]
            lp = float(mesh.lens[mt, miss])  # |w -> next| where next = ids[(miss+1)%3]
            lq = float(mesh.lens[mt, (miss + 2) % 3])  # |prev -> w|
            p_id = ids[(miss + 1) % 3]
            q_id = ids[(miss + 2) % 3]
            pw = _trilaterate(pos[p_id], pos[q_id], float(r[w]), lp, lq)
            if pw is None:
                raise SolverError("layout became degenerate")
            # orientation: det of the face in its stored order must be > 0
            tri_pts = [None, None, None]
            tri_pts[miss] = pw[0]
            tri_pts[(miss + 1) % 3] = pos[p_id]
            tri_pts[(miss + 2) % 3] = pos[q_id]
            if np.linalg.det(np.stack(tri_pts)) >= 0:
                pos[w] = pw[0]
            else:
                tri_pts[miss] = pw[1]
                pos[w] = pw[1]
            done[mt] = True
            placed_faces += 1
            queue.append(mt)

    if placed_faces != f or not np.all(np.isfinite(pos)):
        raise SolverError("layout did not reach the whole surface")

    # closure quality: every stored length against the embedding
    d01 = pos[mesh.tri[:, 1]] - pos[mesh.tri[:, 0]]
    d12 = pos[mesh.tri[:, 2]] - pos[mesh.tri[:, 1]]
    d20 = pos[mesh.tri[:, 0]] - pos[mesh.tri[:, 2]]
    got = np.stack(
        [np.linalg.norm(d01, axis=1), np.linalg.norm(d12, axis=1), np.linalg.norm(d20, axis=1)], axis=1
    )
    closure = float(np.max(np.abs(got - mesh.lens) / mesh.lens))
    return pos, closure


def _polish_layout(mesh: _Mesh, r: np.ndarray, pos0: np.ndarray, closure0: float):
    """Global length fit on the placed vertices.

    The breadth-first placement compounds the per-edge angle slack along
    placement chains, so its worst edge error grows with mesh size even
    at fixed kappa tolerance.  A few Gauss-Newton rounds on all length
    equations at once (half-edge lengths plus apex distances, relative
    weights) spread that error evenly and pull it back to solver level.
    """
    a = mesh.tri[:, [0, 1, 1, 2, 2, 0]].reshape(-1, 2)
    lens = mesh.lens.reshape(-1)
    n = mesh.n
    rows3 = np.arange(len(a))
    pos = pos0.copy()
    best, best_closure = pos0, closure0
    for _ in range(8):
        d = pos[a[:, 0]] - pos[a[:, 1]]
        el = np.linalg.norm(d, axis=1)
        u = d / el[:, None]
        res_e = (el - lens) / lens
        rad = np.linalg.norm(pos, axis=1)
        res_r = (rad - r) / r
        worst = max(float(np.abs(res_e).max()), float(np.abs(res_r).max()))
        if worst < best_closure:
            best, best_closure = pos.copy(), worst
        if worst <= 1e-14:
            break
        w = u / lens[:, None]
        rows = np.concatenate([np.repeat(rows3, 3), np.repeat(rows3, 3), len(a) + np.repeat(np.arange(n), 3)])
        cols = np.concatenate([(3 * a[:, 0, None] + np.arange(3)).ravel(), (3 * a[:, 1, None] + np.arange(3)).ravel(), np.arange(3 * n)])
        vals = np.concatenate([w.ravel(), -w.ravel(), (pos / (rad * r)[:, None]).ravel()])
        jac = scipy.sparse.csr_matrix((vals, (rows, cols)), shape=(len(a) + n, 3 * n))
        res = np.concatenate([res_e, res_r])
        dp = scipy.sparse.linalg.lsmr(jac, -res, damp=1e-12, atol=1e-14, btol=1e-14)[0]
        pos += dp.reshape(n, 3)
    return best, best_closure


def _trilaterate(p, q, rw, l_wp, l_wq):
    """Intersect spheres |x| = rw, |x - p| = l_wp, |x - q| = l_wq.

    Returns the two candidates (or None if the configuration is singular).
    """
    cp = 0.5 * (rw * rw + float(p @ p) - l_wp * l_wp)
    cq = 0.5 * (rw * rw + float(q @ q) - l_wq * l_wq)
    gpp = float(p @ p)
    gpq = float(p @ q)
    gqq = float(q @ q)
    det = gpp * gqq - gpq * gpq
    if det <= 0:
        return None
    alpha = (cp * gqq - cq * gpq) / det
    beta = (gpp * cq - gpq * cp) / det
    base = alpha * p + beta * q
    nrm = np.cross(p, q)
    n2 = float(nrm @ nrm)
    if n2 <= 0:
        return None
    gamma2 = (rw * rw - float(base @ base)) / n2
    gamma = math.sqrt(max(gamma2, 0.0))
    return base + gamma * nrm, base - gamma * nrm
