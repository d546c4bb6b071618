"""Least-squares embedding of a cone metric.

This is the robust path: spread the vertices by multidimensional scaling
on graph distances, then push every edge to its metric length with a
sparse Gauss-Newton refinement.  It has no convex-position guarantee, but
it handles the degenerate bodies (flat double covers) that the variational
solver cannot parametrize, and it gives a serviceable warm start.
"""

from __future__ import annotations

import math

import numpy as np
import scipy.optimize
import scipy.sparse
import scipy.sparse.csgraph

from ..metric import ConeMetric


def _edge_list(metric: ConeMetric):
    """Unique undirected edges (a, b, length) from the gluing."""
    tri = metric.triangles
    mates = metric.mates
    seen = set()
    edges = []
    for t in range(len(tri)):
        for j in range(3):
            mt, mj = int(mates[t, j, 0]), int(mates[t, j, 1])
            if (mt, mj) in seen:
                continue
            seen.add((t, j))
            a, b = int(tri[t, j]), int(tri[t, (j + 1) % 3])
            edges.append((a, b, float(metric.tri_lengths[t, j])))
    return edges


def _fit_congruence(src: np.ndarray, dst: np.ndarray):
    """Best planar isometry dst ~ A @ src + t (reflections allowed).

    Returns (A, t, relative rms).
    """
    cs, cd = src.mean(axis=0), dst.mean(axis=0)
    s, d = src - cs, dst - cd
    u, _, vt = np.linalg.svd(s.T @ d)
    a = (u @ vt).T
    t = cd - a @ cs
    rms = float(np.sqrt(((s @ a.T - d) ** 2).sum(axis=1).mean()))
    scale = float(np.sqrt((d**2).sum(axis=1).mean())) or 1.0
    return a, t, rms / scale


def _flat_start(metric: ConeMetric) -> np.ndarray | None:
    """Exact z = 0 start for flat double covers, None for anything else.

    When the seam correspondence is realized by a planar isometry the
    unique convex body is the two coincident layers themselves, which the
    spectral start cannot reach (it inflates, and the squashing descent
    stalls in crumples).  Folding the source charts reproduces the body
    directly.
    """
    if not metric.pieces:
        return None
    pos = np.zeros((metric.n_vertices, 3))
    if metric.kind == "pita":
        return _hinge_start(metric)
    if metric.kind in ("dform", "relaxed") and len(metric.pieces) == 2:
        pa, pb = metric.pieces
        where_a = {int(i): k for k, i in enumerate(pa.boundary_global)}
        src, dst = [], []
        for k, i in enumerate(pb.boundary_global):
            j = where_a.get(int(i))
            if j is None:
                return None
            src.append(pb.boundary_xy[k])
            dst.append(pa.boundary_xy[j])
        a, t, rel = _fit_congruence(np.asarray(src), np.asarray(dst))
        if rel > 1e-8:
            return None
        for ids, pts in ((pa.boundary_global, pa.boundary_xy), (pa.interior_global, pa.interior_xy)):
            for i, p in zip(ids, np.asarray(pts, dtype=float)):
                pos[int(i), :2] = p
        for i, p in zip(pb.interior_global, np.asarray(pb.interior_xy, dtype=float)):
            pos[int(i), :2] = a @ p + t
        return pos
    return None


def _hinge_start(metric: ConeMetric) -> np.ndarray | None:
    """Start a pita by folding its chart across the fold-endpoint chord.

    Each half rotates rigidly about the chord, so every intra-half edge
    keeps its exact metric length and only the seam zipper carries
    residual.  A mirror-symmetric pita closes at opening angle zero (the
    flat double cover itself); otherwise the halves open slightly so the
    descent can leave the plane.
    """
    from ..metric import TAG_FOLD

    ch = metric.pieces[0]
    folds = np.flatnonzero(metric.tags == TAG_FOLD)
    if len(folds) != 2:
        return None
    where = {}
    for k, i in enumerate(ch.boundary_global):
        where.setdefault(int(i), []).append(k)
    try:
        a_xy = np.asarray(ch.boundary_xy[where[int(folds[0])][0]], dtype=float)
        b_xy = np.asarray(ch.boundary_xy[where[int(folds[1])][0]], dtype=float)
    except (KeyError, IndexError):
        return None
    seg = b_xy - a_xy
    seg_len = float(np.hypot(*seg))
    if seg_len <= 0:
        return None
    u = seg / seg_len
    nrm = np.array([-u[1], u[0]])

    def folded_xy(p):
        d = (p - a_xy) @ nrm
        return p - 2.0 * d * nrm if d < 0 else p

    # mirror-exact iff both chart preimages of every seam vertex fold to
    # the same point; then the flat double cover is the body itself
    err = 0.0
    for i, ks in where.items():
        if len(ks) == 2:
            pa = folded_xy(np.asarray(ch.boundary_xy[ks[0]], dtype=float))
            pb = folded_xy(np.asarray(ch.boundary_xy[ks[1]], dtype=float))
            err = max(err, float(np.linalg.norm(pa - pb)))
    phi = 0.0 if err <= 1e-8 * seg_len else 0.35

    def lift(p):
        d = (p - a_xy) @ nrm
        along = (p - a_xy) @ u
        w = abs(d)
        sign = 1.0 if d >= 0 else -1.0
        flat = a_xy + along * u + (math.cos(phi) * w) * nrm
        return np.array([flat[0], flat[1], sign * math.sin(phi) * w])

    pos = np.zeros((metric.n_vertices, 3))
    count = np.zeros(metric.n_vertices)
    for ids, pts in ((ch.boundary_global, ch.boundary_xy), (ch.interior_global, ch.interior_xy)):
        for i, p in zip(ids, np.asarray(pts, dtype=float)):
            pos[int(i)] += lift(p)
            count[int(i)] += 1.0
    pos /= np.maximum(count, 1.0)[:, None]
    return pos


def _mds_start(n: int, edges) -> np.ndarray:
    rows = [e[0] for e in edges] + [e[1] for e in edges]
    cols = [e[1] for e in edges] + [e[0] for e in edges]
    vals = [e[2] for e in edges] * 2
    graph = scipy.sparse.csr_matrix((vals, (rows, cols)), shape=(n, n))
    dist = scipy.sparse.csgraph.shortest_path(graph, method="D", directed=False)
    d2 = dist**2
    # classical MDS: double centering, top three eigenpairs
    j = np.eye(n) - np.full((n, n), 1.0 / n)
    b = -0.5 * j @ d2 @ j
    w, v = np.linalg.eigh(b)
    top = np.argsort(w)[::-1][:3]
    lam = np.clip(w[top], 0.0, None)
    return v[:, top] * np.sqrt(lam)


def solve_least_squares(metric: ConeMetric, max_nfev: int = 400):
    """Embed all vertices so edge lengths match the metric.

    Returns (positions, info).  Deterministic.
    """
    edges = _edge_list(metric)
    n = metric.n_vertices
    x0 = _flat_start(metric)
    start = "flat-fold"
    if x0 is None:
        x0 = _mds_start(n, edges)
        start = "spectral"
    ea = np.array([e[0] for e in edges])
    eb = np.array([e[1] for e in edges])
    el = np.array([e[2] for e in edges])

    rows3 = np.arange(len(edges))
    cols = np.concatenate([(3 * ea[:, None] + np.arange(3)).ravel(), (3 * eb[:, None] + np.arange(3)).ravel()])
    rows = np.concatenate([np.repeat(rows3, 3), np.repeat(rows3, 3)])

    def resid(flat):
        p = flat.reshape(n, 3)
        d = np.linalg.norm(p[ea] - p[eb], axis=1)
        return (d - el) / el

    def jac(flat):
        p = flat.reshape(n, 3)
        d = p[ea] - p[eb]
        u = d / (np.linalg.norm(d, axis=1) * el)[:, None]
        vals = np.concatenate([u.ravel(), -u.ravel()])
        return scipy.sparse.csr_matrix((vals, (rows, cols)), shape=(len(edges), 3 * n))

    out = scipy.optimize.least_squares(
        resid,
        x0.ravel(),
        jac=jac,
        method="trf",
        tr_solver="lsmr",
        max_nfev=max_nfev,
        xtol=1e-14,
        ftol=1e-14,
        gtol=1e-14,
    )
    pos = out.x.reshape(n, 3)
    pos -= pos.mean(axis=0)
    info = {
        "edge_residual": float(np.abs(out.fun).max()),
        "nfev": int(out.nfev),
        "status": int(out.status),
        "start": start,
    }
    return pos, info
