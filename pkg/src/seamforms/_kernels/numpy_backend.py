"""Vectorized NumPy implementation of the hot kernels.

Both backends (this one and the compiled one) work on flat float64 arrays;
the package-level wrappers in ``seamforms._kernels`` handle broadcasting.
"""

import numpy as np


def tri_angles(l01, l12, l20):
    """Corner angles of a triangle from its side lengths.

    Sides are labeled by the corner pair they join: l01 = |v0 v1| and so on.
    Returns (a0, a1, a2), the interior angles at v0, v1, v2.  Cosines are
    clipped to [-1, 1] so near-degenerate inputs give 0 or pi, not NaN.
    """
    a0 = _corner(l01, l20, l12)
    a1 = _corner(l12, l01, l20)
    a2 = _corner(l20, l12, l01)
    return a0, a1, a2


def _corner(adj1, adj2, opp):
    c = (adj1 * adj1 + adj2 * adj2 - opp * opp) / (2.0 * adj1 * adj2)
    return np.arccos(np.clip(c, -1.0, 1.0))


def tet_angles(r0, r1, r2, l01, l12, l20):
    """Dihedral angles of the tetrahedron (O, v0, v1, v2).

    O is the apex at distance r_i from v_i; the base triangle has sides
    l01, l12, l20.  Returns

        (om0, om1, om2, ph01, ph12, ph20, margin)

    where om_i is the dihedral angle at the lateral edge (O, v_i), ph_ab is
    the dihedral at the base edge (v_a, v_b), and margin is a dimensionless
    validity indicator: positive iff the tetrahedron is non-degenerate.
    Angles for entries with margin <= 0 are computed on a clamped
    configuration and must be ignored by the caller.
    """
    # Canonical coordinates: O at the origin, v0 on +x, v1 in the z=0 plane
    # with y>0, v2 above with z>0.
    xa = r0
    xb = (r0 * r0 + r1 * r1 - l01 * l01) / (2.0 * r0)
    yb2 = r1 * r1 - xb * xb
    yb = np.sqrt(np.maximum(yb2, 0.0))
    xc = (r0 * r0 + r2 * r2 - l20 * l20) / (2.0 * r0)
    with np.errstate(divide="ignore", invalid="ignore"):
        yc = (r1 * r1 + r2 * r2 - l12 * l12 - 2.0 * xb * xc) / (2.0 * yb)
    yc = np.where(yb > 0.0, yc, 0.0)
    zc2 = r2 * r2 - xc * xc - yc * yc
    zc = np.sqrt(np.maximum(zc2, 0.0))

    scale = np.maximum.reduce([r0, r1, r2, l01, l12, l20])
    margin = np.minimum(yb2, zc2) / (scale * scale)

    zeros = np.zeros_like(xa)
    o = np.stack([zeros, zeros, zeros], axis=-1)
    a = np.stack([xa, zeros, zeros], axis=-1)
    b = np.stack([xb, yb, zeros], axis=-1)
    c = np.stack([xc, yc, zc], axis=-1)

    om0 = _dihedral(o, a, b, c)
    om1 = _dihedral(o, b, a, c)
    om2 = _dihedral(o, c, a, b)
    ph01 = _dihedral(a, b, o, c)
    ph12 = _dihedral(b, c, o, a)
    ph20 = _dihedral(c, a, o, b)
    return om0, om1, om2, ph01, ph12, ph20, margin


def _dihedral(p, q, u, v):
    """Interior dihedral angle at edge (p, q) flanked by vertices u and v."""
    e = q - p
    en2 = np.einsum("...i,...i->...", e, e)
    en2 = np.maximum(en2, 1e-300)
    du = u - p
    dv = v - p
    du = du - e * (np.einsum("...i,...i->...", du, e) / en2)[..., None]
    dv = dv - e * (np.einsum("...i,...i->...", dv, e) / en2)[..., None]
    dot = np.einsum("...i,...i->...", du, dv)
    cr = np.cross(du, dv)
    return np.arctan2(np.linalg.norm(cr, axis=-1), dot)
