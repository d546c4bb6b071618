# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled scalar-loop implementation of the hot kernels.

Mirrors seamforms._kernels.numpy_backend exactly; the parity test compares
the two on random batches.
"""

import numpy as np

from libc.math cimport acos, atan2, sqrt


cdef inline double _clip1(double c) nogil:
    if c > 1.0:
        return 1.0
    if c < -1.0:
        return -1.0
    return c


cdef inline double _corner(double adj1, double adj2, double opp) nogil:
    return acos(_clip1((adj1 * adj1 + adj2 * adj2 - opp * opp) / (2.0 * adj1 * adj2)))


def tri_angles(double[::1] l01, double[::1] l12, double[::1] l20):
    cdef Py_ssize_t n = l01.shape[0]
    cdef Py_ssize_t i
    a0 = np.empty(n)
    a1 = np.empty(n)
    a2 = np.empty(n)
    cdef double[::1] v0 = a0
    cdef double[::1] v1 = a1
    cdef double[::1] v2 = a2
    for i in range(n):
        v0[i] = _corner(l01[i], l20[i], l12[i])
        v1[i] = _corner(l12[i], l01[i], l20[i])
        v2[i] = _corner(l20[i], l12[i], l01[i])
    return a0, a1, a2


cdef inline double _dih(double px, double py, double pz,
                        double qx, double qy, double qz,
                        double ux, double uy, double uz,
                        double vx, double vy, double vz) nogil:
    # interior dihedral at edge (p, q) flanked by u and v
    cdef double ex = qx - px, ey = qy - py, ez = qz - pz
    cdef double en2 = ex * ex + ey * ey + ez * ez
    cdef double ax = ux - px, ay = uy - py, az = uz - pz
    cdef double bx = vx - px, by = vy - py, bz = vz - pz
    cdef double ta, tb, dot, cx, cy, cz
    if en2 < 1e-300:
        en2 = 1e-300
    ta = (ax * ex + ay * ey + az * ez) / en2
    ax -= ta * ex
    ay -= ta * ey
    az -= ta * ez
    tb = (bx * ex + by * ey + bz * ez) / en2
    bx -= tb * ex
    by -= tb * ey
    bz -= tb * ez
    dot = ax * bx + ay * by + az * bz
    cx = ay * bz - az * by
    cy = az * bx - ax * bz
    cz = ax * by - ay * bx
    return atan2(sqrt(cx * cx + cy * cy + cz * cz), dot)


def tet_angles(double[::1] r0, double[::1] r1, double[::1] r2,
               double[::1] l01, double[::1] l12, double[::1] l20):
    cdef Py_ssize_t n = r0.shape[0]
    cdef Py_ssize_t i
    om0 = np.empty(n)
    om1 = np.empty(n)
    om2 = np.empty(n)
    ph01 = np.empty(n)
    ph12 = np.empty(n)
    ph20 = np.empty(n)
    marg = np.empty(n)
    cdef double[::1] o0 = om0, o1 = om1, o2 = om2
    cdef double[::1] p01 = ph01, p12 = ph12, p20 = ph20
    cdef double[::1] mg = marg
    cdef double ra, rb, rc, lab, lbc, lca
    cdef double xa, xb, yb2, yb, xc, yc, zc2, zc, scale, m
    for i in range(n):
        ra = r0[i]
        rb = r1[i]
        rc = r2[i]
        lab = l01[i]
        lbc = l12[i]
        lca = l20[i]
        xa = ra
        xb = (ra * ra + rb * rb - lab * lab) / (2.0 * ra)
        yb2 = rb * rb - xb * xb
        yb = sqrt(yb2) if yb2 > 0.0 else 0.0
        xc = (ra * ra + rc * rc - lca * lca) / (2.0 * ra)
        if yb > 0.0:
            yc = (rb * rb + rc * rc - lbc * lbc - 2.0 * xb * xc) / (2.0 * yb)
        else:
            yc = 0.0
        zc2 = rc * rc - xc * xc - yc * yc
        zc = sqrt(zc2) if zc2 > 0.0 else 0.0
        scale = ra
        if rb > scale:
            scale = rb
        if rc > scale:
            scale = rc
        if lab > scale:
            scale = lab
        if lbc > scale:
            scale = lbc
        if lca > scale:
            scale = lca
        m = yb2 if yb2 < zc2 else zc2
        mg[i] = m / (scale * scale)

        o0[i] = _dih(0, 0, 0, xa, 0, 0, xb, yb, 0, xc, yc, zc)
        o1[i] = _dih(0, 0, 0, xb, yb, 0, xa, 0, 0, xc, yc, zc)
        o2[i] = _dih(0, 0, 0, xc, yc, zc, xa, 0, 0, xb, yb, 0)
        p01[i] = _dih(xa, 0, 0, xb, yb, 0, 0, 0, 0, xc, yc, zc)
        p12[i] = _dih(xb, yb, 0, xc, yc, zc, 0, 0, 0, xa, 0, 0)
        p20[i] = _dih(xc, yc, zc, xa, 0, 0, 0, 0, 0, xb, yb, 0)
    return om0, om1, om2, ph01, ph12, ph20, marg
