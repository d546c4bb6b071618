"""Kernel correctness: triangle angles and apex-tetrahedron dihedrals are
checked against direct coordinate geometry, and the compiled backend must
agree with the NumPy backend bit-for-bit-ish on random batches."""

from __future__ import annotations

import math

import numpy as np
import pytest

from seamforms import _kernels as K
from seamforms._kernels import numpy_backend


def brute_dihedral(p, q, u, v):
    e = q - p
    e = e / np.linalg.norm(e)
    du = (u - p) - ((u - p) @ e) * e
    dv = (v - p) - ((v - p) @ e) * e
    return math.atan2(np.linalg.norm(np.cross(du, dv)), du @ dv)


def random_tets(rng, n):
    """Random non-degenerate apex tets built from actual coordinates."""
    pts = rng.uniform(-1.0, 1.0, size=(n, 3, 3))
    # push base points away from the origin so r_i stays well conditioned
    pts += np.sign(pts) * 0.2
    o = np.zeros(3)
    r = np.linalg.norm(pts, axis=2)
    l01 = np.linalg.norm(pts[:, 0] - pts[:, 1], axis=1)
    l12 = np.linalg.norm(pts[:, 1] - pts[:, 2], axis=1)
    l20 = np.linalg.norm(pts[:, 2] - pts[:, 0], axis=1)
    return pts, o, r, l01, l12, l20


class TestTriAngles:
    def test_equilateral(self):
        a0, a1, a2 = K.tri_angles(1.0, 1.0, 1.0)
        assert np.allclose([a0, a1, a2], math.pi / 3)

    def test_right_triangle(self):
        # sides |v0v1|=3, |v1v2|=4, |v2v0|=5: right angle at v1
        a0, a1, a2 = K.tri_angles(3.0, 4.0, 5.0)
        assert a1 == pytest.approx(math.pi / 2, abs=1e-14)
        assert a0 == pytest.approx(math.atan2(4.0, 3.0), abs=1e-14)
        assert a2 == pytest.approx(math.atan2(3.0, 4.0), abs=1e-14)

    def test_angle_sum_random(self):
        rng = np.random.default_rng(7)
        a = rng.uniform(0.5, 2.0, 500)
        b = rng.uniform(0.5, 2.0, 500)
        c = np.abs(a - b) + rng.uniform(0.05, 1.0, 500) * (a + b - np.abs(a - b))
        s = np.sum(K.tri_angles(a, b, c), axis=0)
        assert np.allclose(s, math.pi, atol=1e-12)

    def test_degenerate_is_clipped(self):
        # collinear: the angle opposite the long side (at v1) flattens to pi
        a0, a1, a2 = K.tri_angles(1.0, 1.0, 2.0)
        assert np.isfinite([a0, a1, a2]).all()
        assert a1 == pytest.approx(math.pi, abs=1e-7)
        assert a0 == pytest.approx(0.0, abs=1e-7)


class TestTetAngles:
    def test_regular_tet(self):
        out = K.tet_angles(1.0, 1.0, 1.0, 1.0, 1.0, 1.0)
        expected = math.acos(1.0 / 3.0)  # dihedral of the regular tetrahedron
        for ang in out[:6]:
            assert ang == pytest.approx(expected, abs=1e-13)
        assert out[6] > 0.5

    def test_against_coordinates(self):
        rng = np.random.default_rng(42)
        pts, o, r, l01, l12, l20 = random_tets(rng, 200)
        om0, om1, om2, ph01, ph12, ph20, margin = K.tet_angles(
            r[:, 0], r[:, 1], r[:, 2], l01, l12, l20
        )
        ok = margin > 1e-10
        assert ok.mean() > 0.9
        for i in np.nonzero(ok)[0][:60]:
            a, b, c = pts[i]
            assert om0[i] == pytest.approx(brute_dihedral(o, a, b, c), abs=1e-9)
            assert om1[i] == pytest.approx(brute_dihedral(o, b, a, c), abs=1e-9)
            assert om2[i] == pytest.approx(brute_dihedral(o, c, a, b), abs=1e-9)
            assert ph01[i] == pytest.approx(brute_dihedral(a, b, o, c), abs=1e-9)
            assert ph12[i] == pytest.approx(brute_dihedral(b, c, o, a), abs=1e-9)
            assert ph20[i] == pytest.approx(brute_dihedral(c, a, o, b), abs=1e-9)

    def test_flat_apex_margin(self):
        # apex at the circumcenter of the unit base triangle is coplanar
        r = 1.0 / math.sqrt(3.0)
        out = K.tet_angles(r, r, r, 1.0, 1.0, 1.0)
        assert out[6] == pytest.approx(0.0, abs=1e-12)

    def test_impossible_tet_margin_negative(self):
        out = K.tet_angles(1.0, 1.0, 10.0, 1.0, 1.0, 1.0)
        assert out[6] < 0

    def test_broadcasting(self):
        r = np.ones((3, 4))
        out = K.tet_angles(r, 1.0, 1.0, 1.0, 1.0, 1.0)
        assert out[0].shape == (3, 4)


class TestBackendParity:
    def test_backends_agree(self):
        if K.BACKEND != "cython":
            pytest.skip("compiled backend not built; nothing to compare")
        rng = np.random.default_rng(3)
        _, _, r, l01, l12, l20 = random_tets(rng, 5000)
        args = [np.ascontiguousarray(x) for x in (r[:, 0], r[:, 1], r[:, 2], l01, l12, l20)]
        fast = K._impl.tet_angles(*args)
        slow = numpy_backend.tet_angles(*args)
        for f, s in zip(fast, slow):
            assert np.allclose(f, s, atol=1e-12, rtol=1e-12)
        tfast = K._impl.tri_angles(*args[3:6])
        tslow = numpy_backend.tri_angles(*args[3:6])
        for f, s in zip(tfast, tslow):
            assert np.allclose(f, s, atol=1e-13)
