"""Gluing correspondences: normalization, matched intervals, admissibility,
fold endpoint structure."""

from __future__ import annotations

import math

import numpy as np
import pytest

from seamforms import curves as cv
from seamforms import gluing as gl
from seamforms.errors import GluingError

TWO_PI = 2.0 * math.pi


def unit_circle_support():
    return cv.FourierSupport(1.0)


class TestDform:
    def test_normalization_and_scale(self):
        a = cv.Ellipse(2.0, 1.0)
        g = gl.make_dform(a, cv.Ellipse(2.0, 1.0), offset=0.0, n=32)
        assert g.kind == "dform"
        assert g.piece_count == 2
        for p in g.pieces:
            assert p.perimeter() == pytest.approx(TWO_PI, rel=1e-9)
        assert g.scale_factor == pytest.approx(a.perimeter() / TWO_PI, rel=1e-12)

    def test_perimeter_mismatch_rejected(self):
        with pytest.raises(GluingError, match="perimeters differ"):
            gl.make_dform(cv.Ellipse(2.0, 1.0), cv.Ellipse(2.0, 1.01), n=16)

    def test_nonconvex_piece_rejected(self):
        bean = cv.FourierRadial(1.0, [-0.6])
        disk = cv.FourierRadial(1.0).scaled(bean.perimeter() / TWO_PI)
        with pytest.raises(GluingError, match="convex"):
            gl.make_dform(bean, disk, n=16)

    def test_matched_intervals_equal_length(self):
        a = cv.Ellipse(2.0, 1.0)
        b = cv.Stadium(1.0, (a.perimeter() - TWO_PI) / 2.0)
        assert b.perimeter() == pytest.approx(a.perimeter(), rel=1e-14)
        g = gl.make_dform(a, b, offset=1.234, n=48)
        sa, sb = g.boundary_s
        # consecutive gaps are identical on both sides by construction
        da = np.diff(np.concatenate([sa, [TWO_PI]]))
        assert np.allclose(da, TWO_PI / 48, atol=1e-12)
        u = gl.correspondence(g)
        assert np.allclose(np.mod(u(sa) - sb, TWO_PI), 0.0, atol=1e-12)

    def test_offset_in_original_units(self):
        a = cv.Ellipse(2.0, 1.0)
        p = a.perimeter()
        g = gl.make_dform(a, cv.Ellipse(2.0, 1.0), offset=p / 4, n=16)
        assert g.offset == pytest.approx(TWO_PI / 4, rel=1e-12)

    def test_identity_gluing_of_circles(self):
        g = gl.make_dform(unit_circle_support(), unit_circle_support(), offset=0.0, n=16)
        xa, xb = g.boundary_xy
        assert np.allclose(xa, xb, atol=1e-12)

    def test_groups_and_edges(self):
        g = gl.make_dform(unit_circle_support(), unit_circle_support(), n=12)
        assert len(g.groups) == 12
        assert all(len(grp) == 2 for grp in g.groups)
        assert len(g.edge_matches) == 12
        assert g.fold_vertices == ()

    def test_min_samples(self):
        with pytest.raises(GluingError, match="at least 8"):
            gl.make_dform(unit_circle_support(), unit_circle_support(), n=4)


class TestPita:
    def test_fold_structure(self):
        c = cv.Ellipse(2.0, 1.0)
        n = 9
        g = gl.make_pita(c, s0=0.0, n=n)
        m = n - 1
        assert g.fold_vertices == (0, m)
        assert len(g.groups) == n
        assert len(g.groups[0]) == 1 and len(g.groups[m]) == 1
        assert all(len(g.groups[k]) == 2 for k in range(1, m))
        (s,) = g.boundary_s
        assert len(s) == 2 * m
        # matched boundary points are reflections: s0 + t <-> s0 - t
        u = gl.correspondence(g)
        assert np.allclose(np.mod(u(s[1]) - s[2 * m - 1], TWO_PI), 0.0, atol=1e-12)

    def test_fold_endpoints_antipodal(self):
        c = cv.Ellipse(2.0, 1.0)
        g = gl.make_pita(c, s0=1.0, n=11)
        (s,) = g.boundary_s
        m = len(s) // 2
        assert np.mod(s[m] - s[0], TWO_PI) == pytest.approx(math.pi, abs=1e-12)

    def test_s0_in_original_units(self):
        c = cv.Ellipse(2.0, 1.0)
        g = gl.make_pita(c, s0=c.perimeter() / 8, n=9)
        assert g.s0 == pytest.approx(TWO_PI / 8, rel=1e-12)

    def test_nonconvex_rejected(self):
        with pytest.raises(GluingError, match="convex"):
            gl.make_pita(cv.FourierRadial(1.0, [-0.6]), n=9)

    def test_pairing_is_double_curvature(self):
        c = unit_circle_support()
        g = gl.make_pita(c, n=9)
        assert g.pairing.min_sum == pytest.approx(2.0, rel=1e-9)


class TestRelaxed:
    def mild_pair(self):
        # piece B has a dent (kappa_min ~ -1.25 before normalization), piece A
        # is curved enough to compensate at every matched point
        b = cv.FourierRadial(1.0, [-0.6])
        a = cv.FourierSupport(b.perimeter() / TWO_PI, [0.0, 0.12])
        return a, b

    def test_admissible_pair_accepted(self):
        a, b = self.mild_pair()
        g = gl.make_relaxed(a, b, offset=0.0, n=32)
        assert g.kind == "relaxed"
        assert g.pairing.ok
        assert g.pairing.min_sum >= -1e-9

    def test_inadmissible_pair_rejected(self):
        b = cv.FourierRadial(1.0, [-0.6])
        # a circle of matching perimeter: kappa sum dips negative at the dent
        a = cv.FourierSupport(b.perimeter() / TWO_PI)
        with pytest.raises(GluingError, match="local convexity"):
            gl.make_relaxed(a, b, offset=math.pi, n=32)

    def test_report_locates_violation(self):
        b = cv.FourierRadial(1.0, [-0.6])
        a = cv.FourierSupport(b.perimeter() / TWO_PI)
        na = a.scaled(TWO_PI / a.perimeter())
        nb = b.scaled(TWO_PI / b.perimeter())
        rep = gl._pair_report(na, nb, math.pi)
        assert not rep.ok
        assert rep.min_sum < 0
        # the flagged location really is where the matched sum is negative
        ks = float(na.curvature_at(rep.location)) + float(
            nb.curvature_at((math.pi + rep.location) % TWO_PI)
        )
        assert ks == pytest.approx(rep.min_sum, abs=1e-6)


class TestSmearEstimates:
    def test_smooth_smear_scales_with_spacing(self):
        a = cv.Ellipse(2.0, 1.0)
        g1 = gl.make_dform(a, cv.Ellipse(2.0, 1.0), n=32)
        g2 = gl.make_dform(a, cv.Ellipse(2.0, 1.0), n=64)
        assert g1.defect_smear == pytest.approx(2 * g2.defect_smear, rel=0.05)
        assert g1.max_seam_curvature > 0

    def test_polyline_smear_zero(self):
        sq = cv.regular_ngon(4, side=1.0)
        g = gl.make_dform(sq, cv.regular_ngon(4, side=1.0), offset=0.25, n=8)
        assert g.defect_smear == 0.0
        assert g.max_seam_curvature == 0.0
