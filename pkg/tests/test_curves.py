"""Curve kinds: perimeters against independently computed references,
arclength parameterization, curvature, convexity, sampling, scaling."""

from __future__ import annotations

import math

import numpy as np
import pytest

from seamforms import curves as cv
from seamforms.errors import CurveError

TWO_PI = 2.0 * math.pi

# Frozen reference values, computed with mpmath at 40 digits via
# singularity-free quadrant graph integrals (split at |x/a|^p = 1/2).
PERIMETERS = {
    ("ellipse", 2.0, 1.0): 9.68844822054767619843,
    ("superellipse", 1.0, 1.0, 4.0): 7.01769794356404164711,
    ("superellipse", 2.0, 1.0, 3.0): 10.2911641985458739706,
    ("superellipse", 1.5, 1.0, 2.5): 8.24574166608074214413,
    ("fourier-radial", 1.0, -0.6): 6.86273742012546737837,
}


def all_kinds():
    return [
        cv.Ellipse(2.0, 1.0),
        cv.Superellipse(1.0, 1.0, 4.0),
        cv.Stadium(1.0, 2.0),
        cv.FourierSupport(1.0, [0.0, 0.12], [0.0, 0.0, 0.05]),
        cv.FourierRadial(1.0, [-0.3], [0.1]),
        cv.regular_ngon(7, side=1.0),
    ]


class TestPerimeters:
    def test_ellipse_reference(self):
        e = cv.Ellipse(2.0, 1.0)
        assert e.perimeter() == pytest.approx(PERIMETERS[("ellipse", 2.0, 1.0)], rel=1e-13)

    @pytest.mark.parametrize("a,b,p", [(1.0, 1.0, 4.0), (2.0, 1.0, 3.0), (1.5, 1.0, 2.5)])
    def test_superellipse_reference(self, a, b, p):
        se = cv.Superellipse(a, b, p)
        assert se.perimeter() == pytest.approx(PERIMETERS[("superellipse", a, b, p)], rel=1e-12)

    def test_superellipse_p2_is_ellipse(self):
        se = cv.Superellipse(2.0, 1.0, 2.0)
        e = cv.Ellipse(2.0, 1.0)
        assert se.perimeter() == pytest.approx(e.perimeter(), rel=1e-12)
        s = np.linspace(0.0, e.perimeter(), 17)[:-1]
        assert np.allclose(se.point_at_arclength(s), e.point_at_arclength(s), atol=1e-9)

    def test_stadium_exact(self):
        st = cv.Stadium(1.0, 2.0)
        assert st.perimeter() == pytest.approx(TWO_PI + 4.0, rel=1e-15)

    def test_fourier_support_exact(self):
        fs = cv.FourierSupport(1.3, [0.0, 0.1], [0.0, 0.0, 0.02])
        assert fs.perimeter() == pytest.approx(TWO_PI * 1.3, rel=1e-15)

    def test_fourier_radial_reference(self):
        fr = cv.FourierRadial(1.0, [-0.6])
        assert fr.perimeter() == pytest.approx(PERIMETERS[("fourier-radial", 1.0, -0.6)], rel=1e-12)

    def test_polyline_exact(self):
        ngon = cv.regular_ngon(4, side=2.0)
        assert ngon.perimeter() == pytest.approx(8.0, rel=1e-15)


class TestArclengthParameterization:
    @pytest.mark.parametrize("curve", all_kinds(), ids=lambda c: c.kind)
    def test_chord_sums_converge_to_perimeter(self, curve):
        p = curve.perimeter()
        _, pts = curve.sample_by_arclength(20000)
        chords = np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1)
        # corners are cut at first order, so polygons converge more slowly
        rel = 1e-4 if curve.kind == "polyline" else 1e-6
        assert chords.sum() == pytest.approx(p, rel=rel)

    @pytest.mark.parametrize(
        "curve", [c for c in all_kinds() if c.kind != "polyline"], ids=lambda c: c.kind
    )
    def test_unit_speed(self, curve):
        # equal arclength steps give equal chord lengths (corner kinds break
        # this at the corner-straddling chords, so polylines are excluded)
        p = curve.perimeter()
        s = np.linspace(0.1 * p, 0.9 * p, 5001)
        pts = curve.point_at_arclength(s)
        chords = np.linalg.norm(np.diff(pts, axis=0), axis=1)
        ds = s[1] - s[0]
        assert np.max(np.abs(chords - ds)) < 1e-3 * ds

    @pytest.mark.parametrize("curve", all_kinds(), ids=lambda c: c.kind)
    def test_periodicity(self, curve):
        p = curve.perimeter()
        s = np.array([0.2 * p, 0.7 * p])
        a = curve.point_at_arclength(s)
        b = curve.point_at_arclength(s + 3.0 * p)
        c = curve.point_at_arclength(s - p)
        assert np.allclose(a, b, atol=1e-9 * p)
        assert np.allclose(a, c, atol=1e-9 * p)


class TestCurvature:
    def test_ellipse_extremes(self):
        e = cv.Ellipse(2.0, 1.0)
        assert e.curvature_at(0.0) == pytest.approx(2.0, rel=1e-10)  # a/b^2
        assert e.curvature_at(e.perimeter() / 4) == pytest.approx(0.25, rel=1e-10)  # b/a^2

    @pytest.mark.parametrize(
        "curve",
        [
            cv.Ellipse(2.0, 1.0),
            cv.Superellipse(1.5, 1.0, 3.0),
            cv.FourierSupport(1.0, [0.0, 0.12]),
            cv.FourierRadial(1.0, [-0.45], [0.2]),
        ],
        ids=lambda c: c.kind,
    )
    def test_matches_finite_difference_turning(self, curve):
        p = curve.perimeter()
        h = 1e-5 * p
        for frac in (0.13, 0.37, 0.61, 0.83):
            s0 = frac * p
            pts = curve.point_at_arclength(np.array([s0 - h, s0, s0 + h]))
            t1 = pts[1] - pts[0]
            t2 = pts[2] - pts[1]
            ang = math.atan2(t1[0] * t2[1] - t1[1] * t2[0], t1 @ t2)
            assert ang / h == pytest.approx(float(curve.curvature_at(s0)), rel=2e-4, abs=1e-6)

    def test_stadium_piecewise(self):
        st = cv.Stadium(1.0, 2.0)
        assert st.curvature_at(1.0) == 0.0  # mid bottom straight
        assert st.curvature_at(2.0 + math.pi / 2) == 1.0  # mid right cap
        # joint ownership: the cap owns its start
        assert st.curvature_at(2.0) == 1.0
        assert st.curvature_at(2.0 + math.pi) == 0.0

    def test_superellipse_flat_axes(self):
        se = cv.Superellipse(1.0, 1.0, 4.0)
        assert abs(float(se.curvature_at(0.0))) < 1e-12

    def test_polyline_curvature_raises(self):
        ngon = cv.regular_ngon(5, side=1.0)
        with pytest.raises(CurveError, match="turning_angles"):
            ngon.curvature_at(0.3)
        assert np.allclose(ngon.turning_angles(), TWO_PI / 5)


class TestConvexity:
    def test_convex_kinds(self):
        for curve in [cv.Ellipse(2.0, 1.0), cv.Superellipse(1.0, 1.0, 4.0), cv.Stadium(1.0, 2.0)]:
            rep = curve.is_convex()
            assert rep.ok
            assert rep.min_curvature >= -1e-9
            assert rep.total_turning == pytest.approx(TWO_PI, rel=1e-6)

    def test_nonconvex_radial_reports_violation(self):
        fr = cv.FourierRadial(1.0, [-0.6])
        rep = fr.is_convex()
        assert not rep.ok
        assert rep.min_curvature == pytest.approx(-1.25, rel=1e-6)
        # violation location must actually be a spot of negative curvature
        assert float(fr.curvature_at(rep.min_location)) < 0
        # rotation index of a simple closed curve is still 1
        assert rep.total_turning == pytest.approx(TWO_PI, rel=1e-6)

    def test_nonconvex_polyline(self):
        arrow = cv.Polyline([(0, 0), (2, 0), (2, 2), (1, 0.5), (0, 2)])
        rep = arrow.is_convex()
        assert not rep.ok
        assert rep.min_curvature < 0
        assert rep.total_turning == pytest.approx(TWO_PI, abs=1e-12)


class TestSampling:
    def test_sample_spacing_and_offset(self):
        e = cv.Ellipse(2.0, 1.0)
        p = e.perimeter()
        s, pts = e.sample_by_arclength(32, offset=0.3)
        assert len(s) == len(pts) == 32
        assert s[0] == pytest.approx(0.3)
        gaps = np.diff(np.sort(s))
        assert np.allclose(gaps, p / 32, atol=1e-12)

    def test_sample_rejects_tiny_n(self):
        with pytest.raises(CurveError):
            cv.Ellipse(1.0, 1.0).sample_by_arclength(2)


class TestScaling:
    @pytest.mark.parametrize("curve", all_kinds(), ids=lambda c: c.kind)
    def test_scaled_geometry(self, curve):
        lam = 2.5
        big = curve.scaled(lam)
        assert big.perimeter() == pytest.approx(lam * curve.perimeter(), rel=1e-12)
        s = 0.4 * curve.perimeter()
        a = np.asarray(curve.point_at_arclength(s))
        b = np.asarray(big.point_at_arclength(lam * s))
        assert np.allclose(lam * a, b, atol=1e-9)

    def test_scaled_curvature(self):
        e = cv.Ellipse(2.0, 1.0)
        big = e.scaled(2.0)
        assert float(big.curvature_at(0.0)) == pytest.approx(0.5 * float(e.curvature_at(0.0)), rel=1e-9)


class TestValidationAndSerialization:
    def test_bad_parameters(self):
        with pytest.raises(CurveError):
            cv.Ellipse(-1.0, 1.0)
        with pytest.raises(CurveError):
            cv.Superellipse(1.0, 1.0, 1.5)  # unbounded curvature at axes
        with pytest.raises(CurveError):
            cv.Stadium(0.0, 1.0)
        with pytest.raises(CurveError, match="strictly convex"):
            cv.FourierSupport(1.0, [0.0, 0.6])  # h + h'' dips negative
        with pytest.raises(CurveError, match="positive"):
            cv.FourierRadial(1.0, [-1.2])
        with pytest.raises(CurveError, match="oriented"):
            cv.Polyline([(0, 0), (0, 1), (1, 1), (1, 0)])  # clockwise
        with pytest.raises(CurveError, match="self-intersect"):
            cv.Polyline([(0, 0), (4, 0), (4, 3), (1, -1), (0, 3)])

    def test_make_curve_errors(self):
        with pytest.raises(CurveError, match="unknown curve kind"):
            cv.make_curve({"kind": "blob"})
        with pytest.raises(CurveError, match="missing parameter"):
            cv.make_curve({"kind": "ellipse", "a": 1.0})

    @pytest.mark.parametrize("curve", all_kinds(), ids=lambda c: c.kind)
    def test_dict_roundtrip(self, curve):
        clone = cv.make_curve(curve.to_dict())
        assert clone.kind == curve.kind
        assert clone.perimeter() == pytest.approx(curve.perimeter(), rel=1e-12)
        s = np.linspace(0, curve.perimeter(), 7)
        assert np.allclose(clone.point_at_arclength(s), curve.point_at_arclength(s), atol=1e-10)

    def test_functional_aliases(self):
        e = cv.Ellipse(2.0, 1.0)
        assert cv.perimeter(e) == e.perimeter()
        assert np.allclose(cv.point_at_arclength(e, 0.0), e.point_at_arclength(0.0))
        assert cv.is_convex(e).ok
        s, pts = cv.sample_by_arclength(e, 12)
        assert pts.shape == (12, 2)
