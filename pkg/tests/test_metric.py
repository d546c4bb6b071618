import math

import numpy as np
import pytest

from seamforms.curves import (
    Ellipse,
    FourierRadial,
    FourierSupport,
    Polyline,
    Stadium,
    regular_ngon,
)
from seamforms.errors import MeshingError
from seamforms.gluing import make_dform, make_pita, make_relaxed
from seamforms.metric import (
    TAG_FOLD,
    TAG_INTERIOR,
    TAG_SEAM,
    ConeMetric,
    cube_metric,
    regular_tetrahedron_metric,
    triangulate,
    validate,
)

TWO_PI = 2.0 * math.pi
FOUR_PI = 4.0 * math.pi

ELLIPSE_PERIMETER = 9.68844822054767619843


def unit_square():
    return Polyline([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])


def pillow_metric(n=16, **kw):
    return triangulate(make_dform(unit_square(), unit_square(), n=n), **kw)


def fig_dform_metric(n=200, **kw):
    ell = Ellipse(2.0, 1.0)
    straight = (ELLIPSE_PERIMETER - TWO_PI) / 2.0
    return triangulate(make_dform(ell, Stadium(1.0, straight), n=n), **kw)


def pita_metric(n=40, frac=0.125, **kw):
    ell = Ellipse(2.0, 1.0)
    return triangulate(make_pita(ell, frac * ELLIPSE_PERIMETER, n), **kw)


def relaxed_metric(n=160, **kw):
    dent = FourierRadial(1.0, [-0.6])
    smooth = FourierSupport(dent.perimeter() / TWO_PI, [0.0, 0.12])
    return triangulate(make_relaxed(smooth, dent, n=n), **kw)


def ngon_glue_metric(sides=6, **kw):
    gon = regular_ngon(sides, side=1.0)
    return triangulate(make_dform(gon, gon, offset=0.5, n=2 * sides), **kw)


class TestDefects:
    def test_pillow_corner_defects(self):
        m = pillow_metric(16)
        d = m.defects()
        # samples hit the four corners at seam positions 0, 4, 8, 12
        for k in (0, 4, 8, 12):
            assert d[k] == pytest.approx(math.pi, abs=1e-12)
        for k in range(16):
            if k not in (0, 4, 8, 12):
                assert abs(d[k]) < 1e-12

    def test_ngon_seam_defects(self):
        for sides in (4, 6, 9):
            m = ngon_glue_metric(sides)
            d = m.defects()
            seam = m.tags != TAG_INTERIOR
            np.testing.assert_allclose(d[seam], TWO_PI / sides, atol=1e-12)

    def test_pita_fold_defects(self):
        m = pita_metric(40)
        d = m.defects()
        folds = np.nonzero(m.tags == TAG_FOLD)[0]
        assert len(folds) == 2
        for f in folds:
            # one wedge of total angle ~pi - kappa * dt
            assert math.pi - 1e-9 <= d[f] <= math.pi + 0.15
        others = (m.tags == TAG_SEAM)
        assert np.max(d[others]) < 1.5 * m.defect_smear

    def test_gauss_bonnet(self):
        for m in (
            pillow_metric(16),
            fig_dform_metric(120),
            pita_metric(40),
            relaxed_metric(120),
            ngon_glue_metric(6),
        ):
            assert abs(m.defects().sum() - FOUR_PI) < 1e-9

    def test_interior_flat(self):
        for m in (fig_dform_metric(200), pita_metric(80), relaxed_metric(160)):
            interior = m.tags == TAG_INTERIOR
            assert interior.sum() > 0
            assert np.max(np.abs(m.defects()[interior])) < 1e-12

    def test_seam_defect_scale(self):
        # smooth seam vertices carry roughly (kappa_a + kappa_b) * spacing
        m = fig_dform_metric(200)
        d = m.defects()
        seam = m.tags == TAG_SEAM
        assert np.max(d[seam]) < 1.5 * m.defect_smear
        assert np.min(d[seam]) > 0.0


class TestStrictness:
    def test_pillow_strict_set(self):
        m = pillow_metric(16)
        assert set(m.strict_vertices().tolist()) == {0, 4, 8, 12}

    def test_smooth_dform_has_no_strict_seam(self):
        m = fig_dform_metric(200)
        assert len(m.strict_vertices()) == 0

    def test_pita_folds_strict(self):
        m = pita_metric(40)
        strict = set(m.strict_vertices().tolist())
        folds = set(np.nonzero(m.tags == TAG_FOLD)[0].tolist())
        assert folds <= strict
        assert strict - folds == set()


class TestStructure:
    def test_seam_halves_span_both_pieces(self):
        m = fig_dform_metric(120)
        for k in range(len(m.seam_edge_half)):
            (t1, j1), (t2, j2) = m.seam_edge_half[k]
            assert tuple(m.mates[t1, j1]) == (t2, j2)
            assert {int(m.tri_piece[t1]), int(m.tri_piece[t2])} == {0, 1}
            a, b = m.half_edge_vertices(int(t1), int(j1))
            assert {a, b} == set(m.seam_edges[k].tolist())

    def test_seam_lengths_agree_across_pieces(self):
        m = fig_dform_metric(120)
        for (t1, j1), (t2, j2) in m.seam_edge_half:
            l1 = m.tri_lengths[t1, j1]
            l2 = m.tri_lengths[t2, j2]
            assert abs(l1 - l2) <= 1e-12 * max(l1, l2)

    def test_gluing_is_involution(self):
        m = pita_metric(40)
        for t in range(len(m.triangles)):
            for j in range(3):
                mt, mj = m.mates[t, j]
                assert tuple(m.mates[mt, mj]) == (t, j)
        assert m.n_vertices - m.n_edges() + len(m.triangles) == 2

    def test_congruent_pieces_need_parallel_edges(self):
        # identical square charts generate the same interior chords between
        # seam vertices in both pieces: those are distinct surface edges
        m = pillow_metric(32)
        pair_counts: dict = {}
        for t in range(len(m.triangles)):
            for j in range(3):
                a, b = m.half_edge_vertices(t, j)
                if m.tags[a] != TAG_INTERIOR and m.tags[b] != TAG_INTERIOR:
                    pair_counts[(min(a, b), max(a, b))] = pair_counts.get((min(a, b), max(a, b)), 0) + 1
        assert max(pair_counts.values()) == 4  # two real edges, two halves each

    def test_chart_consistency(self):
        m = fig_dform_metric(120)
        assert m.tri_chart is not None
        for t in range(len(m.triangles)):
            v = m.tri_chart[t]
            for j in range(3):
                ln = np.linalg.norm(v[(j + 1) % 3] - v[j])
                assert ln == pytest.approx(m.tri_lengths[t, j], abs=1e-12)

    def test_skeleton_drops_interior_only(self):
        from seamforms.metric import skeleton_of

        m = fig_dform_metric(120)
        sk = skeleton_of(m)
        assert sk.n_vertices == 120
        assert np.all(sk.tags != TAG_INTERIOR)
        np.testing.assert_array_equal(sk.seam_edges, m.seam_edges)
        # seam edge lengths are identical: both meshes use the same
        # projected polygons
        su = {tuple(e): None for e in sk.seam_edges.tolist()}
        assert len(su) == len(m.seam_edges)
        for k in range(len(sk.seam_edge_half)):
            (t1, j1), _ = sk.seam_edge_half[k]
            (t1m, j1m), _ = m.seam_edge_half[k]
            assert sk.tri_lengths[t1, j1] == pytest.approx(m.tri_lengths[t1m, j1m], abs=0)
        assert abs(sk.defects().sum() - FOUR_PI) < 1e-9

    def test_skeleton_of_pita(self):
        from seamforms.metric import skeleton_of

        m = pita_metric(40)
        sk = skeleton_of(m)
        assert sk.n_vertices == 40
        assert (sk.tags == TAG_FOLD).sum() == 2
        assert abs(sk.defects().sum() - FOUR_PI) < 1e-9
        # identical seam defects as the full metric
        np.testing.assert_allclose(sk.defects()[:40], m.defects()[:40], atol=1e-12)

    def test_seam_chains(self):
        m = fig_dform_metric(120)
        (chain,) = m.seam_chains
        assert chain["closed"] is True
        assert chain["vertices"] == list(range(120))
        p = pita_metric(40)
        (pchain,) = p.seam_chains
        assert pchain["closed"] is False
        assert pchain["vertices"][0] == 0 and pchain["vertices"][-1] == 39
        assert p.tags[pchain["vertices"][0]] == TAG_FOLD
        assert p.tags[pchain["vertices"][-1]] == TAG_FOLD

    def test_vertex_counts(self):
        m = pita_metric(40)
        counts = m.vertex_counts()
        assert counts["fold"] == 2
        assert counts["seam"] == 40 - 2
        assert counts["interior"] == m.n_vertices - 40


class TestValidate:
    def test_all_fixtures_ok(self):
        for m in (
            pillow_metric(16),
            fig_dform_metric(120),
            pita_metric(40),
            relaxed_metric(120),
            ngon_glue_metric(6),
            regular_tetrahedron_metric(),
            cube_metric(),
        ):
            rep = validate(m)
            assert rep.ok, [c.detail for c in rep.failed()]

    def test_degenerate_risk_flags(self):
        assert validate(pillow_metric(16)).degenerate_risk
        assert not validate(fig_dform_metric(120)).degenerate_risk
        assert not validate(pita_metric(40)).degenerate_risk
        # folding an ellipse exactly at the end of the major axis is a
        # mirror symmetry: the flat double cover realizes the metric
        assert validate(pita_metric(40, frac=0.0)).degenerate_risk

    def test_report_dict(self):
        rep = validate(fig_dform_metric(120))
        d = rep.to_dict()
        assert d["ok"] is True
        assert isinstance(d["checks"], list)


class TestRawFixtures:
    def test_tetrahedron(self):
        m = regular_tetrahedron_metric()
        np.testing.assert_allclose(m.defects(), math.pi, atol=1e-12)
        assert validate(m).ok

    def test_cube(self):
        m = cube_metric()
        np.testing.assert_allclose(m.defects(), math.pi / 2.0, atol=1e-12)
        assert validate(m).ok

    def test_scaled_lengths_same_defects(self):
        m1 = regular_tetrahedron_metric(1.0)
        m2 = regular_tetrahedron_metric(3.7)
        np.testing.assert_allclose(m1.defects(), m2.defects(), atol=1e-12)


class TestSerialization:
    def test_roundtrip(self):
        m = fig_dform_metric(120)
        m2 = ConeMetric.from_dict(m.to_dict())
        np.testing.assert_array_equal(m.triangles, m2.triangles)
        np.testing.assert_allclose(m.tri_lengths, m2.tri_lengths, rtol=0, atol=0)
        np.testing.assert_array_equal(m.tags, m2.tags)
        np.testing.assert_allclose(m.defects(), m2.defects(), atol=0)
        assert m2.kind == m.kind
        assert len(m2.pieces) == len(m.pieces)

    def test_json_file_roundtrip(self, tmp_path):
        m = pita_metric(40)
        path = tmp_path / "metric.json"
        m.save_json(path)
        m2 = ConeMetric.load_json(path)
        np.testing.assert_array_equal(m.triangles, m2.triangles)
        assert validate(m2).ok


class TestDeterminism:
    def test_same_seed_identical(self):
        a = fig_dform_metric(100, seed=5)
        b = fig_dform_metric(100, seed=5)
        np.testing.assert_array_equal(a.triangles, b.triangles)
        np.testing.assert_allclose(a.tri_lengths, b.tri_lengths, rtol=0, atol=0)

    def test_seed_changes_interior(self):
        a = fig_dform_metric(100, seed=5)
        b = fig_dform_metric(100, seed=6)
        pa = a.pieces[0].interior_xy
        pb = b.pieces[0].interior_xy
        assert pa.shape != pb.shape or not np.allclose(pa, pb)


class TestMeshingOptions:
    def test_no_interior_when_spacing_large(self):
        m = fig_dform_metric(60, interior_spacing=100.0)
        assert (m.tags == TAG_INTERIOR).sum() == 0
        assert validate(m).ok

    def test_bad_spacing_rejected(self):
        g = make_dform(unit_square(), unit_square(), n=16)
        with pytest.raises(MeshingError, match="positive"):
            triangulate(g, interior_spacing=0.0)
