import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from copreg.copula import INDEPENDENCE, CopulaSpec, Family, density, h_inverse
from copreg.errors import SizeError
from copreg.margins import ecdf_transform
from copreg.vine import (
    VineModel,
    center_from_taus,
    conditional_pseudo_obs,
    fit_vine,
    independence_vine,
    mc_normalization,
    select_structure,
    single_family_vine,
    vine_candidates,
    vine_density,
)

GAUSS6 = CopulaSpec(Family.GAUSSIAN, 0, (0.6,))
GRID5 = np.meshgrid(*[np.array([0.1, 0.3, 0.5, 0.7, 0.9])] * 3, indexing="ij")


def gaussian_vine_sample(n, seed, rho=0.6):
    """Y and X2 each linked to the center X1 by a Gaussian pair, conditionally independent."""
    rng = np.random.default_rng(seed)
    spec = CopulaSpec(Family.GAUSSIAN, 0, (rho,))
    w1 = rng.random(n)
    p = rng.random((2, n))
    return np.column_stack([h_inverse(spec, p[0], w1), w1, h_inverse(spec, p[1], w1)])


class TestDensity:
    def test_independence_is_one(self):
        pts = np.random.default_rng(0).uniform(0.01, 0.99, (3, 20))
        assert_allclose(vine_density(independence_vine(), *pts), 1.0, rtol=0, atol=0)
        assert vine_density(independence_vine(), 0.2, 0.3, 0.4) == 1.0

    @pytest.mark.parametrize("center", [0, 1, 2])
    def test_product_without_conditional_pair(self, center):
        p1 = CopulaSpec(Family.CLAYTON, 180, (1.5,))
        p2 = CopulaSpec(Family.FRANK, 0, (-3.0,))
        m = VineModel(center, p1, p2, INDEPENDENCE)
        w = np.random.default_rng(1).uniform(0.01, 0.99, (3, 30))
        a, b = m.leaves
        expected = density(p1, w[center], w[a]) * density(p2, w[center], w[b])
        assert_allclose(vine_density(m, *w), expected, rtol=1e-12)

    def test_reduction_to_first_pair(self):
        p1 = CopulaSpec(Family.GUMBEL, 0, (2.0,))
        m = VineModel(0, p1, INDEPENDENCE, INDEPENDENCE)
        w = np.random.default_rng(2).uniform(0.01, 0.99, (3, 30))
        assert_allclose(vine_density(m, *w), density(p1, w[0], w[1]), rtol=1e-14)

    @pytest.mark.parametrize(
        "pairs",
        [
            (GAUSS6, GAUSS6, INDEPENDENCE),
            (CopulaSpec(Family.CLAYTON, 0, (2.0,)), CopulaSpec(Family.GUMBEL, 180, (1.5,)), CopulaSpec(Family.FRANK, 0, (4.0,))),
            (CopulaSpec(Family.JOE, 90, (1.8,)), CopulaSpec(Family.BB1, 0, (0.5, 1.3)), CopulaSpec(Family.STUDENT_T, 0, (0.3, 5.0))),
        ],
    )
    def test_normalization(self, pairs):
        m = VineModel(1, *pairs)
        assert mc_normalization(m, 100_000, seed=0) == pytest.approx(1.0, abs=0.01)


class TestStructure:
    def test_examples(self):
        assert center_from_taus(0.5, 0.4, 0.1) == 0
        assert center_from_taus(0.3, 0.3, 0.3) == 0
        assert center_from_taus(-0.5, 0.1, 0.4) == 1
        assert center_from_taus(0.1, 0.5, -0.4) == 2

    @settings(max_examples=50, deadline=None)
    @given(st.tuples(*[st.floats(-1, 1)] * 3))
    def test_brute_force(self, taus):
        t01, t02, t12 = (abs(t) for t in taus)
        trees = {0: t01 + t02, 1: t01 + t12, 2: t02 + t12}
        assert trees[center_from_taus(*taus)] == max(trees.values())

    def test_select_structure_preconditions(self):
        with pytest.raises(SizeError):
            select_structure(ecdf_transform(np.random.default_rng(0).random((5, 3))))
        with pytest.raises(SizeError):
            select_structure(ecdf_transform(np.random.default_rng(0).random((20, 2))))

    def test_select_structure_on_gaussian_vine(self):
        assert select_structure(ecdf_transform(gaussian_vine_sample(1000, 0))) == 1


class TestConditional:
    def test_independence_returns_columns(self):
        ps = ecdf_transform(np.random.default_rng(0).random((50, 3)))
        z = conditional_pseudo_obs(INDEPENDENCE, INDEPENDENCE, ps)
        assert_allclose(z, ps.columns()[:, [0, 2]], rtol=0, atol=1e-15)

    def test_interior(self):
        ps = ecdf_transform(gaussian_vine_sample(200, 1))
        z = conditional_pseudo_obs(CopulaSpec(Family.JOE, 0, (5.0,)), GAUSS6, ps)
        assert np.all((z > 0) & (z < 1))

    def test_symmetric_point(self):
        from copreg.margins import PseudoSample

        ps = PseudoSample(np.zeros(1), np.array([0.5]), np.array([[0.5, 0.5]]), np.zeros((1, 2)))
        z = conditional_pseudo_obs(CopulaSpec(Family.GAUSSIAN, 0, (0.5,)), GAUSS6, ps)
        assert z[0, 0] == pytest.approx(0.5, abs=1e-14)


class TestFit:
    def test_independence_only_candidates(self):
        ps = ecdf_transform(gaussian_vine_sample(200, 2))
        m = fit_vine(ps, ["indep"])
        assert all(s.family is Family.INDEPENDENCE for s in (m.pair1, m.pair2, m.pair_cond))
        assert_allclose(vine_density(m, *GRID5), 1.0)

    @pytest.mark.parametrize("seed", range(5))
    def test_null_case(self, seed):
        ps = ecdf_transform(np.random.default_rng(seed).random((2000, 3)))
        m = fit_vine(ps)
        # bands frozen from a 100-seed calibration run
        assert min(f.aic for f in m.fit_meta) > -15.0
        v = vine_density(m, *GRID5)
        assert 0.8 <= v.min() and v.max() <= 1.25

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(3))
    def test_well_specified(self, seed):
        m = fit_vine(ecdf_transform(gaussian_vine_sample(5000, seed)))
        assert m.center == 1
        for spec in (m.pair1, m.pair2):
            assert spec.family in (Family.GAUSSIAN, Family.STUDENT_T)
            assert spec.params[0] == pytest.approx(0.6, abs=0.05)
        assert mc_normalization(m) == pytest.approx(1.0, abs=0.01)

    def test_workers_do_not_change_fit(self):
        ps = ecdf_transform(gaussian_vine_sample(300, 4))
        assert fit_vine(ps) == fit_vine(ps, workers=4)

    def test_single_family(self):
        ps = ecdf_transform(gaussian_vine_sample(300, 5))
        m = single_family_vine(ps, "gaussian")
        assert all(s.family is Family.GAUSSIAN for s in (m.pair1, m.pair2, m.pair_cond))

    def test_forced_center_and_text(self):
        ps = ecdf_transform(gaussian_vine_sample(300, 6))
        m = fit_vine(ps, ["indep", "gaussian"], center=0)
        text = m.to_text().splitlines()
        assert text[0] == "center Y"
        assert [t.split()[0] for t in text[1:]] == ["Y,X1", "Y,X2", "X1,X2|Y"]
        assert m.order == ("Y", "X1", "X2")

    def test_vine_candidates_exclude_amh(self):
        fams = {c.family for c in vine_candidates()}
        assert Family.AMH not in fams and Family.GAUSS_MIX2 not in fams
        assert len(vine_candidates()) == 4 + 7 * 4


def test_bad_center():
    with pytest.raises(ValueError):
        VineModel(3, INDEPENDENCE, INDEPENDENCE, INDEPENDENCE)


def test_edge_labels_cover_all_pairs():
    for c in range(3):
        labels = VineModel(c, INDEPENDENCE, INDEPENDENCE, INDEPENDENCE).edge_labels()
        first = {frozenset(l.split(",")) for l in labels[:2]}
        assert len(first) == 2 and all(len(p) == 2 for p in first)
        assert labels[2].endswith("|" + ("Y", "X1", "X2")[c])
        assert set(itertools.chain(*first)) == {"Y", "X1", "X2"}
