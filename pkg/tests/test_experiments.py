import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from copreg.copula import ROTATIONS, Family
from copreg.errors import ConfigError, StudyAbortedError
from copreg.experiments import (
    MODELS,
    SWEEP_HEADER,
    DgpSpec,
    Estimator,
    contour_density,
    estimate_on_grid,
    integrated_squared_error,
    monotonicity_sweep,
    run_mse_study,
    simulate_dgp,
    true_regression,
)
import copreg.experiments as experiments
from copreg.io import format_value

G5 = np.array([0.0, 0.25, 0.5, 0.75, 1.0])


class TestDgp:
    def test_deterministic(self):
        a = simulate_dgp(DgpSpec("m3", 50, seed=4))
        assert np.array_equal(a, simulate_dgp(DgpSpec("m3", 50, seed=4)))
        assert a.shape == (50, 3)

    @pytest.mark.parametrize("model", sorted(MODELS))
    def test_noise_free(self, model):
        d = simulate_dgp(DgpSpec(model, 40, sigma=0.0, seed=1))
        assert_array_equal(d[:, 0], true_regression(model, d[:, 1:]))
        assert np.all((d[:, 1:] >= 0) & (d[:, 1:] < 1))

    def test_noise_sd(self):
        d = simulate_dgp(DgpSpec("m1", 100_000, seed=3))
        assert np.std(d[:, 0] - d[:, 1] ** 2) == pytest.approx(0.1, abs=0.002)

    def test_m2_uncorrelated(self):
        d = simulate_dgp(DgpSpec("m2", 100_000, seed=3))
        assert abs(np.corrcoef(d[:, 0], d[:, 1])[0, 1]) < 0.01

    def test_errors(self):
        with pytest.raises(ConfigError):
            DgpSpec("m9", 10)
        with pytest.raises(ConfigError):
            DgpSpec("m1", 0)
        with pytest.raises(ConfigError):
            DgpSpec("m1", 10, sigma=-1.0)

    def test_true_regression_values(self):
        assert_allclose(true_regression("m2", G5), (G5 - 0.5) ** 2)
        x = np.array([[0.2, 0.9]])
        assert true_regression("m5", x)[0] == pytest.approx(0.09 - 0.16)


class TestEstimator:
    def test_label_and_validation(self):
        assert Estimator("copula", "Clayton@180").label == "clayton@180/pml"
        assert Estimator("vine").label == "vine"
        with pytest.raises(ConfigError):
            Estimator("copula")
        with pytest.raises(ConfigError):
            Estimator("copula", "nosuch")
        with pytest.raises(ConfigError):
            Estimator("vine", fit="l2")

    def test_vine_needs_two_predictors(self):
        with pytest.raises(ConfigError):
            estimate_on_grid(simulate_dgp(DgpSpec("m1", 30)), "m1", Estimator("vine"), G5)

    @pytest.mark.parametrize("kind,family", [("copula", "indep"), ("vine", None), ("auto-aic", None)])
    def test_two_predictor_shapes(self, kind, family):
        est = estimate_on_grid(
            simulate_dgp(DgpSpec("m3", 60, seed=1)), "m3",
            Estimator(kind, family, candidates=("indep", "gaussian") if family is None else None), G5,
        )
        assert est.values.shape == (5, 5)


class TestMse:
    def test_oracle_is_zero(self):
        for model in ("m1", "m3"):
            r = run_mse_study(DgpSpec(model, 30), Estimator("oracle"), 5, G5)
            assert np.all(r.mse == 0.0) and r.reps == 5

    def test_independence_bias_variance(self):
        r = run_mse_study(DgpSpec("m2", 100), Estimator("copula", "indep"), 1000, G5)
        var_y = (1 / 80 - 1 / 144) + 0.01
        theory = ((G5 - 0.5) ** 2 - 1 / 12) ** 2 + var_y / 100
        # relative Monte-Carlo error of a mean of 1000 squared normals is about 4.5%
        assert_allclose(r.mse, theory, rtol=0.15)

    def test_independence_m1_location(self):
        g = np.linspace(0, 1, 101)
        r = run_mse_study(DgpSpec("m1", 100), Estimator("copula", "indep"), 200, g)
        assert r.mse[0] > 0 and r.mse[-1] > 0
        assert g[np.argmin(r.mse)] == pytest.approx(np.sqrt(1 / 3), abs=0.05)

    def test_replication_seeding(self):
        est = Estimator("copula", "frank")
        r = run_mse_study(DgpSpec("m2", 50), est, 4, G5, base_seed=10)
        alone = estimate_on_grid(simulate_dgp(DgpSpec("m2", 50, seed=13)), "m2", est, G5)
        assert np.array_equal(r.estimates[2], alone.values)

    def test_workers_bit_identical(self):
        est = Estimator("copula", "clayton@180")
        a = run_mse_study(DgpSpec("m1", 50), est, 8, G5, base_seed=3, workers=1)
        b = run_mse_study(DgpSpec("m1", 50), est, 8, G5, base_seed=3, workers=4)
        assert np.array_equal(a.mse, b.mse) and np.array_equal(a.estimates, b.estimates)

    def test_abort_on_failures(self, monkeypatch):
        monkeypatch.setattr(experiments, "_one_replication", lambda args: (None, "boom"))
        with pytest.raises(StudyAbortedError):
            run_mse_study(DgpSpec("m1", 20), Estimator("oracle"), 10, G5)

    def test_few_failures_warn(self, monkeypatch):
        real = experiments._one_replication

        def flaky(args):
            return (None, "boom") if args[3] == 7 else real(args)

        monkeypatch.setattr(experiments, "_one_replication", flaky)
        with pytest.warns(RuntimeWarning):
            r = run_mse_study(DgpSpec("m1", 20), Estimator("oracle"), 40, G5)
        assert r.failures == 1 and np.isnan(r.ise[6])

    def test_rows_and_header(self):
        r = run_mse_study(DgpSpec("m3", 20), Estimator("oracle"), 2, G5[:3])
        assert r.header() == ["x1", "x2", "mse"] and len(r.rows()) == 9

    def test_ise(self):
        g = np.linspace(0, 1, 101)
        assert integrated_squared_error(g, g, np.zeros_like(g)) == pytest.approx(1 / 3, abs=1e-4)


class TestSweep:
    def test_independence_row(self):
        (row,) = monotonicity_sweep([Family.INDEPENDENCE])
        assert row.monotone and row.direction == "flat" and row.tau == 0.0

    def test_gaussian_row(self):
        rows = monotonicity_sweep([Family.GAUSSIAN], [0], [1 / 3])
        assert rows[0].monotone and rows[0].direction == "increasing"

    def test_inadmissible_skipped(self):
        rows = monotonicity_sweep([Family.CLAYTON], [0], [-0.3, 0.3])
        assert rows[0].skipped and rows[0].monotone is None and "outside" in rows[0].skip_reason
        assert not rows[1].skipped and rows[1].monotone

    def test_mixture_rejected(self):
        with pytest.raises(ConfigError):
            monotonicity_sweep([Family.GAUSS_MIX2])

    def test_fields(self):
        rows = monotonicity_sweep([Family.BB1], ROTATIONS, [0.3])
        assert len(rows) == 2 * 4
        assert all(len(r.fields()) == len(SWEEP_HEADER) for r in rows)

    def test_workers_identical(self):
        a = monotonicity_sweep([Family.FRANK, Family.JOE], [0, 90], [0.3], workers=1)
        b = monotonicity_sweep([Family.FRANK, Family.JOE], [0, 90], [0.3], workers=4)
        assert [list(map(format_value, r.fields())) for r in a] == [
            list(map(format_value, r.fields())) for r in b
        ]


class TestContour:
    def test_independence_band(self):
        c = contour_density(DgpSpec("const", 1, 0.1, 0), 100_000, 50)
        d = c.density.copy()
        for i in (0, -1):
            for j in (0, -1):
                d[i, j] = 1.0
        assert d.min() >= 0.85 and d.max() <= 1.15

    def test_m2_symmetry(self):
        ref = contour_density(DgpSpec("const", 1, 0.1, 0), 100_000, 50).density
        band = np.max(np.abs(ref - 1.0))
        m = contour_density(DgpSpec("m2", 1, 0.1, 0), 100_000, 50).density
        assert np.max(np.abs(m - m[:, ::-1])) <= 2 * band

    def test_deterministic_and_rows(self):
        a = contour_density(DgpSpec("m2", 1, 0.1, 5), 10_000, 8)
        b = contour_density(DgpSpec("m2", 1, 0.1, 5), 10_000, 8)
        assert np.array_equal(a.density, b.density) and len(a.rows()) == 64

    def test_preconditions(self):
        with pytest.raises(ConfigError):
            contour_density(DgpSpec("m3", 1), 10_000, 8)
        with pytest.raises(ConfigError):
            contour_density(DgpSpec("m1", 1), 100, 8)
