"""Data-generating processes and Monte-Carlo studies.

Every replication ``r = 1..reps`` of a study draws its data with seed
``base_seed + r``, so any single replication can be rerun in isolation and
results do not depend on the number of worker processes.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import special

from copreg.copula import (
    INDEPENDENCE,
    ROTATIONS,
    Family,
    param_from_tau,
)
from copreg.copula.core import DEFAULT_SHAPES, open_uniform
from copreg.errors import (
    ConfigError,
    CopregError,
    ParameterDomainError,
    StudyAbortedError,
)
from copreg.fitting import as_candidate, default_candidates, fit_l2, fit_pml, select_by_aic
from copreg.margins import ecdf_transform
from copreg.regression import (
    RegressionEstimate,
    default_u_grid,
    estimate_regression_1d,
    estimate_regression_2d,
    monotonicity_audit,
    population_curve,
)
from copreg.vine import fit_vine, joint_density, single_family_vine

# Models ------------------------------------------------------------------------


def _m1(x):
    return x[:, 0] ** 2


def _m2(x):
    return (x[:, 0] - 0.5) ** 2


def _m3(x):
    return (x[:, 0] - 0.5) ** 2 + (x[:, 1] - 0.5) ** 2


def _m5(x):
    return (x[:, 0] - 0.5) ** 2 - (x[:, 1] - 0.5) ** 2


def _xsin(x):
    return x[:, 0] * np.sin(10.0 * x[:, 0])


def _expcos(x):
    return np.exp(np.cos(10.0 * x[:, 0]))


def _const(x):
    return np.zeros(x.shape[0])


#: model id -> (number of predictors, regression function on an (n, d) array)
MODELS: dict[str, tuple[int, Callable[[np.ndarray], np.ndarray]]] = {
    "m1": (1, _m1),
    "m2": (1, _m2),
    "m3": (2, _m3),
    "m5": (2, _m5),
    "xsin": (1, _xsin),
    "expcos": (1, _expcos),
    "const": (1, _const),
}

DEFAULT_SIGMA = 0.1


def _model(name: str):
    try:
        return MODELS[name]
    except KeyError:
        raise ConfigError(
            f"unknown model {name!r}; valid models: {', '.join(MODELS)}"
        ) from None


@dataclass(frozen=True)
class DgpSpec:
    """``Y = m(X) + sigma * eps`` with independent uniform predictors."""

    model: str
    n: int
    sigma: float = DEFAULT_SIGMA
    seed: int = 0

    def __post_init__(self):
        _model(self.model)
        if self.n < 1:
            raise ConfigError(f"n must be at least 1, got {self.n}")
        if not (self.sigma >= 0.0 and math.isfinite(self.sigma)):
            raise ConfigError(f"sigma must be finite and non-negative, got {self.sigma}")

    @property
    def d(self) -> int:
        return MODELS[self.model][0]

    def with_seed(self, seed: int) -> "DgpSpec":
        return DgpSpec(self.model, self.n, self.sigma, seed)


def true_regression(model: str, x) -> np.ndarray:
    """Regression function of ``model`` at the rows of ``x`` (shape (k,) or (k, d))."""
    d, m = _model(model)
    x = np.asarray(x, dtype=float)
    x = x.reshape(-1, 1) if x.ndim == 1 else x
    if x.shape[1] != d:
        raise ConfigError(f"model {model} takes {d} predictor(s), got {x.shape[1]}")
    return m(x)


def simulate_dgp(spec: DgpSpec) -> np.ndarray:
    """Draw an ``(n, d + 1)`` dataset, response in column 0.

    Predictors are drawn first, then the noise, whose normal variates come
    from inverse-CDF transforms of the same uniform stream.
    """
    d, m = _model(spec.model)
    rng = np.random.default_rng(spec.seed)
    x = rng.random((spec.n, d))
    eps = special.ndtri(open_uniform(rng, spec.n))
    y = m(x) + spec.sigma * eps
    return np.column_stack([y, x])


# Estimators ---------------------------------------------------------------------


@dataclass(frozen=True)
class Estimator:
    """Regression estimator configuration.

    Attributes
    ----------
    kind : str
        ``"copula"`` (one fixed family and rotation), ``"auto-aic"`` (AIC
        selection over ``candidates``), ``"vine"`` (two predictors only) or
        ``"oracle"`` (returns the true regression; for testing the harness).
    family : str, optional
        Family tag such as ``"clayton@180"`` for ``kind="copula"``.
    fit : str
        ``"pml"`` or ``"l2"``; L2 fitting needs a single predictor.
    candidates : tuple of str, optional
        Candidate tags for ``auto-aic`` and ``vine``; defaults per kind.
    """

    kind: str = "copula"
    family: str | None = None
    fit: str = "pml"
    candidates: tuple | None = None

    def __post_init__(self):
        if self.kind not in ("copula", "auto-aic", "vine", "oracle"):
            raise ConfigError(f"unknown estimator kind {self.kind!r}")
        if self.fit not in ("pml", "l2"):
            raise ConfigError(f"fit method must be 'pml' or 'l2', got {self.fit!r}")
        if self.kind == "copula":
            if self.family is None:
                raise ConfigError("a copula estimator needs a family")
            object.__setattr__(self, "family", as_candidate(self.family).tag)
        if self.candidates is not None:
            object.__setattr__(
                self, "candidates", tuple(as_candidate(c).tag for c in self.candidates)
            )
        if self.kind == "vine" and self.fit != "pml":
            raise ConfigError("vines are fitted by pseudo-maximum likelihood only")

    @property
    def label(self) -> str:
        if self.kind == "copula":
            return f"{self.family}/{self.fit}"
        return self.kind if self.kind in ("vine", "oracle") else f"{self.kind}/{self.fit}"


def estimate_on_grid(data: np.ndarray, model: str, estimator: Estimator, x_grid) -> RegressionEstimate:
    """Fit ``estimator`` to ``data`` and evaluate it on ``x_grid``.

    For two predictors the estimate lives on the tensor grid ``x_grid x x_grid``.
    """
    d = data.shape[1] - 1
    g = np.asarray(x_grid, dtype=float)
    if estimator.kind == "oracle":
        if d == 1:
            vals = true_regression(model, g)
            return RegressionEstimate((g,), vals, np.zeros(g.size, bool), np.ones(g.size, bool))
        mesh = np.stack(np.meshgrid(g, g, indexing="ij"), axis=-1).reshape(-1, 2)
        vals = true_regression(model, mesh).reshape(g.size, g.size)
        shape = (g.size, g.size)
        return RegressionEstimate((g, g), vals, np.zeros(shape, bool), np.ones(shape, bool))
    pseudo = ecdf_transform(data)
    if d == 1:
        if estimator.kind == "vine":
            raise ConfigError("vine estimators need two predictors")
        pairs = pseudo.columns()
        if estimator.kind == "copula":
            if estimator.fit == "pml":
                spec = fit_pml(estimator.family, pairs).spec
            else:
                spec = fit_l2(estimator.family, pseudo).spec
        else:
            cands = estimator.candidates or tuple(c.tag for c in default_candidates())
            if estimator.fit == "pml":
                spec = select_by_aic(cands, pairs).spec
            else:
                fits = [fit_l2(c, pseudo) for c in cands]
                spec = max(fits, key=lambda f: f.loglik).spec
        return estimate_regression_1d(spec, pseudo, g)
    if d != 2:
        raise ConfigError(f"estimators support one or two predictors, got {d}")
    if estimator.fit != "pml":
        raise ConfigError("L2 fitting needs a single predictor")
    if estimator.kind == "vine":
        model_v = fit_vine(pseudo, estimator.candidates)
    elif estimator.kind == "copula":
        model_v = single_family_vine(pseudo, estimator.family)
    else:
        model_v = fit_vine(pseudo, estimator.candidates or tuple(c.tag for c in default_candidates()))
    return estimate_regression_2d(joint_density(model_v), pseudo, (g, g))


# Monte-Carlo MSE study -------------------------------------------------------------

#: failure share (of requested replications) at which a study aborts
ABORT_SHARE = 0.05


@dataclass(frozen=True)
class MseResult:
    """Pointwise MSE of an estimator against the true regression.

    ``estimates`` holds one row per requested replication (NaN for failed
    ones) and ``ise`` the per-replication integrated squared error.
    """

    x_grid: np.ndarray
    mse: np.ndarray
    reps: int
    estimator_label: str
    failures: int = 0
    estimates: np.ndarray | None = field(default=None, repr=False)
    ise: np.ndarray | None = field(default=None, repr=False)

    def rows(self) -> list[tuple]:
        if self.mse.ndim == 1:
            return [(float(x), float(m)) for x, m in zip(self.x_grid, self.mse)]
        g = self.x_grid
        return [
            (float(g[i]), float(g[j]), float(self.mse[i, j]))
            for i in range(g.size)
            for j in range(g.size)
        ]

    def header(self) -> list[str]:
        return ["x", "mse"] if self.mse.ndim == 1 else ["x1", "x2", "mse"]


def integrated_squared_error(x_grid, estimate, truth) -> float:
    """Trapezoidal integral of ``(estimate - truth)**2`` over the grid (per axis)."""
    err = (np.asarray(estimate) - np.asarray(truth)) ** 2
    g = np.asarray(x_grid, dtype=float)
    for _ in range(err.ndim):
        err = np.trapezoid(err, g, axis=-1)
    return float(err)


def _one_replication(args):
    dgp, estimator, x_grid, r, base_seed = args
    data = simulate_dgp(dgp.with_seed(base_seed + r))
    try:
        est = estimate_on_grid(data, dgp.model, estimator, x_grid)
    except (CopregError, FloatingPointError) as exc:
        return None, f"{type(exc).__name__}: {exc}"
    if not np.all(est.valid) or not np.all(np.isfinite(est.values)):
        return None, "non-finite estimate"
    return est.values, None


def _truth_on_grid(model: str, g: np.ndarray) -> np.ndarray:
    d = MODELS[model][0]
    if d == 1:
        return true_regression(model, g)
    mesh = np.stack(np.meshgrid(g, g, indexing="ij"), axis=-1).reshape(-1, 2)
    return true_regression(model, mesh).reshape(g.size, g.size)


def _map(fn, tasks, workers: int | None):
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    return [fn(t) for t in tasks]


def run_mse_study(
    dgp: DgpSpec,
    estimator: Estimator,
    reps: int,
    x_grid,
    base_seed: int = 0,
    *,
    workers: int | None = None,
) -> MseResult:
    """Pointwise MSE over ``reps`` replications seeded ``base_seed + 1 .. base_seed + reps``.

    Failed replications are excluded with a warning; if they reach
    :data:`ABORT_SHARE` of ``reps`` the study raises
    :class:`~copreg.errors.StudyAbortedError`. The ``seed`` field of ``dgp`` is
    ignored.
    """
    if reps < 1:
        raise ConfigError("reps must be at least 1")
    g = np.asarray(x_grid, dtype=float)
    tasks = [(dgp, estimator, g, r, base_seed) for r in range(1, reps + 1)]
    results = _map(_one_replication, tasks, workers)
    truth = _truth_on_grid(dgp.model, g)
    shape = truth.shape
    estimates = np.full((reps,) + shape, np.nan)
    reasons = []
    for i, (vals, why) in enumerate(results):
        if vals is None:
            reasons.append(f"replication {i + 1}: {why}")
        else:
            estimates[i] = vals
    failures = len(reasons)
    if failures >= ABORT_SHARE * reps and failures > 0:
        raise StudyAbortedError(
            f"{failures} of {reps} replications failed; first: {reasons[0]}"
        )
    if failures:
        warnings.warn(
            f"{failures} of {reps} replications failed and were excluded", RuntimeWarning,
            stacklevel=2,
        )
    ok = np.all(np.isfinite(estimates.reshape(reps, -1)), axis=1)
    sq = (estimates[ok] - truth) ** 2
    mse = np.mean(sq, axis=0)
    ise = np.array(
        [integrated_squared_error(g, e, truth) if k else math.nan for e, k in zip(estimates, ok)]
    )
    return MseResult(g, mse, reps, estimator.label, failures, estimates, ise)


# Monotonicity sweep ----------------------------------------------------------------

#: families reviewed for one predictor (the mixture is excluded; see README)
SWEEP_FAMILIES = (
    Family.AMH,
    Family.INDEPENDENCE,
    Family.GAUSSIAN,
    Family.STUDENT_T,
    Family.CLAYTON,
    Family.GUMBEL,
    Family.FRANK,
    Family.JOE,
    Family.BB1,
    Family.BB6,
    Family.BB7,
    Family.BB8,
)

SWEEP_TAUS = (-0.7, -0.5, -0.3, -0.1, 0.1, 0.3, 0.5, 0.7)

#: fixed shape parameters swept for two-parameter families
SWEEP_SHAPES: dict[Family, tuple[float, ...]] = {
    Family.STUDENT_T: (3.0, 10.0),
    Family.BB1: (1.1, 1.5),
    Family.BB6: (1.1, 2.0),
    Family.BB7: (1.1, 2.0),
    Family.BB8: (0.6, 0.9),
}

SWEEP_HEADER = [
    "family", "rotation", "tau", "shape", "params", "monotone", "direction",
    "max_violation", "quadrature_error", "skip_reason",
]


@dataclass(frozen=True)
class SweepRow:
    family: str
    rotation: int
    tau: float
    shape: float
    params: tuple
    monotone: bool | None
    direction: str
    max_violation: float
    quadrature_error: float
    skip_reason: str = ""

    @property
    def skipped(self) -> bool:
        return bool(self.skip_reason)

    def fields(self) -> list:
        return [
            self.family, self.rotation, self.tau, self.shape,
            ";".join(repr(p) for p in self.params),
            "" if self.monotone is None else self.monotone,
            self.direction, self.max_violation, self.quadrature_error, self.skip_reason,
        ]


def _sweep_task(args) -> SweepRow:
    family, rotation, tau, shape, u_grid, tolerance, nodes = args
    shape_val = math.nan if shape is None else float(shape)
    try:
        if family is Family.INDEPENDENCE:
            spec = INDEPENDENCE
        else:
            spec = param_from_tau(family, tau, rotation, shape)
    except ParameterDomainError as exc:
        return SweepRow(family.value, rotation, tau, shape_val, (), None, "", math.nan, math.nan, str(exc))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        curve = population_curve(spec, u_grid, nodes)
    rep = monotonicity_audit(curve, tolerance)
    return SweepRow(
        family.value, rotation, tau, shape_val, spec.params, rep.monotone, rep.direction,
        rep.max_violation, curve.max_doubling_error,
    )


def monotonicity_sweep(
    families: Sequence = SWEEP_FAMILIES,
    rotations: Sequence[int] = ROTATIONS,
    tau_grid: Sequence[float] = SWEEP_TAUS,
    grid_points: int = 101,
    *,
    shapes: dict | None = None,
    tolerance: float = 1e-8,
    quadrature_nodes: int = 64,
    workers: int | None = None,
) -> list[SweepRow]:
    """Audit the population regression curve of every family, rotation and tau.

    Two-parameter families are evaluated at each fixed shape in ``shapes``
    (default :data:`SWEEP_SHAPES`). The independence copula contributes one
    row at ``tau = 0``. Unattainable ``tau`` values give rows with a
    ``skip_reason`` instead of an audit.
    """
    shapes = SWEEP_SHAPES if shapes is None else shapes
    u_grid = default_u_grid(grid_points)
    tasks = []
    for fam in families:
        fam = Family(fam)
        if fam is Family.INDEPENDENCE:
            tasks.append((fam, 0, 0.0, None, u_grid, tolerance, quadrature_nodes))
            continue
        if fam is Family.GAUSS_MIX2:
            raise ConfigError("the mixture copula has no tau parameterization to sweep")
        fam_shapes = shapes.get(fam, (DEFAULT_SHAPES.get(fam),))
        for shape in fam_shapes:
            for rot in rotations:
                for tau in tau_grid:
                    tasks.append((fam, int(rot), float(tau), shape, u_grid, tolerance, quadrature_nodes))
    return _map(_sweep_task, tasks, workers)


# Copula density contours ------------------------------------------------------------


@dataclass(frozen=True)
class ContourGrid:
    """Kernel estimate of the copula density of ``(Y, X)`` on a midpoint grid."""

    u_y: np.ndarray
    u_x: np.ndarray
    density: np.ndarray  # shape (len(u_y), len(u_x))
    bandwidth: tuple[float, float]

    def rows(self) -> list[tuple]:
        return [
            (float(a), float(b), float(self.density[i, j]))
            for i, a in enumerate(self.u_y)
            for j, b in enumerate(self.u_x)
        ]


def _reflected_kernel(grid, data, h):
    """Gaussian kernel matrix ``(len(grid), n)`` with reflection at 0 and 1."""
    g = grid[:, None]
    x = data[None, :]
    z = np.exp(-0.5 * ((g - x) / h) ** 2)
    z += np.exp(-0.5 * ((g + x) / h) ** 2)
    z += np.exp(-0.5 * ((g - (2.0 - x)) / h) ** 2)
    return z / (h * math.sqrt(2.0 * math.pi))


def contour_density(
    dgp: DgpSpec, n_large: int = 100_000, grid: int = 50, bandwidth="auto"
) -> ContourGrid:
    """Boundary-reflected product-Gaussian KDE of the copula density.

    Simulates ``n_large`` points of a one-predictor model, transforms them to
    pseudo-observations and evaluates the estimator at midpoints
    ``(k + 1/2) / grid``. ``bandwidth="auto"`` uses ``sd * n**(-1/6)`` per axis.
    """
    if dgp.d != 1:
        raise ConfigError("contour_density supports one-predictor models only")
    if n_large < 10_000:
        raise ConfigError(f"n_large must be at least 10^4, got {n_large}")
    data = simulate_dgp(DgpSpec(dgp.model, n_large, dgp.sigma, dgp.seed))
    ps = ecdf_transform(data)
    uy, ux = ps.u_y, ps.u_x[:, 0]
    if bandwidth == "auto":
        hy = float(np.std(uy)) * n_large ** (-1.0 / 6.0)
        hx = float(np.std(ux)) * n_large ** (-1.0 / 6.0)
    else:
        hy = hx = float(bandwidth)
        if not hy > 0:
            raise ConfigError("bandwidth must be positive")
    pts = default_u_grid(grid)
    ky = _reflected_kernel(pts, uy, hy)
    kx = _reflected_kernel(pts, ux, hx)
    dens = ky @ kx.T / n_large
    return ContourGrid(pts, pts.copy(), dens, (hy, hx))
