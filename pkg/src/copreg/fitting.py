"""Copula parameter estimation: pseudo-maximum likelihood, L2 criterion, AIC selection."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import optimize, stats

from copreg import kernels
from copreg.copula import (
    FAMILIES,
    INDEPENDENCE,
    Candidate,
    CopulaSpec,
    Family,
    ParamSpace,
    param_from_tau,
    parse_family,
)
from copreg.errors import ParameterDomainError, SizeError
from copreg.margins import PseudoSample

MAX_ITER = 500
XTOL = 1e-6
_BIG = 1e300

# (rho1, rho2, pi) multistarts for the two-component Gaussian mixture
MIX2_STARTS = tuple(
    (r1, r2, w) for w in (0.25, 0.75) for (r1, r2) in ((-0.5, 0.5), (0.0, 0.8))
)


@dataclass(frozen=True)
class FitResult:
    """Outcome of a parameter fit.

    For L2 fits ``loglik`` holds ``-RSS`` and ``aic`` is NaN.
    """

    spec: CopulaSpec
    loglik: float
    aic: float
    n_params: int
    converged: bool
    iterations: int
    method: str = "pml"
    at_boundary: bool = False

    def csv_fields(self) -> list[str]:
        return [
            self.spec.family.value,
            str(self.spec.rotation),
            ";".join(repr(p) for p in self.spec.params),
            repr(self.loglik),
            repr(self.aic),
            str(self.converged).lower(),
        ]


CSV_HEADER = ["family", "rotation", "params", "loglik", "aic", "converged"]


def as_candidate(c) -> Candidate:
    if isinstance(c, Candidate):
        return c
    if isinstance(c, CopulaSpec):
        return c.candidate
    if isinstance(c, tuple):
        return Candidate(Family(c[0]), int(c[1]))
    if isinstance(c, Family):
        return Candidate(c, 0)
    return parse_family(str(c))


def _split_pairs(pairs):
    pairs = np.asarray(pairs, dtype=float).reshape(-1, 2)
    return np.ascontiguousarray(pairs[:, 0]), np.ascontiguousarray(pairs[:, 1])


def _at_boundary(x, space: ParamSpace) -> bool:
    return any(
        min(xi - lo, hi - xi) <= 1e-6 * (hi - lo)
        for xi, lo, hi in zip(x, space.lower, space.upper)
    )


def _initial_simplex(x0, space: ParamSpace):
    x0 = np.asarray(x0, dtype=float)
    pts = [x0]
    for i, (lo, hi) in enumerate(zip(space.lower, space.upper)):
        step = 0.1 * (hi - lo)
        x = x0.copy()
        x[i] = x0[i] + step if x0[i] + step <= hi else x0[i] - step
        pts.append(x)
    return np.array(pts)


def minimize_in_box(
    objective: Callable[[np.ndarray], float],
    space: ParamSpace,
    starts: Sequence[Sequence[float]],
    max_iter: int = MAX_ITER,
    xtol: float = XTOL,
    multistart: bool = False,
):
    """Derivative-free minimization over a closed box.

    One parameter: bounded Brent (golden section with parabolic steps).
    Several parameters: Nelder-Mead with box projection, started from the best
    of ``starts`` or, with ``multistart``, from every start. The result is never
    worse than the best start.

    Returns ``(x, fun, iterations, converged)``.
    """

    def safe(x):
        x = np.asarray(x, dtype=float)
        if not space.contains(tuple(x)):
            return _BIG
        val = objective(x)
        return val if math.isfinite(val) else _BIG

    starts = [np.asarray(space.clip(s), dtype=float) for s in starts]
    start_vals = [safe(s) for s in starts]
    best_i = int(np.argmin(start_vals))
    best_x, best_f = starts[best_i], start_vals[best_i]
    iterations = 0
    converged = False

    if len(space.lower) == 1:
        lo, hi = space.lower[0], space.upper[0]
        res = optimize.minimize_scalar(
            lambda t: safe([t]),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": xtol, "maxiter": max_iter},
        )
        iterations = int(res.nfev)
        converged = bool(res.success)
        if res.fun <= best_f:
            best_x, best_f = np.array([res.x]), float(res.fun)
        return best_x, best_f, iterations, converged

    run_from = range(len(starts)) if multistart else [best_i]
    for i in run_from:
        res = optimize.minimize(
            safe,
            starts[i],
            method="Nelder-Mead",
            bounds=list(zip(space.lower, space.upper)),
            options={
                "xatol": xtol,
                "fatol": np.inf,
                "maxiter": max_iter,
                "initial_simplex": _initial_simplex(starts[i], space),
            },
        )
        iterations += int(res.nit)
        if res.fun < best_f or (res.fun == best_f and not converged):
            best_x, best_f = np.asarray(res.x, dtype=float), float(res.fun)
            converged = bool(res.success)
    return best_x, best_f, iterations, converged


def starting_points(cand: Candidate, tau_hat: float) -> list[tuple[float, ...]]:
    """Kendall-tau inversion start (clamped to the box) plus the box midpoint."""
    fam = FAMILIES[cand.family]
    space = fam.space
    if cand.family is Family.GAUSS_MIX2:
        return list(MIX2_STARTS)
    base_tau = -tau_hat if cand.rotation in (90, 270) else tau_hat
    starts = []
    if cand.family in (Family.GAUSSIAN, Family.STUDENT_T):
        rho = math.sin(math.pi * tau_hat / 2.0)
        starts.append((rho,) if cand.family is Family.GAUSSIAN else (rho, 8.0))
    elif cand.family is Family.CLAYTON:
        t = min(max(base_tau, 0.0), 0.99)
        starts.append((2.0 * t / (1.0 - t),))
    elif cand.family is Family.GUMBEL:
        t = min(max(base_tau, 0.0), 0.99)
        starts.append((1.0 / (1.0 - t),))
    else:
        try:
            starts.append(param_from_tau(cand.family, tau_hat, cand.rotation).params)
        except ParameterDomainError:
            pass
    starts.append(space.midpoint)
    return [space.clip(s) for s in starts]


def empirical_tau(u, v) -> float:
    tau = stats.kendalltau(u, v).statistic
    return 0.0 if not math.isfinite(tau) else float(tau)


def fit_pml(candidate, pairs, *, max_iter: int = MAX_ITER, xtol: float = XTOL) -> FitResult:
    """Pseudo-maximum likelihood fit of one family/rotation to pseudo-observations.

    Parameters
    ----------
    candidate : Candidate, str or Family
        Family and rotation, e.g. ``"clayton@180"``.
    pairs : array-like, shape (n, 2)
        Points strictly inside the unit square, response coordinate first.
    """
    cand = as_candidate(candidate)
    u, v = _split_pairs(pairs)
    if u.shape[0] < 10:
        raise SizeError(f"fit_pml needs at least 10 points, got {u.shape[0]}")
    fam = FAMILIES[cand.family]
    if fam.n_params == 0:
        return FitResult(INDEPENDENCE, 0.0, 0.0, 0, True, 0)

    def negll(x):
        return -kernels.loglik(cand.family, cand.rotation, x, u, v)

    starts = starting_points(cand, empirical_tau(u, v))
    x, fun, nit, conv = minimize_in_box(
        negll,
        fam.space,
        starts,
        max_iter=max_iter,
        xtol=xtol,
        multistart=cand.family is Family.GAUSS_MIX2,
    )
    spec = CopulaSpec(cand.family, cand.rotation, tuple(x))
    loglik = -fun if fun < _BIG else -np.inf
    k = fam.n_params
    return FitResult(
        spec=spec,
        loglik=loglik,
        aic=2.0 * k - 2.0 * loglik,
        n_params=k,
        converged=conv and math.isfinite(loglik),
        iterations=nit,
        at_boundary=_at_boundary(x, fam.space),
    )


def l2_fitted_values(spec_or_cand, params, pseudo: PseudoSample) -> np.ndarray:
    """``m_hat(X_i; theta) = (1/n) sum_j Y_j c(F_Y(Y_j), F_1(X_i); theta)`` at every ``X_i``."""
    cand = as_candidate(spec_or_cand)
    n = pseudo.n
    uy = np.broadcast_to(pseudo.u_y[None, :], (n, n)).ravel()
    ux = np.broadcast_to(pseudo.u_x[:, 0][:, None], (n, n)).ravel()
    dens = np.exp(kernels.logpdf(cand.family, cand.rotation, params, uy, ux)).reshape(n, n)
    return dens @ pseudo.y_raw / n


def fit_l2(candidate, pseudo: PseudoSample, *, max_iter: int = MAX_ITER, xtol: float = XTOL) -> FitResult:
    """Minimize ``sum_i (Y_i - m_hat(X_i; theta))**2`` over the family's box.

    ``loglik`` carries ``-RSS``; ``aic`` is NaN because the criterion is not a
    likelihood.
    """
    cand = as_candidate(candidate)
    if pseudo.d != 1:
        raise SizeError("fit_l2 requires a single predictor")
    if pseudo.n < 10:
        raise SizeError(f"fit_l2 needs at least 10 observations, got {pseudo.n}")
    fam = FAMILIES[cand.family]
    y = pseudo.y_raw

    def rss(x):
        r = y - l2_fitted_values(cand, x, pseudo)
        return float(r @ r)

    if fam.n_params == 0:
        return FitResult(INDEPENDENCE, -rss(()), math.nan, 0, True, 0, method="l2")
    starts = starting_points(cand, empirical_tau(pseudo.u_y, pseudo.u_x[:, 0]))
    x, fun, nit, conv = minimize_in_box(
        rss, fam.space, starts, max_iter=max_iter, xtol=xtol,
        multistart=cand.family is Family.GAUSS_MIX2,
    )
    return FitResult(
        spec=CopulaSpec(cand.family, cand.rotation, tuple(x)),
        loglik=-fun,
        aic=math.nan,
        n_params=fam.n_params,
        converged=conv,
        iterations=nit,
        method="l2",
        at_boundary=_at_boundary(x, fam.space),
    )


def select_by_aic(candidates: Iterable, pairs, *, workers: int | None = None) -> FitResult:
    """Fit every candidate by PML and return the minimum-AIC result.

    Ties go to the earliest candidate; the outcome does not depend on
    ``workers`` because results are gathered in candidate order.
    """
    cands = [as_candidate(c) for c in candidates]
    if not cands:
        raise ValueError("empty candidate list")
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            fits = list(ex.map(lambda c: fit_pml(c, pairs), cands))
    else:
        fits = [fit_pml(c, pairs) for c in cands]
    best = fits[0]
    for f in fits[1:]:
        a = f.aic if math.isfinite(f.aic) else np.inf
        b = best.aic if math.isfinite(best.aic) else np.inf
        if a < b:
            best = f
    return best


_SYMMETRIC = (Family.INDEPENDENCE, Family.GAUSSIAN, Family.STUDENT_T, Family.FRANK)
_ROTATED = (Family.CLAYTON, Family.GUMBEL, Family.JOE, Family.BB1, Family.BB6, Family.BB7, Family.BB8)


def default_candidates(include_amh: bool = True) -> list[Candidate]:
    """Families reviewed for one-dimensional predictors, with rotations.

    Gaussian, t and Frank reach negative dependence through their parameter and
    get no rotated copies. ``include_amh=False`` gives the vine candidate set.
    """
    out = [Candidate(f, 0) for f in _SYMMETRIC]
    for f in _ROTATED:
        out.extend(Candidate(f, r) for r in (0, 90, 180, 270))
    if include_amh:
        out.extend(Candidate(Family.AMH, r) for r in (0, 90, 180, 270))
    return out


def filter_by_tau_sign(candidates: Iterable, tau_hat: float) -> list[Candidate]:
    """Keep rotations whose dependence sign agrees with ``tau_hat``.

    Families that span both signs are always kept.
    """
    out = []
    for c in map(as_candidate, candidates):
        if FAMILIES[c.family].signed:
            out.append(c)
        elif (c.rotation in (0, 180)) == (tau_hat >= 0):
            out.append(c)
    return out
