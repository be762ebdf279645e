"""Copula-based regression estimates, population curves and monotonicity checks.

With pseudo-observations ``U_i = F_Y(Y_i)`` and a copula density ``c`` whose
first argument is the response, the regression function is estimated by

    m_hat(x) = sum_i Y_i c(U_i, F_1(x)) / sum_j c(U_j, F_1(x)).

For one predictor the denominator average equals one in expectation and the
estimator reduces to ``(1/n) sum_i Y_i c(U_i, F_1(x))``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from copreg import kernels
from copreg.copula import CopulaSpec, Family, h_inverse
from copreg.errors import SizeError
from copreg.fitting import FitResult, as_candidate, fit_pml
from copreg.margins import PseudoSample, ecdf_eval

#: denominators at or below this are treated as underflow
DENOMINATOR_FLOOR = 1e-300

#: conditional probability levels at which quadrature panels are split
PANEL_LEVELS = (0.001, 0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 0.999)

#: differences within this many ulps of the curve's magnitude count as ties
ROUNDOFF_ULPS = 64

#: node-doubling disagreement that triggers a warning
QUADRATURE_WARN = 1e-5


class QuadratureWarning(RuntimeWarning):
    """Population-curve quadrature did not stabilize under node doubling."""


@dataclass(frozen=True)
class RegressionEstimate:
    """Estimated regression values on a (tensor) grid.

    Attributes
    ----------
    grid : tuple of ndarray
        Query points, one strictly increasing vector per predictor.
    values : ndarray
        ``m_hat`` with shape ``tuple(len(g) for g in grid)``; NaN where the
        denominator underflowed.
    extrapolation_flags : ndarray of bool
        True where some coordinate lies outside the observed predictor range.
    valid : ndarray of bool
        False where the denominator underflowed.
    """

    grid: tuple
    values: np.ndarray
    extrapolation_flags: np.ndarray
    valid: np.ndarray

    @property
    def d(self) -> int:
        return len(self.grid)

    def rows(self) -> list[tuple]:
        """One ``(x_1, ..., x_d, value, flag)`` tuple per grid point, C order."""
        mesh = np.meshgrid(*self.grid, indexing="ij")
        out = []
        for idx in np.ndindex(self.values.shape):
            coords = tuple(float(m[idx]) for m in mesh)
            out.append(coords + (float(self.values[idx]), bool(self.extrapolation_flags[idx])))
        return out


@dataclass(frozen=True)
class PopulationCurve:
    """Uniform-margin conditional mean ``E[V | U = u]`` of a copula."""

    u_grid: np.ndarray
    m_values: np.ndarray
    spec: CopulaSpec
    max_doubling_error: float = 0.0
    warnings: tuple[str, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class MonotonicityReport:
    monotone: bool
    direction: str  # "increasing", "decreasing" or "flat"
    max_violation: float


def _check_grid(g, name="grid") -> np.ndarray:
    g = np.asarray(g, dtype=float).ravel()
    if g.size == 0:
        raise ValueError(f"{name} is empty")
    if g.size > 1 and np.any(np.diff(g) <= 0):
        raise ValueError(f"{name} must be strictly increasing")
    return g


def _pseudo_predictor(column_raw, grid, n):
    """``F_1(x)`` clamped to ``[1/(n+1), n/(n+1)]`` plus outside-range flags."""
    w = ecdf_eval(column_raw, grid)
    w = np.clip(np.atleast_1d(w), 1.0 / (n + 1.0), n / (n + 1.0))
    flags = (grid < np.min(column_raw)) | (grid > np.max(column_raw))
    return w, flags


def _density_matrix(spec: CopulaSpec, u_y, w):
    """``c(u_y[i], w[k])`` as an ``(n, len(w))`` array."""
    n, k = u_y.size, w.size
    a = np.broadcast_to(u_y[:, None], (n, k)).ravel()
    b = np.broadcast_to(w[None, :], (n, k)).ravel()
    return np.exp(kernels.logpdf(spec.family, spec.rotation, spec.params, a, b)).reshape(n, k)


def estimate_regression_1d(spec: CopulaSpec, pseudo: PseudoSample, x_grid) -> RegressionEstimate:
    """``m_hat(x) = (1/n) sum_i Y_i c(F_Y(Y_i), F_1(x))`` on ``x_grid``.

    Grid points outside the observed predictor range are flagged; their
    pseudo-value is clamped to ``[1/(n+1), n/(n+1)]``.
    """
    if pseudo.d != 1:
        raise SizeError(f"estimate_regression_1d needs one predictor, got {pseudo.d}")
    if pseudo.n < 2:
        raise SizeError("need at least 2 observations")
    g = _check_grid(x_grid, "x_grid")
    w, flags = _pseudo_predictor(pseudo.x_raw[:, 0], g, pseudo.n)
    if spec.family is Family.INDEPENDENCE:
        values = np.full(g.size, np.sum(pseudo.y_raw) / pseudo.n)
    else:
        values = pseudo.y_raw @ _density_matrix(spec, pseudo.u_y, w) / pseudo.n
    return RegressionEstimate((g,), values, flags, np.isfinite(values))


def estimate_regression_2d(
    joint_density: Callable, pseudo: PseudoSample, x_grid: Sequence
) -> RegressionEstimate:
    """Normalized estimator for two predictors on the tensor grid ``x_grid``.

    Parameters
    ----------
    joint_density : callable
        Vectorized trivariate copula density ``(w0, w1, w2) -> c``, response
        first.
    pseudo : PseudoSample
        Sample with ``d = 2``.
    x_grid : pair of array-like
        Query points for ``x1`` and ``x2``.
    """
    if pseudo.d != 2:
        raise SizeError(f"estimate_regression_2d needs two predictors, got {pseudo.d}")
    g1 = _check_grid(x_grid[0], "x_grid[0]")
    g2 = _check_grid(x_grid[1], "x_grid[1]")
    n = pseudo.n
    w1, f1 = _pseudo_predictor(pseudo.x_raw[:, 0], g1, n)
    w2, f2 = _pseudo_predictor(pseudo.x_raw[:, 1], g2, n)
    k1, k2 = g1.size, g2.size
    a = np.broadcast_to(pseudo.u_y[:, None, None], (n, k1, k2)).ravel()
    b = np.broadcast_to(w1[None, :, None], (n, k1, k2)).ravel()
    c = np.broadcast_to(w2[None, None, :], (n, k1, k2)).ravel()
    dens = np.asarray(joint_density(a, b, c), dtype=float).reshape(n, k1 * k2)
    num = pseudo.y_raw @ dens
    den = np.sum(dens, axis=0)
    valid = np.isfinite(den) & (den / n > DENOMINATOR_FLOOR) & np.isfinite(num)
    with np.errstate(all="ignore"):
        values = np.where(valid, num / np.where(valid, den, 1.0), np.nan)
    flags = f1[:, None] | f2[None, :]
    return RegressionEstimate((g1, g2), values.reshape(k1, k2), flags, valid.reshape(k1, k2))


# Population curves -------------------------------------------------------------


def default_u_grid(points: int = 101) -> np.ndarray:
    """Midpoint grid ``(k + 1/2) / points`` strictly inside (0, 1)."""
    return (np.arange(points) + 0.5) / points


def _transpose(spec: CopulaSpec) -> CopulaSpec:
    # Base families are exchangeable, so swapping arguments only exchanges
    # the 90 and 270 degree rotations.
    rot = {90: 270, 270: 90}.get(spec.rotation, spec.rotation)
    return CopulaSpec(spec.family, rot, spec.params)


def _panel_breaks(spec: CopulaSpec, u: np.ndarray) -> np.ndarray:
    """Conditional quantiles of the response at ``PANEL_LEVELS``; shape (k, L+2)."""
    t = _transpose(spec)
    levels = np.asarray(PANEL_LEVELS)
    q = h_inverse(t, np.broadcast_to(levels[None, :], (u.size, levels.size)),
                  np.broadcast_to(u[:, None], (u.size, levels.size)))
    q = np.maximum.accumulate(np.asarray(q, dtype=float), axis=1)
    return np.column_stack([np.zeros(u.size), q, np.ones(u.size)])


def _panel_integral(spec: CopulaSpec, u, breaks, nodes: int) -> np.ndarray:
    x, wts = np.polynomial.legendre.leggauss(nodes)
    x = 0.5 * (x + 1.0)
    wts = 0.5 * wts
    lo, hi = breaks[:, :-1], breaks[:, 1:]
    width = hi - lo
    v = lo[..., None] + width[..., None] * x  # (k, panels, nodes)
    uu = np.broadcast_to(u[:, None, None], v.shape)
    inside = (v > 0.0) & (v < 1.0)
    vv = np.where(inside, v, 0.5)
    logc = kernels.logpdf(spec.family, spec.rotation, spec.params, vv.ravel(), uu.ravel())
    f = np.where(inside, vv * np.exp(logc.reshape(v.shape)), 0.0)
    f = np.where(np.isfinite(f), f, 0.0)
    return np.sum(f * wts * width[..., None], axis=(1, 2))


def population_curve(
    spec: CopulaSpec, u_grid=None, quadrature_nodes: int = 64
) -> PopulationCurve:
    """``m(u) = int_0^1 v c(v, u) dv`` for uniform margins.

    The integral is split into panels at the conditional quantiles of the
    response given ``U = u`` (levels :data:`PANEL_LEVELS`) and each panel uses
    ``quadrature_nodes`` Gauss-Legendre nodes, so the mass of sharply
    concentrated densities is always resolved. The same computation with
    twice the nodes checks convergence; a disagreement above
    :data:`QUADRATURE_WARN` emits a :class:`QuadratureWarning` and is recorded
    in ``warnings``. The returned values come from the finer rule.
    """
    if quadrature_nodes < 32:
        raise ValueError("quadrature_nodes must be at least 32")
    u = _check_grid(default_u_grid() if u_grid is None else u_grid, "u_grid")
    if np.any((u <= 0.0) | (u >= 1.0)):
        raise ValueError("u_grid must lie strictly inside (0, 1)")
    if spec.family is Family.INDEPENDENCE:
        return PopulationCurve(u, np.full(u.size, 0.5), spec)
    breaks = _panel_breaks(spec, u)
    coarse = _panel_integral(spec, u, breaks, quadrature_nodes)
    fine = _panel_integral(spec, u, breaks, 2 * quadrature_nodes)
    err = float(np.max(np.abs(fine - coarse)))
    notes: tuple[str, ...] = ()
    if not err <= QUADRATURE_WARN:
        msg = f"{spec}: node doubling changed the curve by {err:.3g}"
        warnings.warn(msg, QuadratureWarning, stacklevel=2)
        notes = (msg,)
    return PopulationCurve(u, fine, spec, err, notes)


# Pseudo-true parameter ----------------------------------------------------------


def pseudo_true_parameter(
    true_sampler: Callable[[int, int], np.ndarray],
    family,
    mc_size: int = 100_000,
    seed: int = 0,
) -> FitResult:
    """Kullback-Leibler projection of a true copula onto a parametric family.

    Minimizing ``I(theta) = E[log c_true - log c_theta]`` over ``theta`` is the
    same as maximizing ``E[log c_theta]``, which is approximated by the
    average log density over ``mc_size`` draws of ``true_sampler(seed, mc_size)``.
    """
    if mc_size < 10_000:
        raise SizeError(f"mc_size must be at least 10^4, got {mc_size}")
    pts = np.asarray(true_sampler(seed, mc_size), dtype=float)
    return fit_pml(as_candidate(family), pts)


# Monotonicity ---------------------------------------------------------------------


def monotonicity_audit(curve, tolerance: float = 1e-8) -> MonotonicityReport:
    """Check whether successive differences share one sign.

    ``tolerance`` is relative to the curve's range: differences smaller than
    ``tolerance * (max - min)`` in magnitude count as ties. Differences at
    floating-point roundoff level (``ROUNDOFF_ULPS`` ulps of the largest
    value) are ties as well, so a curve that is constant up to rounding is
    reported as flat. ``max_violation`` is the largest difference against the
    dominant direction.
    """
    if isinstance(curve, PopulationCurve):
        values = curve.m_values
    elif isinstance(curve, RegressionEstimate):
        if curve.d != 1:
            raise ValueError("monotonicity_audit expects a one-dimensional estimate")
        values = curve.values
    else:
        values = curve
    values = np.asarray(values, dtype=float).ravel()
    if values.size < 3:
        raise ValueError("need at least 3 grid points")
    if not np.all(np.isfinite(values)):
        return MonotonicityReport(False, "flat", math.inf)
    diffs = np.diff(values)
    roundoff = ROUNDOFF_ULPS * np.finfo(float).eps * float(np.max(np.abs(values)))
    thresh = max(tolerance * float(np.ptp(values)), roundoff)
    up = float(np.max(diffs, initial=0.0))
    down = float(-np.min(diffs, initial=0.0))
    if up <= thresh and down <= thresh:
        return MonotonicityReport(True, "flat", 0.0)
    increasing = np.sum(np.clip(diffs, 0.0, None)) >= np.sum(np.clip(-diffs, 0.0, None))
    violation = down if increasing else up
    return MonotonicityReport(
        monotone=violation <= thresh,
        direction="increasing" if increasing else "decreasing",
        max_violation=violation,
    )
