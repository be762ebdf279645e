"""Public operations on parametric bivariate copulas with rotations.

Rotation convention (angles in degrees, ``c`` the unrotated density)::

    c_90(u, v)  = c(1 - u, v)
    c_180(u, v) = c(1 - u, 1 - v)     # survival copula
    c_270(u, v) = c(u, 1 - v)

The first argument of a copula is the conditioning one for :func:`h_function`,
``h(v | u) = dC(u, v)/du``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import optimize

from copreg.copula.families import FAMILIES, BaseFamily, Family, ParamSpace
from copreg.errors import ConfigError, DomainError, ParameterDomainError

ROTATIONS = (0, 90, 180, 270)


class Candidate(NamedTuple):
    """A family with a fixed rotation, not yet carrying parameters."""

    family: Family
    rotation: int = 0

    @property
    def tag(self) -> str:
        return format_tag(self.family, self.rotation)


def format_tag(family: Family, rotation: int) -> str:
    return family.value if rotation == 0 else f"{family.value}@{rotation}"


def parse_family(text: str, rotation: int | None = None) -> Candidate:
    """Parse ``"clayton@180"`` style names into a :class:`Candidate`.

    An explicit ``rotation`` argument overrides a suffix in ``text``.
    """
    name, _, suffix = text.strip().lower().partition("@")
    try:
        family = Family(name)
    except ValueError:
        valid = ", ".join(f.value for f in Family)
        raise ConfigError(f"unknown copula family {name!r}; valid names: {valid}") from None
    if rotation is None:
        try:
            rotation = int(suffix) if suffix else 0
        except ValueError:
            raise ConfigError(f"bad rotation suffix in {text!r}") from None
    if rotation not in ROTATIONS:
        raise ConfigError(f"rotation must be one of {ROTATIONS}, got {rotation}")
    if family is Family.INDEPENDENCE:
        rotation = 0
    return Candidate(family, rotation)


@dataclass(frozen=True)
class CopulaSpec:
    """A fully parameterized, possibly rotated, bivariate copula."""

    family: Family
    rotation: int = 0
    params: tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        family = Family(self.family)
        object.__setattr__(self, "family", family)
        if self.rotation not in ROTATIONS:
            raise ParameterDomainError(f"rotation must be one of {ROTATIONS}, got {self.rotation}")
        if family is Family.INDEPENDENCE:
            object.__setattr__(self, "rotation", 0)
        params = tuple(float(x) for x in np.atleast_1d(np.asarray(self.params, dtype=float)))
        fam = FAMILIES[family]
        if len(params) != fam.n_params:
            raise ParameterDomainError(
                f"{family.value} takes {fam.n_params} parameter(s), got {len(params)}"
            )
        if not all(math.isfinite(x) for x in params) or not fam.space.contains(params):
            raise ParameterDomainError(
                f"parameters {params} outside {family.value} box "
                f"[{fam.space.lower}, {fam.space.upper}]"
            )
        if family is Family.GAUSS_MIX2 and params[0] > params[1]:
            params = (params[1], params[0], 1.0 - params[2])
        object.__setattr__(self, "params", params)

    @property
    def tag(self) -> str:
        return format_tag(self.family, self.rotation)

    @property
    def candidate(self) -> Candidate:
        return Candidate(self.family, self.rotation)

    @property
    def n_params(self) -> int:
        return len(self.params)

    @property
    def impl(self) -> BaseFamily:
        return FAMILIES[self.family]

    def __str__(self) -> str:
        return f"{self.tag}({', '.join(repr(p) for p in self.params)})"


def param_space(family: Family) -> ParamSpace:
    return FAMILIES[Family(family)].space


INDEPENDENCE = CopulaSpec(Family.INDEPENDENCE)


def _as_float(x):
    arr = np.asarray(x, dtype=float)
    return arr, arr.ndim == 0


def _ret(arr, scalar):
    return float(arr) if scalar else arr


def _check_open(name, x):
    if not np.all(np.isfinite(x)) or np.any(x <= 0.0) or np.any(x >= 1.0):
        raise DomainError(f"{name} must lie strictly inside (0, 1)")


def _check_closed(name, x):
    if not np.all(np.isfinite(x)) or np.any(x < 0.0) or np.any(x > 1.0):
        raise DomainError(f"{name} must lie in [0, 1]")


def _base_args(rotation, u, v):
    if rotation == 90:
        return 1.0 - u, v
    if rotation == 180:
        return 1.0 - u, 1.0 - v
    if rotation == 270:
        return u, 1.0 - v
    return u, v


def log_density(spec: CopulaSpec, u, v):
    """Log copula density ``log c(u, v)``."""
    u, s1 = _as_float(u)
    v, s2 = _as_float(v)
    _check_open("u", u)
    _check_open("v", v)
    bu, bv = _base_args(spec.rotation, u, v)
    out = np.asarray(spec.impl.logpdf(bu, bv, spec.params), dtype=float)
    out = np.broadcast_to(out, np.broadcast(u, v).shape)
    return _ret(out, s1 and s2)


def density(spec: CopulaSpec, u, v):
    """Copula density ``c(u, v)``, evaluated as ``exp`` of the log density."""
    lp = log_density(spec, u, v)
    return float(np.exp(lp)) if np.ndim(lp) == 0 else np.exp(lp)


def cdf(spec: CopulaSpec, u, v):
    """Copula distribution function ``C(u, v)`` on the closed unit square."""
    u, s1 = _as_float(u)
    v, s2 = _as_float(v)
    _check_closed("u", u)
    _check_closed("v", v)
    u, v = np.broadcast_arrays(u, v)
    interior = (u > 0) & (u < 1) & (v > 0) & (v < 1)
    # Frechet boundary values; interior points are overwritten below.
    out = np.where((u == 0) | (v == 0), 0.0, np.where(u == 1, v, u))
    if np.any(interior):
        ui, vi = u[interior], v[interior]
        base = spec.impl.cdf
        p = spec.params
        r = spec.rotation
        if r == 0:
            val = base(ui, vi, p)
        elif r == 90:
            val = vi - base(1.0 - ui, vi, p)
        elif r == 180:
            val = ui + vi - 1.0 + base(1.0 - ui, 1.0 - vi, p)
        else:
            val = ui - base(ui, 1.0 - vi, p)
        out = out.astype(float)
        out[interior] = np.clip(val, 0.0, 1.0)
    return _ret(out, s1 and s2)


def h_function(spec: CopulaSpec, v, u):
    """Conditional CDF ``h(v | u) = dC(u, v)/du`` of the second argument."""
    v, s1 = _as_float(v)
    u, s2 = _as_float(u)
    _check_open("v", v)
    _check_open("u", u)
    h = spec.impl.hfunc
    p = spec.params
    r = spec.rotation
    if r == 0:
        out = h(v, u, p)
    elif r == 90:
        out = h(v, 1.0 - u, p)
    elif r == 180:
        out = 1.0 - h(1.0 - v, 1.0 - u, p)
    else:
        out = 1.0 - h(1.0 - v, u, p)
    out = np.clip(np.broadcast_to(out, np.broadcast(u, v).shape), 0.0, 1.0)
    return _ret(out, s1 and s2)


def h_inverse(spec: CopulaSpec, p, u):
    """Solve ``h_function(spec, v, u) = p`` for ``v``.

    Closed forms are used for the independence, Gaussian, t, Clayton and Frank
    families; the others use bisection. Raises :class:`~copreg.errors.NumericError`
    when the bisection fails to converge.
    """
    p, s1 = _as_float(p)
    u, s2 = _as_float(u)
    _check_open("p", p)
    _check_open("u", u)
    hinv = spec.impl.hinv
    q = spec.params
    r = spec.rotation
    if r == 0:
        out = hinv(p, u, q)
    elif r == 90:
        out = hinv(p, 1.0 - u, q)
    elif r == 180:
        out = 1.0 - hinv(1.0 - p, 1.0 - u, q)
    else:
        out = 1.0 - hinv(1.0 - p, u, q)
    out = np.clip(np.broadcast_to(out, np.broadcast(p, u).shape), 0.0, 1.0)
    return _ret(out, s1 and s2)


def open_uniform(rng: np.random.Generator, size) -> np.ndarray:
    """Uniform draws strictly inside (0, 1)."""
    return rng.random(size) + 2.0**-54


def sample(spec: CopulaSpec, n: int, seed: int) -> np.ndarray:
    """Draw ``n`` pairs by conditional inversion; deterministic in ``seed``."""
    if n < 1:
        raise DomainError("n must be at least 1")
    rng = np.random.default_rng(seed)
    u = open_uniform(rng, n)
    w = open_uniform(rng, n)
    v = h_inverse(spec, w, u)
    # Inversion near the corners can round to exactly 0 or 1.
    v = np.clip(v, np.finfo(float).tiny, 1.0 - np.finfo(float).epsneg)
    return np.column_stack([u, v])


def kendall_tau(spec: CopulaSpec) -> float:
    """Population Kendall's tau.

    Closed forms where available; Archimedean families without one use the
    one-dimensional integral ``1 + 4 * int_0^1 phi/phi'``.
    """
    tau = spec.impl.tau(spec.params)
    return -tau if spec.rotation in (90, 270) else tau


def log_likelihood(spec: CopulaSpec, pairs) -> float:
    """Sum of log densities over ``pairs`` (an ``(n, 2)`` array)."""
    from copreg import kernels

    pairs = np.asarray(pairs, dtype=float).reshape(-1, 2)
    _check_open("pairs", pairs)
    return kernels.loglik(spec.family, spec.rotation, spec.params, pairs[:, 0], pairs[:, 1])


# Kendall tau inversion -------------------------------------------------------

#: secondary ("shape") parameter held fixed when inverting tau for two-parameter
#: families; the other parameter is solved for
DEFAULT_SHAPES: dict[Family, float] = {
    Family.STUDENT_T: 4.0,  # nu
    Family.BB1: 1.1,  # delta
    Family.BB6: 1.1,  # theta
    Family.BB7: 1.1,  # theta
    Family.BB8: 0.9,  # delta
}


def _solve(tau_of, lo, hi, target, what):
    t_lo, t_hi = tau_of(lo), tau_of(hi)
    if not (min(t_lo, t_hi) <= target <= max(t_lo, t_hi)):
        raise ParameterDomainError(
            f"tau={target:g} outside attainable range [{min(t_lo, t_hi):.4g}, "
            f"{max(t_lo, t_hi):.4g}] for {what}"
        )
    if target == t_lo:
        return lo
    if target == t_hi:
        return hi
    return optimize.brentq(lambda x: tau_of(x) - target, lo, hi, xtol=1e-13, rtol=1e-13)


def param_from_tau(
    family: Family, tau: float, rotation: int = 0, shape: float | None = None
) -> CopulaSpec:
    """Return the member of ``family`` (with ``rotation``) whose Kendall tau is ``tau``.

    Two-parameter families hold their shape parameter fixed (``shape`` or
    :data:`DEFAULT_SHAPES`) and solve for the other. Raises
    :class:`~copreg.errors.ParameterDomainError` if ``tau`` is unattainable.
    """
    family = Family(family)
    base_tau = -tau if rotation in (90, 270) else tau
    fam = FAMILIES[family]
    lo, hi = fam.space.lower, fam.space.upper
    if not -1.0 < tau < 1.0:
        raise ParameterDomainError("tau must lie in (-1, 1)")
    if shape is None:
        shape = DEFAULT_SHAPES.get(family)

    if family is Family.INDEPENDENCE:
        if tau != 0.0:
            raise ParameterDomainError("independence copula only attains tau = 0")
        return INDEPENDENCE
    if family is Family.GAUSS_MIX2:
        raise ParameterDomainError("gaussmix2 is not identified by Kendall's tau")
    if family in (Family.GAUSSIAN, Family.STUDENT_T):
        rho = math.sin(math.pi * base_tau / 2.0)
        params = (rho,) if family is Family.GAUSSIAN else (rho, shape)
    elif family is Family.CLAYTON:
        params = (2.0 * base_tau / (1.0 - base_tau),)
    elif family is Family.GUMBEL:
        params = (1.0 / (1.0 - base_tau),)
    elif family in (Family.FRANK, Family.JOE, Family.AMH):
        th = _solve(lambda x: fam.tau((x,)), lo[0], hi[0], base_tau, family.value)
        params = (th,)
    elif family is Family.BB1:
        params = (2.0 / (shape * (1.0 - base_tau)) - 2.0, shape)
    elif family in (Family.BB6, Family.BB7):
        de = _solve(lambda x: fam.tau((shape, x)), lo[1], hi[1], base_tau, f"{family.value} theta={shape}")
        params = (shape, de)
    elif family is Family.BB8:
        th = _solve(lambda x: fam.tau((x, shape)), lo[0], hi[0], base_tau, f"bb8 delta={shape}")
        params = (th, shape)
    else:  # pragma: no cover
        raise ParameterDomainError(f"no tau inversion for {family.value}")
    if not fam.space.contains(params):
        raise ParameterDomainError(
            f"tau={tau:g} maps to {params}, outside the {family.value} box"
        )
    return CopulaSpec(family, rotation, params)
