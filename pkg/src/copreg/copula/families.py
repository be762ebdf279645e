"""Unrotated bivariate copula families.

Every family works on broadcastable numpy arrays ``u, v`` strictly inside the
unit square and a parameter tuple ``p``. Densities are computed in log space.
The conditional distribution ``hfunc(v, u, p)`` is ``dC(u, v)/du``, i.e. the
CDF of the second argument given the first.

Rotations, validation and the public API live in :mod:`copreg.copula.core`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from copreg.copula._special import bvn_cdf, log1mexp, log_sum_exp_minus_one, t_ppf
from copreg.errors import NumericError


class Family(str, enum.Enum):
    """Copula family tags; values are the serialized lowercase names."""

    INDEPENDENCE = "indep"
    GAUSSIAN = "gaussian"
    STUDENT_T = "t"
    CLAYTON = "clayton"
    GUMBEL = "gumbel"
    FRANK = "frank"
    JOE = "joe"
    AMH = "amh"
    BB1 = "bb1"
    BB6 = "bb6"
    BB7 = "bb7"
    BB8 = "bb8"
    GAUSS_MIX2 = "gaussmix2"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ParamSpace:
    """Closed numeric box used for validation and optimization."""

    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self):
        if len(self.lower) != len(self.upper):
            raise ValueError("lower and upper bounds differ in length")
        if any(lo >= hi for lo, hi in zip(self.lower, self.upper)):
            raise ValueError("ParamSpace requires lower < upper componentwise")

    @property
    def midpoint(self) -> tuple[float, ...]:
        return tuple(0.5 * (lo + hi) for lo, hi in zip(self.lower, self.upper))

    def contains(self, params) -> bool:
        return len(params) == len(self.lower) and all(
            lo <= x <= hi for x, lo, hi in zip(params, self.lower, self.upper)
        )

    def clip(self, params) -> tuple[float, ...]:
        return tuple(
            float(min(max(x, lo), hi)) for x, lo, hi in zip(params, self.lower, self.upper)
        )


# Below this magnitude Gaussian rho and Frank theta use the independence limit.
_INDEP_EPS = 1e-10

_HINV_MAX_ITER = 200
_HINV_TOL = 1e-10


def _bisect_hinv(hfunc, p, u, params):
    """Invert ``v -> hfunc(v, u, params)`` by bisection on the logit scale."""
    p, u = np.broadcast_arrays(np.asarray(p, dtype=float), np.asarray(u, dtype=float))
    lo = np.full(p.shape, -40.0)
    hi = np.full(p.shape, 40.0)
    for _ in range(_HINV_MAX_ITER):
        mid = 0.5 * (lo + hi)
        val = hfunc(special.expit(mid), u, params)
        below = val < p
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
        v_lo, v_hi = special.expit(lo), special.expit(hi)
        if np.all((hi - lo < 1e-13) | (v_hi <= np.nextafter(v_lo, 2.0))):
            break
    v = special.expit(0.5 * (lo + hi))
    err = np.abs(hfunc(v, u, params) - p)
    collapsed = special.expit(hi) <= np.nextafter(special.expit(lo), 2.0)
    # Near the logit bracket ends the root may sit beyond +-40 (v within 4e-18 of 0 or 1).
    at_edge = (lo <= -40.0 + 1e-9) | (hi >= 40.0 - 1e-9)
    bad = (err > _HINV_TOL) & ~collapsed & ~at_edge & (hi - lo >= 1e-13)
    if np.any(bad):
        raise NumericError(
            f"h-function inversion did not converge for {int(bad.sum())} point(s)"
        )
    return v


class BaseFamily:
    family: Family
    param_names: tuple[str, ...] = ()
    space = ParamSpace((), ())
    #: c(u, v) == c(1 - u, 1 - v) for every parameter value
    radially_symmetric = False
    #: the unrotated family already covers negative Kendall tau
    signed = False

    @property
    def n_params(self) -> int:
        return len(self.param_names)

    def logpdf(self, u, v, p):
        raise NotImplementedError

    def cdf(self, u, v, p):
        raise NotImplementedError

    def hfunc(self, v, u, p):
        raise NotImplementedError

    def hinv(self, q, u, p):
        return _bisect_hinv(self.hfunc, q, u, p)

    def tau(self, p) -> float:
        raise NotImplementedError


class Independence(BaseFamily):
    family = Family.INDEPENDENCE
    radially_symmetric = True
    signed = True

    def logpdf(self, u, v, p):
        return np.zeros(np.broadcast(u, v).shape)

    def cdf(self, u, v, p):
        return np.asarray(u, dtype=float) * v

    def hfunc(self, v, u, p):
        return np.broadcast_arrays(np.asarray(v, dtype=float), np.asarray(u, dtype=float))[0].copy()

    def hinv(self, q, u, p):
        return np.broadcast_arrays(np.asarray(q, dtype=float), np.asarray(u, dtype=float))[0].copy()

    def tau(self, p):
        return 0.0


class Gaussian(BaseFamily):
    family = Family.GAUSSIAN
    param_names = ("rho",)
    space = ParamSpace((-0.9999,), (0.9999,))
    radially_symmetric = True
    signed = True

    def logpdf(self, u, v, p):
        (rho,) = p
        if abs(rho) < _INDEP_EPS:
            return np.zeros(np.broadcast(u, v).shape)
        x, y = special.ndtri(u), special.ndtri(v)
        r2 = (1.0 - rho) * (1.0 + rho)
        return -0.5 * np.log(r2) - (rho * rho * (x * x + y * y) - 2.0 * rho * x * y) / (2.0 * r2)

    def cdf(self, u, v, p):
        (rho,) = p
        if abs(rho) < _INDEP_EPS:
            return np.asarray(u, dtype=float) * v
        return bvn_cdf(special.ndtri(u), special.ndtri(v), rho)

    def hfunc(self, v, u, p):
        (rho,) = p
        if abs(rho) < _INDEP_EPS:
            return Independence().hfunc(v, u, p)
        x, y = special.ndtri(u), special.ndtri(v)
        return special.ndtr((y - rho * x) / np.sqrt((1.0 - rho) * (1.0 + rho)))

    def hinv(self, q, u, p):
        (rho,) = p
        if abs(rho) < _INDEP_EPS:
            return Independence().hinv(q, u, p)
        x = special.ndtri(u)
        return special.ndtr(rho * x + np.sqrt((1.0 - rho) * (1.0 + rho)) * special.ndtri(q))

    def tau(self, p):
        return 2.0 / math.pi * math.asin(p[0])


class StudentT(BaseFamily):
    family = Family.STUDENT_T
    param_names = ("rho", "nu")
    space = ParamSpace((-0.9999, 2.0001), (0.9999, 30.0))
    radially_symmetric = True
    signed = True

    def logpdf(self, u, v, p):
        rho, nu = p
        x, y = t_ppf(nu, u), t_ppf(nu, v)
        r2 = (1.0 - rho) * (1.0 + rho)
        const = (
            special.gammaln(0.5 * (nu + 2.0))
            + special.gammaln(0.5 * nu)
            - 2.0 * special.gammaln(0.5 * (nu + 1.0))
            - 0.5 * np.log(r2)
        )
        quad = (x * x + y * y - 2.0 * rho * x * y) / (nu * r2)
        return (
            const
            - 0.5 * (nu + 2.0) * np.log1p(quad)
            + 0.5 * (nu + 1.0) * (np.log1p(x * x / nu) + np.log1p(y * y / nu))
        )

    def _scale(self, x, rho, nu):
        return np.sqrt((nu + x * x) * (1.0 - rho) * (1.0 + rho) / (nu + 1.0))

    def hfunc(self, v, u, p):
        rho, nu = p
        x, y = t_ppf(nu, u), t_ppf(nu, v)
        return special.stdtr(nu + 1.0, (y - rho * x) / self._scale(x, rho, nu))

    def hinv(self, q, u, p):
        rho, nu = p
        x = t_ppf(nu, u)
        y = rho * x + self._scale(x, rho, nu) * t_ppf(nu + 1.0, q)
        return special.stdtr(nu, y)

    def cdf(self, u, v, p):
        rho, nu = p

        def one(uu, vv):
            xu = t_ppf(nu, uu)
            yv = t_ppf(nu, vv)

            def integrand(s):
                z = (yv - rho * s) / self._scale(s, rho, nu)
                return math.exp(_t_logpdf(s, nu)) * special.stdtr(nu + 1.0, z)

            val, _ = integrate.quad(integrand, -np.inf, xu, epsabs=1e-13, epsrel=1e-12, limit=200)
            return val

        u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
        out = np.array([one(a, b) for a, b in zip(u.ravel(), v.ravel())]).reshape(u.shape)
        return np.clip(out, 0.0, 1.0)

    def tau(self, p):
        return 2.0 / math.pi * math.asin(p[0])


def _t_logpdf(x, nu):
    return (
        special.gammaln(0.5 * (nu + 1.0))
        - special.gammaln(0.5 * nu)
        - 0.5 * math.log(nu * math.pi)
        - 0.5 * (nu + 1.0) * math.log1p(x * x / nu)
    )


class Clayton(BaseFamily):
    family = Family.CLAYTON
    param_names = ("theta",)
    space = ParamSpace((1e-4,), (28.0,))

    def _log_t(self, u, v, th):
        return log_sum_exp_minus_one(-th * np.log(u), -th * np.log(v))

    def logpdf(self, u, v, p):
        (th,) = p
        lt = self._log_t(u, v, th)
        return math.log1p(th) - (th + 1.0) * (np.log(u) + np.log(v)) - (2.0 + 1.0 / th) * lt

    def cdf(self, u, v, p):
        (th,) = p
        return np.exp(-self._log_t(u, v, th) / th)

    def hfunc(self, v, u, p):
        (th,) = p
        lt = self._log_t(u, v, th)
        return np.exp(-(th + 1.0) * np.log(u) - (1.0 / th + 1.0) * lt)

    def hinv(self, q, u, p):
        (th,) = p
        q, u = np.broadcast_arrays(np.asarray(q, dtype=float), np.asarray(u, dtype=float))
        a = -th / (th + 1.0) * np.log(q) - th * np.log(u)
        b = -th * np.log(u)
        # log T with T = e^a - e^b + 1 and a >= b >= 0
        with np.errstate(divide="ignore"):
            log_diff = a + np.log(-np.expm1(b - a))
        log_t = np.logaddexp(log_diff, 0.0)
        return np.exp(-log_t / th)

    def tau(self, p):
        return p[0] / (p[0] + 2.0)


class Gumbel(BaseFamily):
    family = Family.GUMBEL
    param_names = ("theta",)
    space = ParamSpace((1.0 + 1e-6,), (17.0,))

    def _parts(self, u, v, th):
        x, y = -np.log(u), -np.log(v)
        lx, ly = np.log(x), np.log(y)
        log_s = np.logaddexp(th * lx, th * ly)
        return x, y, lx, ly, log_s, np.exp(log_s / th)

    def logpdf(self, u, v, p):
        (th,) = p
        x, y, lx, ly, log_s, a = self._parts(u, v, th)
        return -a + (th - 1.0) * (lx + ly) + x + y + (1.0 / th - 2.0) * log_s + np.log(a + th - 1.0)

    def cdf(self, u, v, p):
        (th,) = p
        return np.exp(-self._parts(u, v, th)[5])

    def hfunc(self, v, u, p):
        (th,) = p
        x, _, lx, _, log_s, a = self._parts(u, v, th)
        return np.exp(-a + (1.0 / th - 1.0) * log_s + (th - 1.0) * lx + x)

    def tau(self, p):
        return 1.0 - 1.0 / p[0]


class Frank(BaseFamily):
    family = Family.FRANK
    param_names = ("theta",)
    space = ParamSpace((-35.0,), (35.0,))
    radially_symmetric = True
    signed = True

    def logpdf(self, u, v, p):
        (th,) = p
        if abs(th) < _INDEP_EPS:
            return np.zeros(np.broadcast(u, v).shape)
        d = -np.expm1(-th) - np.expm1(-th * u) * np.expm1(-th * v)
        return math.log(th * -math.expm1(-th)) - th * (u + v) - 2.0 * np.log(np.abs(d))

    def cdf(self, u, v, p):
        (th,) = p
        if abs(th) < _INDEP_EPS:
            return np.asarray(u, dtype=float) * v
        return -np.log1p(np.expm1(-th * u) * np.expm1(-th * v) / math.expm1(-th)) / th

    def hfunc(self, v, u, p):
        (th,) = p
        if abs(th) < _INDEP_EPS:
            return Independence().hfunc(v, u, p)
        bv = np.expm1(-th * v)
        return np.exp(-th * u) * bv / (math.expm1(-th) + np.expm1(-th * u) * bv)

    def hinv(self, q, u, p):
        (th,) = p
        if abs(th) < _INDEP_EPS:
            return Independence().hinv(q, u, p)
        a = np.exp(-th * u)
        b = q * math.expm1(-th) / (a - q * np.expm1(-th * u))
        return -np.log1p(b) / th

    def tau(self, p):
        (th,) = p
        if abs(th) < 1e-6:
            return th / 9.0
        at = abs(th)
        debye, _ = integrate.quad(lambda t: t / math.expm1(t) if t > 0 else 1.0, 0.0, at)
        tau = 1.0 - 4.0 / at + 4.0 * debye / (at * at)
        return math.copysign(tau, th)


def _archimedean_tau(phi_over_dphi, p) -> float:
    val, _ = integrate.quad(lambda t: phi_over_dphi(t, p), 0.0, 1.0, limit=200, epsabs=1e-12)
    return 1.0 + 4.0 * val


class Joe(BaseFamily):
    family = Family.JOE
    param_names = ("theta",)
    space = ParamSpace((1.0 + 1e-6,), (30.0,))

    def _log_s(self, u, v, th):
        # S = 1 - (1 - a)(1 - b) = a + b (1 - a) with a = ubar^th, b = vbar^th
        zu, zv = th * np.log1p(-u), th * np.log1p(-v)
        au, av = -np.expm1(zu), -np.expm1(zv)
        return np.log(np.exp(zu) + np.exp(zv) * au), au, av

    def logpdf(self, u, v, p):
        (th,) = p
        log_s, _, _ = self._log_s(u, v, th)
        return (
            (1.0 / th - 2.0) * log_s
            + (th - 1.0) * (np.log1p(-u) + np.log1p(-v))
            + np.log(th - 1.0 + np.exp(log_s))
        )

    def cdf(self, u, v, p):
        (th,) = p
        log_s, _, _ = self._log_s(u, v, th)
        return -np.expm1(log_s / th)

    def hfunc(self, v, u, p):
        (th,) = p
        log_s, _, av = self._log_s(u, v, th)
        return np.exp((th - 1.0) * np.log1p(-u) + (1.0 / th - 1.0) * log_s) * av

    @staticmethod
    def _phi_over_dphi(t, p):
        (th,) = p
        z = (1.0 - t) ** th
        if z >= 1.0 or t >= 1.0:
            return 0.0
        return math.log1p(-z) * (1.0 - z) / (th * (1.0 - t) ** (th - 1.0))

    def tau(self, p):
        return _archimedean_tau(self._phi_over_dphi, p)


class AMH(BaseFamily):
    family = Family.AMH
    param_names = ("theta",)
    space = ParamSpace((-1.0 + 1e-6,), (1.0 - 1e-6,))
    signed = True

    def logpdf(self, u, v, p):
        (th,) = p
        ub, vb = 1.0 - u, 1.0 - v
        num = 1.0 + th * ((1.0 + u) * (1.0 + v) - 3.0) + th * th * ub * vb
        return np.log(num) - 3.0 * np.log1p(-th * ub * vb)

    def cdf(self, u, v, p):
        (th,) = p
        return u * v / (1.0 - th * (1.0 - u) * (1.0 - v))

    def hfunc(self, v, u, p):
        (th,) = p
        d = 1.0 - th * (1.0 - u) * (1.0 - v)
        return v * (1.0 - th * (1.0 - v)) / (d * d)

    def tau(self, p):
        (th,) = p
        if abs(th) < 1e-6:
            return 2.0 * th / 9.0
        return 1.0 - 2.0 * (th + (1.0 - th) ** 2 * math.log1p(-th)) / (3.0 * th * th)


class BB1(BaseFamily):
    """Clayton-Gumbel family, generator ``(t**-theta - 1)**delta``."""

    family = Family.BB1
    param_names = ("theta", "delta")
    space = ParamSpace((1e-4, 1.0 + 1e-6), (7.0, 7.0))

    def _parts(self, u, v, th, de):
        lx = np.log(np.expm1(-th * np.log(u)))
        ly = np.log(np.expm1(-th * np.log(v)))
        log_s = np.logaddexp(de * lx, de * ly)
        log_w = log_s / de
        return lx, ly, log_s, log_w, np.logaddexp(0.0, log_w)

    def logpdf(self, u, v, p):
        th, de = p
        lx, ly, log_s, log_w, log1pw = self._parts(u, v, th, de)
        w = np.exp(log_w)
        return (
            -(th + 1.0) * (np.log(u) + np.log(v))
            + (de - 1.0) * (lx + ly)
            - (1.0 / th + 2.0) * log1pw
            + (1.0 / de - 2.0) * log_s
            + np.log((1.0 + th) * w + th * (de - 1.0) * (1.0 + w))
        )

    def cdf(self, u, v, p):
        th, de = p
        return np.exp(-self._parts(u, v, th, de)[4] / th)

    def hfunc(self, v, u, p):
        th, de = p
        lx, _, log_s, _, log1pw = self._parts(u, v, th, de)
        return np.exp(
            -(1.0 / th + 1.0) * log1pw + (1.0 / de - 1.0) * log_s + (de - 1.0) * lx - (th + 1.0) * np.log(u)
        )

    def tau(self, p):
        th, de = p
        return 1.0 - 2.0 / (de * (th + 2.0))


class BB6(BaseFamily):
    """Joe-Gumbel family, generator ``(-log(1 - (1 - t)**theta))**delta``."""

    family = Family.BB6
    param_names = ("theta", "delta")
    space = ParamSpace((1.0 + 1e-6, 1.0 + 1e-6), (6.0, 8.0))

    def _margin(self, u, th):
        z = th * np.log1p(-u)  # log(ubar^theta)
        one_minus = -np.expm1(z)  # 1 - ubar^theta
        x = -np.log1p(-np.exp(z))
        return z, one_minus, x, np.log(x)

    def _parts(self, u, v, th, de):
        zu, au, xu, lxu = self._margin(u, th)
        zv, av, xv, lxv = self._margin(v, th)
        log_s = np.logaddexp(de * lxu, de * lxv)
        w = np.exp(log_s / de)
        return (zu, au, lxu), (zv, av, lxv), log_s, w

    def logpdf(self, u, v, p):
        th, de = p
        (zu, au, lxu), (zv, av, lxv), log_s, w = self._parts(u, v, th, de)
        e = np.exp(-w)
        log_b = log1mexp(w)
        return (
            (de - 1.0) * (lxu + lxv)
            + (th - 1.0) / th * (zu + zv)
            - np.log(au)
            - np.log(av)
            + (1.0 / th - 2.0) * log_b
            - w
            + (1.0 / de - 2.0) * log_s
            + np.log(w * (th - e) + th * (de - 1.0) * -np.expm1(-w))
        )

    def cdf(self, u, v, p):
        th, de = p
        w = self._parts(u, v, th, de)[3]
        return -np.expm1(log1mexp(w) / th)

    def hfunc(self, v, u, p):
        th, de = p
        (zu, au, lxu), _, log_s, w = self._parts(u, v, th, de)
        return np.exp(
            (1.0 / th - 1.0) * log1mexp(w)
            - w
            + (1.0 / de - 1.0) * log_s
            + (de - 1.0) * lxu
            + (th - 1.0) / th * zu
            - np.log(au)
        )

    @staticmethod
    def _phi_over_dphi(t, p):
        th, de = p
        return Joe._phi_over_dphi(t, (th,)) / de

    def tau(self, p):
        return _archimedean_tau(self._phi_over_dphi, p)


class BB7(BaseFamily):
    """Joe-Clayton family, generator ``(1 - (1 - t)**theta)**-delta - 1``."""

    family = Family.BB7
    param_names = ("theta", "delta")
    space = ParamSpace((1.0 + 1e-6, 1e-4), (6.0, 25.0))

    def _parts(self, u, v, th, de):
        zu = th * np.log1p(-u)
        zv = th * np.log1p(-v)
        la = log1mexp(-zu)  # log(1 - ubar^theta)
        lb = log1mexp(-zv)
        log_t = log_sum_exp_minus_one(-de * la, -de * lb)
        return zu, zv, la, lb, log_t

    def logpdf(self, u, v, p):
        th, de = p
        zu, zv, la, lb, log_t = self._parts(u, v, th, de)
        k = np.exp(-log_t / de)
        d = -np.expm1(-log_t / de)
        return (
            -(de + 1.0) * (la + lb)
            + (th - 1.0) / th * (zu + zv)
            + (1.0 / th - 2.0) * np.log(d)
            - (1.0 / de + 2.0) * log_t
            + np.log(th * (1.0 + de) * d + (th - 1.0) * k)
        )

    def cdf(self, u, v, p):
        th, de = p
        log_t = self._parts(u, v, th, de)[4]
        return -np.expm1(np.log(-np.expm1(-log_t / de)) / th)

    def hfunc(self, v, u, p):
        th, de = p
        zu, _, la, _, log_t = self._parts(u, v, th, de)
        log_d = np.log(-np.expm1(-log_t / de))
        return np.exp(
            (1.0 / th - 1.0) * log_d
            - (1.0 / de + 1.0) * log_t
            - (de + 1.0) * la
            + (th - 1.0) / th * zu
        )

    @staticmethod
    def _phi_over_dphi(t, p):
        th, de = p
        if t >= 1.0:
            return 0.0
        a = 1.0 - (1.0 - t) ** th
        return -(a - a ** (de + 1.0)) / (de * th * (1.0 - t) ** (th - 1.0))

    def tau(self, p):
        return _archimedean_tau(self._phi_over_dphi, p)


class BB8(BaseFamily):
    """Joe-Frank family, generator ``-log((1 - (1 - delta t)**theta) / eta)``."""

    family = Family.BB8
    param_names = ("theta", "delta")
    space = ParamSpace((1.0 + 1e-6, 1e-4), (8.0, 1.0))

    def _parts(self, u, v, th, de):
        lu, lv = np.log1p(-de * u), np.log1p(-de * v)
        pu = np.exp(th * lu)  # (1 - delta u)^theta
        pv = np.exp(th * lv)
        if de < 1.0:
            ld = math.log1p(-de)
            pd = math.exp(th * ld)
            pu_minus_pd = pd * np.expm1(th * (lu - ld))
        else:
            pd = 0.0
            pu_minus_pd = pu
        eta = 1.0 - pd
        # Q = 1 - AB/eta = ((pu - pd) + pv (1 - pu)) / eta
        log_q = np.log(pu_minus_pd - pv * np.expm1(th * lu)) - math.log(eta)
        return pu, pv, eta, log_q

    def logpdf(self, u, v, p):
        th, de = p
        _, _, eta, log_q = self._parts(u, v, th, de)
        return (
            math.log(de)
            - math.log(eta)
            + (th - 1.0) * (np.log1p(-de * u) + np.log1p(-de * v))
            + (1.0 / th - 2.0) * log_q
            + np.log(th - 1.0 + np.exp(log_q))
        )

    def cdf(self, u, v, p):
        th, de = p
        log_q = self._parts(u, v, th, de)[3]
        return -np.expm1(log_q / th) / de

    def hfunc(self, v, u, p):
        th, de = p
        _, pv, eta, log_q = self._parts(u, v, th, de)
        return np.exp((1.0 / th - 1.0) * log_q + (th - 1.0) * np.log1p(-de * u) - math.log(eta)) * (1.0 - pv)

    @staticmethod
    def _phi_over_dphi(t, p):
        th, de = p
        z = (1.0 - de * t) ** th
        eta = 1.0 - (1.0 - de) ** th
        a = 1.0 - z
        if a <= 0.0:
            return 0.0
        return math.log(a / eta) * a / (th * de * (1.0 - de * t) ** (th - 1.0))

    def tau(self, p):
        return _archimedean_tau(self._phi_over_dphi, p)


class GaussMix2(BaseFamily):
    """Two-component Gaussian copula mixture ``pi * c(rho1) + (1 - pi) * c(rho2)``."""

    family = Family.GAUSS_MIX2
    param_names = ("rho1", "rho2", "pi")
    space = ParamSpace((-0.9999, -0.9999, 1e-4), (0.9999, 0.9999, 1.0 - 1e-4))
    radially_symmetric = True
    signed = True
    _g = Gaussian()

    def logpdf(self, u, v, p):
        r1, r2, w = p
        return np.logaddexp(
            math.log(w) + self._g.logpdf(u, v, (r1,)),
            math.log1p(-w) + self._g.logpdf(u, v, (r2,)),
        )

    def cdf(self, u, v, p):
        r1, r2, w = p
        return w * self._g.cdf(u, v, (r1,)) + (1.0 - w) * self._g.cdf(u, v, (r2,))

    def hfunc(self, v, u, p):
        r1, r2, w = p
        return w * self._g.hfunc(v, u, (r1,)) + (1.0 - w) * self._g.hfunc(v, u, (r2,))

    def tau(self, p):
        # tau = 4 E[C(U,V)] - 1 and int C_i dC_j = 1/4 + asin((r_i + r_j)/2) / (2 pi)
        r, w = (p[0], p[1]), (p[2], 1.0 - p[2])
        return (2.0 / math.pi) * sum(
            w[i] * w[j] * math.asin(0.5 * (r[i] + r[j])) for i in range(2) for j in range(2)
        )


FAMILIES: dict[Family, BaseFamily] = {
    f.family: f
    for f in (
        Independence(),
        Gaussian(),
        StudentT(),
        Clayton(),
        Gumbel(),
        Frank(),
        Joe(),
        AMH(),
        BB1(),
        BB6(),
        BB7(),
        BB8(),
        GaussMix2(),
    )
}

#: stable integer codes shared with the compiled kernels
FAMILY_CODES: dict[Family, int] = {fam: i for i, fam in enumerate(Family)}
