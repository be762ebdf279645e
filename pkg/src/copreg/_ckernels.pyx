# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled log-density kernels for every copula family.

Mirrors ``copreg.copula.families`` formula by formula; family codes follow the
declaration order of ``copreg.copula.families.Family``.
"""

import numpy as np

from libc.math cimport log, exp, log1p, expm1, sqrt, fabs, lgamma, pow, INFINITY, NAN, isnan
from scipy.special.cython_special cimport ndtri, betaincinv

cdef enum:
    INDEP = 0
    GAUSS = 1
    STUDENT = 2
    CLAYTON = 3
    GUMBEL = 4
    FRANK = 5
    JOE = 6
    AMH = 7
    BB1 = 8
    BB6 = 9
    BB7 = 10
    BB8 = 11
    MIX2 = 12

cdef double INDEP_EPS = 1e-10


cdef inline double _logaddexp(double a, double b) noexcept nogil:
    if a == -INFINITY:
        return b
    if b == -INFINITY:
        return a
    if a > b:
        return a + log1p(exp(b - a))
    return b + log1p(exp(a - b))


cdef inline double _lse_m1(double a, double b) noexcept nogil:
    # log(e^a + e^b - 1) for a, b >= 0
    cdef double m = a if a > b else b
    if m < 1.0:
        return log1p(expm1(a) + expm1(b))
    return m + log(exp(a - m) + exp(b - m) - exp(-m))


cdef inline double _log1mexp(double x) noexcept nogil:
    if x < 0.6931471805599453:
        return log(-expm1(-x))
    return log1p(-exp(-x))


cdef inline double _gauss(double u, double v, double rho) noexcept nogil:
    if fabs(rho) < INDEP_EPS:
        return 0.0
    cdef double x = ndtri(u), y = ndtri(v)
    cdef double r2 = (1.0 - rho) * (1.0 + rho)
    return -0.5 * log(r2) - (rho * rho * (x * x + y * y) - 2.0 * rho * x * y) / (2.0 * r2)


cdef inline double _t_ppf(double nu, double p) noexcept nogil:
    # same construction as copreg.copula._special.t_ppf
    cdef double q = p if p < 0.5 else 1.0 - p
    cdef double z, w, mag
    if 2.0 * q < 0.5:
        z = betaincinv(0.5 * nu, 0.5, 2.0 * q)
        mag = sqrt(nu * (1.0 - z) / z)
    else:
        w = betaincinv(0.5, 0.5 * nu, 1.0 - 2.0 * q)
        mag = sqrt(nu * w / (1.0 - w))
    return -mag if p < 0.5 else mag


cdef inline double _student(double u, double v, double rho, double nu, double c0) noexcept nogil:
    cdef double x = _t_ppf(nu, u), y = _t_ppf(nu, v)
    cdef double r2 = (1.0 - rho) * (1.0 + rho)
    cdef double q = (x * x + y * y - 2.0 * rho * x * y) / (nu * r2)
    return c0 - 0.5 * (nu + 2.0) * log1p(q) + 0.5 * (nu + 1.0) * (log1p(x * x / nu) + log1p(y * y / nu))


cdef inline double _clayton(double u, double v, double th) noexcept nogil:
    cdef double lu = log(u), lv = log(v)
    cdef double lt = _lse_m1(-th * lu, -th * lv)
    return log1p(th) - (th + 1.0) * (lu + lv) - (2.0 + 1.0 / th) * lt


cdef inline double _gumbel(double u, double v, double th) noexcept nogil:
    cdef double x = -log(u), y = -log(v)
    cdef double lx = log(x), ly = log(y)
    cdef double ls = _logaddexp(th * lx, th * ly)
    cdef double a = exp(ls / th)
    return -a + (th - 1.0) * (lx + ly) + x + y + (1.0 / th - 2.0) * ls + log(a + th - 1.0)


cdef inline double _frank(double u, double v, double th, double c0) noexcept nogil:
    if fabs(th) < INDEP_EPS:
        return 0.0
    cdef double d = -expm1(-th) - expm1(-th * u) * expm1(-th * v)
    return c0 - th * (u + v) - 2.0 * log(fabs(d))


cdef inline double _joe(double u, double v, double th) noexcept nogil:
    cdef double lub = log1p(-u), lvb = log1p(-v)
    cdef double zu = th * lub, zv = th * lvb
    cdef double ls = log(exp(zu) - exp(zv) * expm1(zu))
    return (1.0 / th - 2.0) * ls + (th - 1.0) * (lub + lvb) + log(th - 1.0 + exp(ls))


cdef inline double _amh(double u, double v, double th) noexcept nogil:
    cdef double ub = 1.0 - u, vb = 1.0 - v
    cdef double num = 1.0 + th * ((1.0 + u) * (1.0 + v) - 3.0) + th * th * ub * vb
    return log(num) - 3.0 * log1p(-th * ub * vb)


cdef inline double _bb1(double u, double v, double th, double de) noexcept nogil:
    cdef double lu = log(u), lv = log(v)
    cdef double lx = log(expm1(-th * lu)), ly = log(expm1(-th * lv))
    cdef double ls = _logaddexp(de * lx, de * ly)
    cdef double lw = ls / de
    cdef double w = exp(lw)
    cdef double l1pw = _logaddexp(0.0, lw)
    return (-(th + 1.0) * (lu + lv) + (de - 1.0) * (lx + ly) - (1.0 / th + 2.0) * l1pw
            + (1.0 / de - 2.0) * ls + log((1.0 + th) * w + th * (de - 1.0) * (1.0 + w)))


cdef inline double _bb6(double u, double v, double th, double de) noexcept nogil:
    cdef double zu = th * log1p(-u), zv = th * log1p(-v)
    cdef double au = -expm1(zu), av = -expm1(zv)
    cdef double lxu = log(-log1p(-exp(zu))), lxv = log(-log1p(-exp(zv)))
    cdef double ls = _logaddexp(de * lxu, de * lxv)
    cdef double w = exp(ls / de)
    cdef double e = exp(-w)
    return ((de - 1.0) * (lxu + lxv) + (th - 1.0) / th * (zu + zv) - log(au) - log(av)
            + (1.0 / th - 2.0) * _log1mexp(w) - w + (1.0 / de - 2.0) * ls
            + log(w * (th - e) + th * (de - 1.0) * -expm1(-w)))


cdef inline double _bb7(double u, double v, double th, double de) noexcept nogil:
    cdef double zu = th * log1p(-u), zv = th * log1p(-v)
    cdef double la = _log1mexp(-zu), lb = _log1mexp(-zv)
    cdef double lt = _lse_m1(-de * la, -de * lb)
    cdef double k = exp(-lt / de)
    cdef double d = -expm1(-lt / de)
    return (-(de + 1.0) * (la + lb) + (th - 1.0) / th * (zu + zv) + (1.0 / th - 2.0) * log(d)
            - (1.0 / de + 2.0) * lt + log(th * (1.0 + de) * d + (th - 1.0) * k))


cdef inline double _bb8(double u, double v, double th, double de, double c0, double pd, double leta) noexcept nogil:
    cdef double lpu = log1p(-de * u), lpv = log1p(-de * v)
    cdef double pu = exp(th * lpu), pv = exp(th * lpv)
    cdef double pu_minus_pd = pd * expm1(th * (lpu - log1p(-de))) if de < 1.0 else pu
    cdef double lq = log(pu_minus_pd - pv * expm1(th * lpu)) - leta
    return c0 + (th - 1.0) * (lpu + lpv) + (1.0 / th - 2.0) * lq + log(th - 1.0 + exp(lq))


cdef double _point(int code, double u, double v, const double* p, const double* pre) noexcept nogil:
    if code == INDEP:
        return 0.0
    elif code == GAUSS:
        return _gauss(u, v, p[0])
    elif code == STUDENT:
        return _student(u, v, p[0], p[1], pre[0])
    elif code == CLAYTON:
        return _clayton(u, v, p[0])
    elif code == GUMBEL:
        return _gumbel(u, v, p[0])
    elif code == FRANK:
        return _frank(u, v, p[0], pre[0])
    elif code == JOE:
        return _joe(u, v, p[0])
    elif code == AMH:
        return _amh(u, v, p[0])
    elif code == BB1:
        return _bb1(u, v, p[0], p[1])
    elif code == BB6:
        return _bb6(u, v, p[0], p[1])
    elif code == BB7:
        return _bb7(u, v, p[0], p[1])
    elif code == BB8:
        return _bb8(u, v, p[0], p[1], pre[0], pre[1], pre[2])
    elif code == MIX2:
        return _logaddexp(pre[0] + _gauss(u, v, p[0]), pre[1] + _gauss(u, v, p[1]))
    return NAN


cdef void _precompute(int code, const double* p, double* pre) noexcept nogil:
    cdef double nu, r2, th, de, pd
    if code == STUDENT:
        nu = p[1]
        r2 = (1.0 - p[0]) * (1.0 + p[0])
        pre[0] = lgamma(0.5 * (nu + 2.0)) + lgamma(0.5 * nu) - 2.0 * lgamma(0.5 * (nu + 1.0)) - 0.5 * log(r2)
    elif code == FRANK:
        th = p[0]
        if fabs(th) >= INDEP_EPS:
            pre[0] = log(th * -expm1(-th))
    elif code == BB8:
        th = p[0]
        de = p[1]
        pd = exp(th * log1p(-de)) if de < 1.0 else 0.0
        pre[1] = pd
        pre[2] = log(1.0 - pd)
        pre[0] = log(de) - pre[2]
    elif code == MIX2:
        pre[0] = log(p[2])
        pre[1] = log1p(-p[2])


cdef inline void _rotate(int rot, double* u, double* v) noexcept nogil:
    if rot == 90:
        u[0] = 1.0 - u[0]
    elif rot == 180:
        u[0] = 1.0 - u[0]
        v[0] = 1.0 - v[0]
    elif rot == 270:
        v[0] = 1.0 - v[0]


def logpdf(int code, int rot, params, u, v):
    """Log density at paired points ``(u[i], v[i])``."""
    cdef const double[::1] pp = np.ascontiguousarray(params, dtype=np.float64).ravel()
    cdef const double[::1] uu = np.ascontiguousarray(u, dtype=np.float64).ravel()
    cdef const double[::1] vv = np.ascontiguousarray(v, dtype=np.float64).ravel()
    if uu.shape[0] != vv.shape[0]:
        raise ValueError("u and v must have the same length")
    cdef Py_ssize_t i, n = uu.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef double pre[4]
    cdef double a, b
    cdef const double* pptr = &pp[0] if pp.shape[0] > 0 else NULL
    with nogil:
        _precompute(code, pptr, pre)
        for i in range(n):
            a = uu[i]
            b = vv[i]
            _rotate(rot, &a, &b)
            out[i] = _point(code, a, b, pptr, pre)
    return out_arr


def loglik(int code, int rot, params, u, v):
    """Sum of log densities; NaN collapses to ``-inf``."""
    cdef const double[::1] pp = np.ascontiguousarray(params, dtype=np.float64).ravel()
    cdef const double[::1] uu = np.ascontiguousarray(u, dtype=np.float64).ravel()
    cdef const double[::1] vv = np.ascontiguousarray(v, dtype=np.float64).ravel()
    if uu.shape[0] != vv.shape[0]:
        raise ValueError("u and v must have the same length")
    cdef Py_ssize_t i, n = uu.shape[0]
    cdef double pre[4]
    cdef double a, b, total = 0.0
    cdef const double* pptr = &pp[0] if pp.shape[0] > 0 else NULL
    with nogil:
        _precompute(code, pptr, pre)
        for i in range(n):
            a = uu[i]
            b = vv[i]
            _rotate(rot, &a, &b)
            total += _point(code, a, b, pptr, pre)
    if isnan(total):
        return -INFINITY
    return total
