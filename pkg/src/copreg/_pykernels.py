"""Pure numpy implementations of the hot kernels (fallback backend)."""

import numpy as np

from copreg.copula.families import FAMILIES, Family

_BY_CODE = list(Family)


def logpdf(code, rot, params, u, v):
    """Log density of family ``code`` with rotation ``rot`` at paired points."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if rot == 90:
        u = 1.0 - u
    elif rot == 180:
        u, v = 1.0 - u, 1.0 - v
    elif rot == 270:
        v = 1.0 - v
    fam = FAMILIES[_BY_CODE[code]]
    with np.errstate(all="ignore"):
        out = fam.logpdf(u, v, tuple(params))
    return np.array(np.broadcast_to(out, np.broadcast(u, v).shape), dtype=float)


def loglik(code, rot, params, u, v):
    """Sum of :func:`logpdf`; NaN collapses to ``-inf``."""
    total = float(np.sum(logpdf(code, rot, params, u, v)))
    return -np.inf if np.isnan(total) else total
