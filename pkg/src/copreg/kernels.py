"""Hot-loop kernels with backend selection at import time.

The compiled Cython extension ``copreg._ckernels`` is used when it was built;
otherwise the numpy implementation in ``copreg._pykernels`` takes over. Set
``COPREG_PURE_PYTHON=1`` to force the fallback.

The compiled loop avoids numpy's per-call overhead and wins clearly on small
samples, while numpy's vectorized transcendental functions win on large ones.
With the compiled backend available, inputs with at least
``COMPILED_MAX_SIZE`` points are therefore routed to numpy
(see ``benchmarks/bench_kernels.py``). The t family is the exception: its
compiled quantile loop wins at every size.
"""

import os

import numpy as np

from copreg.copula.families import FAMILY_CODES, Family

from copreg import _pykernels

try:
    if os.environ.get("COPREG_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure-python backend requested")
    from copreg import _ckernels

    BACKEND = "cython"
except ImportError:
    _ckernels = None
    BACKEND = "python"

#: Sample size from which numpy is faster than the compiled loop.
COMPILED_MAX_SIZE = 320

_ALWAYS_COMPILED = frozenset({Family.STUDENT_T})


def _impl(family, n: int):
    if _ckernels is not None and (n < COMPILED_MAX_SIZE or family in _ALWAYS_COMPILED):
        return _ckernels
    return _pykernels


def logpdf(family, rotation, params, u, v) -> np.ndarray:
    """Log density at the paired points ``(u[i], v[i])`` (flattened)."""
    u = np.asarray(u, dtype=float)
    return _impl(family, u.size).logpdf(
        FAMILY_CODES[family], int(rotation), np.asarray(params, dtype=float), u, v
    )


def loglik(family, rotation, params, u, v) -> float:
    """Copula log-likelihood ``sum_i log c(u[i], v[i])``."""
    u = np.asarray(u, dtype=float)
    return float(
        _impl(family, u.size).loglik(
            FAMILY_CODES[family], int(rotation), np.asarray(params, dtype=float), u, v
        )
    )
