"""Rank-based marginal estimation: empirical CDFs scaled by 1/(n+1).

Every pseudo-observation is ``#{j : X_j <= X_i} / (n + 1)``; ties all receive
the maximal count, which is the indicator definition taken literally.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from copreg.errors import SizeError


@dataclass(frozen=True)
class PseudoSample:
    """Pseudo-observations of a response and ``d`` predictors.

    Attributes
    ----------
    y_raw : ndarray, shape (n,)
        Raw responses ``Y_i``.
    u_y : ndarray, shape (n,)
        ``F_Y(Y_i)`` estimated by the scaled empirical CDF.
    u_x : ndarray, shape (n, d)
        ``F_j(X_ij)`` for each predictor column.
    x_raw : ndarray, shape (n, d)
        Raw predictors, kept so that new query points can be transformed.
    """

    y_raw: np.ndarray
    u_y: np.ndarray
    u_x: np.ndarray
    x_raw: np.ndarray

    @property
    def n(self) -> int:
        return self.y_raw.shape[0]

    @property
    def d(self) -> int:
        return self.u_x.shape[1]

    def columns(self) -> np.ndarray:
        """Pseudo-observations as an ``(n, d + 1)`` array, response first."""
        return np.column_stack([self.u_y, self.u_x])


def _rank_max(col: np.ndarray) -> np.ndarray:
    s = np.sort(col)
    return np.searchsorted(s, col, side="right")


def ecdf_transform(data) -> PseudoSample:
    """Transform an ``(n, d + 1)`` data matrix (response in column 0)."""
    data = np.asarray(data, dtype=float)
    if data.ndim != 2 or data.shape[1] < 2:
        raise SizeError("data must be an (n, d + 1) matrix with at least one predictor")
    n = data.shape[0]
    if n < 2:
        raise SizeError(f"need at least 2 observations, got {n}")
    if not np.all(np.isfinite(data)):
        raise SizeError("data contains non-finite values")
    u = np.column_stack([_rank_max(data[:, j]) for j in range(data.shape[1])]) / (n + 1.0)
    return PseudoSample(
        y_raw=data[:, 0].copy(),
        u_y=u[:, 0].copy(),
        u_x=u[:, 1:].copy(),
        x_raw=data[:, 1:].copy(),
    )


def ecdf_eval(column, query):
    """``#{values <= query} / (n + 1)``; vectorized over ``query``."""
    column = np.sort(np.asarray(column, dtype=float))
    q = np.asarray(query, dtype=float)
    out = np.searchsorted(column, q, side="right") / (column.shape[0] + 1.0)
    return float(out) if q.ndim == 0 else out


def empirical_quantile(column, p):
    """Smallest sample value ``x`` with ``ecdf_eval(column, x) >= p``.

    Saturates at the sample maximum for ``p > n/(n+1)``.
    """
    s = np.sort(np.asarray(column, dtype=float))
    if s.size == 0:
        raise SizeError("empty column")
    levels = np.searchsorted(s, s, side="right") / (s.size + 1.0)
    p_arr = np.asarray(p, dtype=float)
    idx = np.minimum(np.searchsorted(levels, p_arr, side="left"), s.size - 1)
    out = s[idx]
    return float(out) if p_arr.ndim == 0 else out
