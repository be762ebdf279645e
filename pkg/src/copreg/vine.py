"""Three-variable pair-copula construction (C-vine with one center).

Variables are indexed 0 = Y, 1 = X1, 2 = X2. Tree 1 joins the center ``c``
to both leaves ``a < b``; tree 2 holds the copula of the leaves conditional on
the center:

    c(w0, w1, w2) = c_ca(w_c, w_a) * c_cb(w_c, w_b)
                    * c_ab|c(h(w_a | w_c), h(w_b | w_c))

Tree-1 copulas take the center as their first argument, so the conditional
CDFs are ``h_function(pair, w_leaf, w_center)``. The conditional copula does
not vary with the conditioning value (simplifying assumption).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from copreg import kernels
from copreg.copula import INDEPENDENCE, CopulaSpec, h_function
from copreg.errors import SizeError
from copreg.fitting import (
    FitResult,
    as_candidate,
    default_candidates,
    empirical_tau,
    filter_by_tau_sign,
    select_by_aic,
)
from copreg.margins import PseudoSample

VARIABLES = ("Y", "X1", "X2")

#: conditional pseudo-observations are kept this far from 0 and 1
H_CLIP = 1e-12


@dataclass(frozen=True)
class VineModel:
    """Fitted three-variable vine.

    Attributes
    ----------
    center : int
        Index of the tree-1 center variable (0 = Y, 1 = X1, 2 = X2).
    pair1, pair2 : CopulaSpec
        Tree-1 copulas of ``(center, leaves[0])`` and ``(center, leaves[1])``.
    pair_cond : CopulaSpec
        Tree-2 copula of ``(leaves[0], leaves[1])`` given the center.
    fit_meta : tuple of FitResult
        Fit outcomes for ``pair1``, ``pair2``, ``pair_cond`` (empty when built
        by hand).
    """

    center: int
    pair1: CopulaSpec
    pair2: CopulaSpec
    pair_cond: CopulaSpec
    fit_meta: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.center not in (0, 1, 2):
            raise ValueError(f"center must be 0, 1 or 2, got {self.center}")

    @property
    def leaves(self) -> tuple[int, int]:
        a, b = (i for i in range(3) if i != self.center)
        return a, b

    @property
    def order(self) -> tuple[str, str, str]:
        """Center first, then the two leaves."""
        a, b = self.leaves
        return VARIABLES[self.center], VARIABLES[a], VARIABLES[b]

    def edge_labels(self) -> tuple[str, str, str]:
        c, a, b = self.order
        return f"{c},{a}", f"{c},{b}", f"{a},{b}|{c}"

    def to_text(self) -> str:
        """Center line followed by one line per pair: edge, family, rotation, params."""
        lines = [f"center {VARIABLES[self.center]}"]
        for label, spec in zip(self.edge_labels(), (self.pair1, self.pair2, self.pair_cond)):
            params = ";".join(repr(p) for p in spec.params)
            lines.append(f"{label} {spec.family.value} {spec.rotation} {params}".rstrip())
        return "\n".join(lines) + "\n"


def _logpdf(spec: CopulaSpec, u, v):
    return kernels.logpdf(spec.family, spec.rotation, spec.params, u, v)


def _cond(spec: CopulaSpec, w_leaf, w_center):
    h = h_function(spec, w_leaf, w_center)
    return np.clip(h, H_CLIP, 1.0 - H_CLIP)


def vine_log_density(model: VineModel, w0, w1, w2) -> np.ndarray:
    """Vectorized log of :func:`vine_density`."""
    w = [np.atleast_1d(np.asarray(x, dtype=float)) for x in (w0, w1, w2)]
    w = list(np.broadcast_arrays(*w))
    shape = w[0].shape
    w = [x.ravel() for x in w]
    c = model.center
    a, b = model.leaves
    out = _logpdf(model.pair1, w[c], w[a]) + _logpdf(model.pair2, w[c], w[b])
    if model.pair_cond.family.value != "indep":
        za = _cond(model.pair1, w[a], w[c])
        zb = _cond(model.pair2, w[b], w[c])
        out = out + _logpdf(model.pair_cond, za, zb)
    return out.reshape(shape)


def vine_density(model: VineModel, w0, w1, w2):
    """Joint copula density of ``(Y, X1, X2)`` at pseudo-observations ``(w0, w1, w2)``."""
    scalar = all(np.ndim(x) == 0 for x in (w0, w1, w2))
    out = np.exp(vine_log_density(model, w0, w1, w2))
    return float(out.ravel()[0]) if scalar else out


def joint_density(model: VineModel):
    """``(w0, w1, w2) -> density`` callable for the two-predictor estimator."""

    def f(w0, w1, w2):
        return np.exp(vine_log_density(model, w0, w1, w2))

    return f


def center_from_taus(tau_y1: float, tau_y2: float, tau_12: float) -> int:
    """Center of the maximum spanning tree under weights ``|tau|``.

    The tree centered at Y keeps edges (Y,X1) and (Y,X2), the tree at X1 keeps
    (Y,X1) and (X1,X2), and the tree at X2 keeps (Y,X2) and (X1,X2). Ties go
    to the earliest variable in the order Y, X1, X2.
    """
    t01, t02, t12 = abs(tau_y1), abs(tau_y2), abs(tau_12)
    weights = (t01 + t02, t01 + t12, t02 + t12)
    return int(np.argmax(weights))


def tau_matrix(pseudo: PseudoSample) -> np.ndarray:
    cols = pseudo.columns()
    t = np.eye(3)
    for i, j in ((0, 1), (0, 2), (1, 2)):
        t[i, j] = t[j, i] = empirical_tau(cols[:, i], cols[:, j])
    return t


def select_structure(pseudo: PseudoSample) -> int:
    """Tree-1 center chosen by the maximum ``|tau|`` spanning tree."""
    if pseudo.d != 2:
        raise SizeError(f"vines here have exactly two predictors, got {pseudo.d}")
    if pseudo.n < 10:
        raise SizeError(f"select_structure needs at least 10 observations, got {pseudo.n}")
    t = tau_matrix(pseudo)
    return center_from_taus(t[0, 1], t[0, 2], t[1, 2])


def vine_candidates() -> list:
    """Default pair-copula candidates: the one-predictor list without AMH."""
    return default_candidates(include_amh=False)


def _select(cands, pairs, sign_filter: bool, workers) -> FitResult:
    if sign_filter:
        kept = filter_by_tau_sign(cands, empirical_tau(pairs[:, 0], pairs[:, 1]))
        cands = kept or cands
    return select_by_aic(cands, pairs, workers=workers)


def conditional_pseudo_obs(pair1: CopulaSpec, pair2: CopulaSpec, pseudo: PseudoSample, center: int = 1):
    """``(h(w_a | w_c; pair1), h(w_b | w_c; pair2))`` for every observation.

    Returns an ``(n, 2)`` array. The default center is X1, which gives the
    pair ``(F_{Y|X1}, F_{X2|X1})``.
    """
    cols = pseudo.columns()
    a, b = (i for i in range(3) if i != center)
    return np.column_stack(
        [_cond(pair1, cols[:, a], cols[:, center]), _cond(pair2, cols[:, b], cols[:, center])]
    )


def fit_vine(
    pseudo: PseudoSample,
    candidates: Iterable | None = None,
    *,
    sign_filter: bool = True,
    workers: int | None = None,
    center: int | None = None,
) -> VineModel:
    """Sequential AIC fit of structure and pair copulas.

    Parameters
    ----------
    pseudo : PseudoSample
        Response plus two predictors.
    candidates : iterable, optional
        Families with rotations; defaults to :func:`vine_candidates`.
    sign_filter : bool
        Drop rotations whose dependence sign disagrees with the empirical
        Kendall tau of the pair before the AIC comparison.
    workers : int, optional
        Threads for candidate fits; the selection does not depend on it.
    center : int, optional
        Force the tree-1 center instead of selecting it.
    """
    cands = [as_candidate(c) for c in (vine_candidates() if candidates is None else candidates)]
    if not cands:
        raise ValueError("empty candidate list")
    c = select_structure(pseudo) if center is None else int(center)
    a, b = (i for i in range(3) if i != c)
    cols = pseudo.columns()
    f1 = _select(cands, cols[:, [c, a]], sign_filter, workers)
    f2 = _select(cands, cols[:, [c, b]], sign_filter, workers)
    z = conditional_pseudo_obs(f1.spec, f2.spec, pseudo, center=c)
    f3 = _select(cands, z, sign_filter, workers)
    return VineModel(c, f1.spec, f2.spec, f3.spec, (f1, f2, f3))


def single_family_vine(pseudo: PseudoSample, family, *, center: int | None = None) -> VineModel:
    """Vine whose three pairs all come from one family and rotation.

    Serves as the trivariate parametric copula of a single family; for the
    Gaussian family it coincides with the trivariate Gaussian copula.
    """
    cand = as_candidate(family)
    return fit_vine(pseudo, [cand], sign_filter=False, center=center)


def independence_vine(center: int = 0) -> VineModel:
    return VineModel(center, INDEPENDENCE, INDEPENDENCE, INDEPENDENCE)


def mc_normalization(
    model: VineModel, points: int = 100_000, seed: int = 0, periodize: bool = True
) -> float:
    """Quasi-Monte-Carlo estimate of the integral of the vine density over (0,1)^3.

    Tail-dependent pairs sharing the center make the density singular at
    corners of the cube: integrable, but with infinite variance under plain
    sampling. With ``periodize`` each axis is mapped through
    ``w = 3t^2 - 2t^3`` (Jacobian ``6t(1 - t)``), which leaves the integral
    unchanged and damps the corner contributions.
    """
    from scipy.stats import qmc

    t = qmc.Halton(d=3, scramble=True, seed=seed).random(points)
    if periodize:
        w = t * t * (3.0 - 2.0 * t)
        jac = np.prod(6.0 * t * (1.0 - t), axis=1)
    else:
        w, jac = t, 1.0
    w = np.clip(w, H_CLIP, 1.0 - H_CLIP)
    return float(np.mean(vine_density(model, w[:, 0], w[:, 1], w[:, 2]) * jac))
