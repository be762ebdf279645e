"""Parametric bivariate copulas: densities, CDFs, h-functions, sampling."""

from copreg.copula.core import (
    INDEPENDENCE,
    ROTATIONS,
    Candidate,
    CopulaSpec,
    cdf,
    density,
    format_tag,
    h_function,
    h_inverse,
    kendall_tau,
    log_density,
    log_likelihood,
    param_from_tau,
    param_space,
    parse_family,
    sample,
)
from copreg.copula.families import FAMILIES, Family, ParamSpace

__all__ = [
    "FAMILIES",
    "INDEPENDENCE",
    "ROTATIONS",
    "Candidate",
    "CopulaSpec",
    "Family",
    "ParamSpace",
    "cdf",
    "density",
    "format_tag",
    "h_function",
    "h_inverse",
    "kendall_tau",
    "log_density",
    "log_likelihood",
    "param_from_tau",
    "param_space",
    "parse_family",
    "sample",
]
