"""Copula-based regression under (mis)specified dependence models."""

__version__ = "0.1.0"
