"""Exception types raised across the package."""


class CopregError(Exception):
    """Base class for package errors."""


class ParameterDomainError(CopregError, ValueError):
    """Copula parameters outside the family's admissible box."""


class DomainError(CopregError, ValueError):
    """Arguments outside the unit interval (or other input domain)."""


class SizeError(CopregError, ValueError):
    """Too few observations for the requested operation."""


class ConfigError(CopregError, ValueError):
    """Invalid configuration: unknown model id, family name, malformed input file."""


class NumericError(CopregError, ArithmeticError):
    """A numerical routine failed to converge or produced non-finite output."""


class StudyAbortedError(NumericError):
    """A Monte-Carlo study lost too many replications to failures."""
