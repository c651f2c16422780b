"""Exception types, grouped by how the command line maps them to exit codes."""


class PdsqError(Exception):
    """Base class for package errors."""


class AnalysisError(PdsqError):
    """Numerical analysis failed (non-convergence, invalid model state)."""


class QuadratureError(AnalysisError):
    """Adaptive quadrature did not reach the requested tolerance."""


class ConvergenceError(AnalysisError):
    """Iterative solver exhausted its iteration budget."""


class DataFormatError(PdsqError):
    """A dataset or config file is malformed or truncated."""
