"""Exception hierarchy.

Every error raised by the package derives from :class:`XlagError` and carries a
short machine-readable ``reason`` tag that the command line front end copies
into its JSON output.
"""


class XlagError(Exception):
    reason = "error"

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details


class InvalidParams(XlagError, ValueError):
    reason = "invalid_params"


class UnsupportedFamily(InvalidParams):
    reason = "unsupported_family"


class InvalidDomain(XlagError, ValueError):
    reason = "invalid_domain"


class DegenerateNormalization(XlagError, ArithmeticError):
    reason = "degenerate_normalization"


class GridTooShort(XlagError):
    reason = "grid_too_short"


class QuadratureDivergence(XlagError, ArithmeticError):
    reason = "quadrature_divergence"


class NoConvergence(XlagError, ArithmeticError):
    """Iterative solver hit its cap; ``best`` holds the last iterate."""

    reason = "no_convergence"

    def __init__(self, message, best=None, **details):
        super().__init__(message, **details)
        self.best = best
