"""Exception types raised by the library."""


class ContractionNormError(Exception):
    """Base class for every error raised by this package."""


class DimensionMismatch(ContractionNormError, ValueError):
    pass


class NonFiniteInput(ContractionNormError, ValueError):
    pass


class InvalidEpsilon(ContractionNormError, ValueError):
    pass


class SingularMatrix(ContractionNormError, ValueError):
    pass


class NotTriangular(ContractionNormError, ValueError):
    pass


class ScalingOverflow(ContractionNormError, OverflowError):
    """``t**n`` (or ``t**-n``) leaves the double range."""

    def __init__(self, t, n):
        super().__init__(f"diag(t, ..., t^n) overflows for t={t!r}, n={n}")
        self.t = t
        self.n = n


class GelfandOverflow(ContractionNormError, OverflowError):
    pass


class QRNoConvergence(ContractionNormError, RuntimeError):
    """Shifted QR did not deflate within the sweep budget.

    ``partial`` holds the :class:`~contraction_norm.schur.SchurDecomposition`
    reached so far (``Delta`` is not triangular in the unconverged window).
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ConditioningExceeded(ContractionNormError, ValueError):
    """The scaling needed for the requested epsilon is too ill-conditioned."""

    def __init__(self, t, kappa, max_kappa):
        super().__init__(
            f"selected t={t:.6g} gives kappa_2(P)={kappa:.6g} > cap {max_kappa:.3g}"
        )
        self.t = t
        self.kappa = kappa
        self.max_kappa = max_kappa


class PerronNoConvergence(ContractionNormError, RuntimeError):
    pass


class NoSpectralGap(ContractionNormError, ValueError):
    pass


class NotStronglyConnected(ContractionNormError, ValueError):
    pass


class MatrixSyntaxError(ContractionNormError, ValueError):
    def __init__(self, message, line, column):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
