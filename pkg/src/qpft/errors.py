"""Exception and warning types raised across the package."""


class QpftError(Exception):
    """Base class for all library errors."""


class EmptyParams(QpftError, ValueError):
    """Parameter list has no dimensions."""


class ZeroCoupling(QpftError, ValueError):
    """Cross-coupling coefficient b is (numerically) zero on some axis."""

    def __init__(self, axis: int, value: float = 0.0):
        self.axis = axis
        self.value = value
        super().__init__(f"axis {axis}: |b|={abs(value):.3e} below 1e-12; b != 0 is required")


class DimMismatch(QpftError, ValueError):
    """Dimension counts of arguments disagree."""


class ZeroLambda(QpftError, ValueError):
    """Scaling parameter lambda must be nonzero."""


class NonPositiveLambda(QpftError, ValueError):
    """Mollifier width lambda must be positive."""


class NonFiniteField(QpftError, ValueError):
    """Field values contain NaN or Inf."""


class StepMismatch(QpftError, ValueError):
    """Grids disagree in sample spacing."""


class GridMismatch(QpftError, ValueError):
    """Grids are not sample-aligned where alignment is required."""


class DomainMismatch(QpftError, ValueError):
    """Field carries the wrong domain tag for the requested operation."""


class IncommensurateGrid(QpftError):
    """Fast path requested without Bluestein on a non-uniform-DFT axis."""


class InterpolationOverrun(QpftError):
    """Scaled-argument resampling would leave the sampled support with non-negligible mass."""


class GridCoverage(QpftError):
    """Grid too narrow to hold the mollifier mass required by the operation."""


class ZeroSignal(QpftError, ValueError):
    """Operation undefined for an identically zero field."""


class QuadratureNonConvergence(QpftError):
    """Adaptive quadrature failed to meet the requested tolerance."""

    def __init__(self, message: str, estimate: complex = 0.0, error: float = float("inf")):
        self.estimate = estimate
        self.error = error
        super().__init__(message)


NonConvergence = QuadratureNonConvergence


class EdgeMass(QpftError):
    """Signal carries non-negligible energy at the grid boundary."""


class ResolutionError(QpftError):
    """Signal is not resolved well enough for spectral differentiation."""


class NoSpectralGap(QpftError):
    """Transform support reaches the origin; growth-rate analysis diverges.

    The ``norms`` attribute carries the iterate norms computed before the
    failure was declared, for divergence diagnostics.
    """

    def __init__(self, message: str, norms=None, gamma_measured: float = 0.0):
        self.norms = list(norms) if norms is not None else []
        self.gamma_measured = gamma_measured
        super().__init__(message)


class SingularSymbol(QpftError):
    """Spectral symbol vanishes somewhere and no regularization was given."""


class EmptyPassband(QpftError, ValueError):
    """Requested passband does not intersect the frequency grid."""


class UnsupportedKind(QpftError, ValueError):
    """Convolution kind has no pure multiplicative spectral symbol."""


class NegativeCouplingWarning(UserWarning):
    """b < 0 on some axis; square roots use the principal branch."""


class EdgeEnergyWarning(UserWarning):
    """More than 1e-10 of the signal energy sits in the outer 5% shell."""


class TailDiscardWarning(UserWarning):
    """Cropping a convolution output discarded non-negligible energy."""
