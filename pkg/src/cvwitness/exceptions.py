"""Exception types shared across the package."""


class CvWitnessError(Exception):
    """Base class for all package errors."""


class DimensionMismatchError(CvWitnessError):
    """Matrix or vector dimensions are inconsistent."""


class PatternMismatchError(CvWitnessError):
    """A covariance matrix cannot be brought to the requested family."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class SingularSumError(CvWitnessError):
    """det(gamma_1 + gamma_2) vanishes; overlap is undefined."""


class ConstraintViolatedError(CvWitnessError):
    """Werner-Wolf family parameters violate ad - bc > 0 or ce - a > 0."""


class DegenerateLimitError(CvWitnessError):
    """Detector is outside the large-M3 regime (M3' <= 1)."""


class NonPositiveDeterminantError(CvWitnessError):
    """det(gamma_M + gamma_A (+) gamma_B) is non-positive on the search domain."""


class NotEntangledError(CvWitnessError):
    """A matched witness was requested for a state with ell >= 1."""


class OptimizerStalledError(CvWitnessError):
    """Min-max optimization exceeded its iteration budget."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class CutoffTooSmallError(CvWitnessError):
    """Fock truncation leaves too much tail mass for the requested accuracy."""


class DegeneratePreparationError(CvWitnessError):
    """Photon addition/subtraction annihilates the kernel state."""


class OrderTooHighError(CvWitnessError):
    """Total ladder-operator order exceeds the supported maximum."""


class NonZeroMeanError(CvWitnessError):
    """Input state carries nonzero first moments, which are not supported."""
