"""Exception types shared across the package."""


class HeckeftError(Exception):
    """Base class for all package errors."""


class BudgetExceededError(HeckeftError):
    """An enumeration or truncation budget was exceeded.

    ``attempted`` records the size bound the operation would have needed.
    """

    def __init__(self, message, attempted=None):
        super().__init__(message)
        self.attempted = attempted


class PrecisionError(HeckeftError):
    """A series operation ran out of representable terms."""


class ZeroInversionError(HeckeftError):
    """Inversion of an (apparent) zero series or a zero ring element."""


class NonConvergentProductError(HeckeftError):
    """A factor of an infinite product violated the drift certificate."""


class NotSublatticeError(HeckeftError):
    """Row span containment failed where a sublattice was required."""


class SingularMatrixError(HeckeftError):
    """A lattice operation received a matrix with zero determinant."""


class OracleDisagreementError(HeckeftError):
    """Two independent computations of the same quantity disagree.

    This is fatal: it indicates a convergence-bound or algorithm bug,
    never a recoverable condition.
    """
