"""Exception and warning types raised across the package."""


class MalevichError(ValueError):
    """Base class for every error raised by this package."""


class NotHermitian(MalevichError):
    pass


class NoConvergence(MalevichError, ArithmeticError):
    pass


class NotPSD(MalevichError):
    pass


class WrongDim(MalevichError):
    pass


class NotDensity(MalevichError):
    """Input is not a Hermitian, unit-trace, positive semidefinite matrix."""


class OutOfRange(MalevichError):
    """A probability lies outside [0, 1]."""


class NotPositive(MalevichError):
    """A probability triple lies outside the quantum ball."""


class NotPositiveWarning(UserWarning):
    """Issued instead of :class:`NotPositive` where non-quantum triples are allowed."""


class BadDiagonal(MalevichError):
    pass


class InconsistentTriples(MalevichError):
    """Component qubits violate the linkage p3 of D = 1 - p3 of B."""


class OutOfSimplex(MalevichError):
    pass


class UnsupportedFamily(MalevichError):
    pass


class NotUnitNorm(MalevichError):
    pass


class InfeasibleStart(MalevichError):
    pass


class NoProgress(MalevichError, ArithmeticError):
    """The simplex kept collapsing; ``result`` holds the best feasible point reached."""

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result
