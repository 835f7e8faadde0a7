"""Exception hierarchy shared by all spinprobe modules."""


class SpinprobeError(Exception):
    """Base class for every error raised by this package."""


class ContractViolationError(SpinprobeError):
    """An input failed a structural precondition (shape, hermiticity, staleness)."""


class DomainError(SpinprobeError):
    """A parameter lies outside the physically meaningful domain."""


class UndefinedQuantityError(DomainError):
    """A derived quantity has no value at this operating point (e.g. COP at zero work flow)."""


class NumericalFailureError(SpinprobeError):
    """An iterative solve failed to converge or produced an unusable result."""


class RankDeficiencyError(NumericalFailureError):
    """Least-squares system is rank deficient; carries the detected rank."""

    def __init__(self, message, rank):
        super().__init__(message)
        self.rank = rank


class NonErgodicError(NumericalFailureError):
    """Generator has a degenerate kernel; carries the numerical null dimension."""

    def __init__(self, message, null_dim):
        super().__init__(message)
        self.null_dim = null_dim


class PositivityError(NumericalFailureError):
    """A density matrix came out with a negative eigenvalue beyond tolerance."""
