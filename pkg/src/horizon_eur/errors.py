"""Exception hierarchy shared by all modules."""


class HorizonEURError(Exception):
    """Base class for every error raised by this package."""


class PreconditionError(HorizonEURError, ValueError):
    """An argument violates an operation's precondition (bad dims, index sets, ...)."""


class NotPositiveSemidefiniteError(PreconditionError):
    """A density matrix has an eigenvalue below the clamping window."""


class NonIsometryError(PreconditionError):
    """A map passed as an isometry does not satisfy V^dagger V = I."""


class DomainError(PreconditionError):
    """A physical parameter lies outside its admissible range."""


class UnsupportedPairStateError(PreconditionError):
    """The transformed mode carries weight on the pair level |p>, whose expansion is not defined."""


class ConsistencyError(HorizonEURError, RuntimeError):
    """Two routes to the same quantity disagree; signals an implementation bug."""
