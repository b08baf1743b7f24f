"""Exception types shared across the package."""


class ConnFairError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(ConnFairError):
    """An instance, allocation, or input file violates a structural invariant."""


class PreconditionError(ConnFairError):
    """An algorithm was called on an instance outside its supported class."""


class BudgetExceededError(ConnFairError):
    """An exhaustive enumeration would exceed the configured size budget."""


class InternalCheckError(ConnFairError):
    """A runtime assertion that provably must hold failed; indicates a bug."""
