"""Exception types shared across stoplat modules."""


class SpaceMismatchError(ValueError):
    """Raised when values built over different sample spaces are combined."""


class PreconditionError(ValueError):
    """Raised when an operation's stated precondition fails; the message
    names the offending outcome or pair."""


class CapExceededError(RuntimeError):
    """Raised when a request exceeds the desk-scale caps that keep the
    exhaustive oracles fast."""
