"""Exception types shared across the package."""


class LoopInputError(ValueError):
    """Malformed input: ragged table, out-of-range entry, bad file, bad parameters."""


class PreconditionError(ValueError):
    """An operation was called on an input outside its domain (e.g. even order)."""


class ClosureIncomplete(RuntimeError):
    """A permutation-group closure hit its size cap before finishing."""


class ConsistencyError(RuntimeError):
    """An internal cross-check failed; indicates an upstream precondition violation."""
