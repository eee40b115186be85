"""Exception types shared across modules."""


class PreconditionError(ValueError):
    """Input violates a documented precondition."""


class UnsupportedRegimeError(PreconditionError):
    """Input lies in a regime the library deliberately does not handle."""


class NotInvertibleError(PreconditionError):
    """The pair lies on the locus where the inverse map is undefined."""


class InvalidConnectionError(ValueError):
    """Connection data fails a structural requirement."""


class InternalConsistencyError(RuntimeError):
    """A step that must succeed by theory did not; indicates a bug."""
