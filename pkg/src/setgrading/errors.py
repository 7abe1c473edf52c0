"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or out-of-range input (bad file, wrong length, ...)."""


class PreconditionError(ValueError):
    """Well-formed input that violates an operation's precondition."""
