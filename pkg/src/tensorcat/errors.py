"""Exception types shared across the package."""


class TensorcatError(Exception):
    """Base class for all errors raised by this package."""


class CapExceeded(TensorcatError):
    """A size cap (group order, generator count, ...) would be exceeded."""

    def __init__(self, what, value, cap):
        self.what = what
        self.value = value
        self.cap = cap
        super().__init__(f"{what} = {value} exceeds cap {cap}")


class LimitExceeded(TensorcatError):
    """Coset enumeration hit its coset, memory or time budget."""


class NotNormal(TensorcatError):
    pass


class NotAbelian(TensorcatError):
    pass


class InvalidAction(TensorcatError):
    """An action table is not an action by automorphisms."""

    def __init__(self, message, violations=()):
        self.violations = list(violations)
        super().__init__(message)


class NotACocycle(TensorcatError):
    pass


class InvalidSpec(TensorcatError):
    pass


class ParseError(TensorcatError):
    """Malformed text input; carries a 1-based line and column."""

    def __init__(self, message, line=1, column=1):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class KappaNotWellDefined(TensorcatError):
    pass


class ActionNotWellDefined(TensorcatError):
    pass


class RewriteFailed(TensorcatError):
    pass


class UnknownSuite(TensorcatError):
    pass
