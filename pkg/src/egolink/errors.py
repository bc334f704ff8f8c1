"""Exception types shared across the package."""


class ParseError(ValueError):
    """A malformed line in an edge-list input."""

    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class ConfigError(ValueError):
    """Invalid option, policy, or generator parameter."""


class PreconditionError(ValueError):
    """An operation was called on arguments outside its contract."""


class EmptyInputError(ValueError):
    """An operation that needs data received none."""


class EmptyResultError(RuntimeError):
    """A pipeline produced no usable cells; carries diagnostic counts."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})
