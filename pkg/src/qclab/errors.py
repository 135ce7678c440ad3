"""Exception types shared across the package."""


class InputError(ValueError):
    """A caller-supplied value violates a documented precondition."""


class ParseError(ValueError):
    """Malformed text input; carries the 1-based line number when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ConvergenceError(RuntimeError):
    """Iterative procedure failed to converge; may carry the best attempt."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class RetryError(RuntimeError):
    """Bounded resampling loop exhausted its retry budget."""
