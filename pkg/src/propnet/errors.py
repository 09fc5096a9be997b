"""Exception types shared across the package."""


class GraphParseError(ValueError):
    def __init__(self, message, lineno=None):
        super().__init__(message)
        self.lineno = lineno


class GraphClassError(ValueError):
    """Input graph is outside the class an algorithm requires."""


class ParameterError(ValueError):
    pass


class ConvergenceError(RuntimeError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DivergenceError(ArithmeticError):
    """Walk sums are unbounded for the requested decay factor."""


class SizeCapError(RuntimeError):
    """Refusal: an exhaustive computation exceeds its configured size cap."""
