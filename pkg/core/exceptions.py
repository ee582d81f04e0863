"""
Error types for UnderlaySim

Every error carries the process exit code the command line maps it to.
"""


class UnderlayError(Exception):
    """Base error with a human-readable detail and an exit code"""

    exit_code = 3

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class ConfigurationError(UnderlayError):
    """Invalid configuration or violated precondition"""

    exit_code = 2


class DivergentConstant(ConfigurationError):
    """A requested theory constant is undefined (divergent integral)"""


class NotPositiveDefinite(UnderlayError):
    """Cholesky pivot was not positive"""

    exit_code = 3


class InvariantBreach(UnderlayError):
    """An interference constraint was violated during simulation"""

    exit_code = 3


class ValidationFailure(UnderlayError):
    """A validation check did not pass"""

    exit_code = 1
