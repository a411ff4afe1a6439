"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ValidationError(ValueError):
    """A record violates a physical invariant (e.g. fraction outside (0,1))."""


class ParseError(ValueError):
    """An input document does not match the experiment schema."""


class ConfigurationError(ValueError):
    """A request needs data the record does not carry (e.g. missing separation)."""


class ConvergenceError(RuntimeError):
    """An integrator exhausted its evaluation budget.

    The best estimate obtained so far is attached as ``result``.
    """

    def __init__(self, message, result):
        super().__init__(message)
        self.result = result
