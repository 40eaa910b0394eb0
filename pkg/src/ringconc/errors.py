"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematically meaningful range."""


class UnsupportedCaseError(DomainError):
    """The inputs are valid but the requested method does not cover them."""


class NumericalError(RuntimeError):
    """An iterative or root-finding routine failed to meet its tolerance."""

    def __init__(self, message: str, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics
