"""Exception types shared across the package."""


class EgkError(Exception):
    """Base class for all package errors."""


class DomainError(EgkError):
    """Input outside the supported domain of an operation."""


class ResourceError(EgkError):
    """Requested problem size exceeds the supported envelope."""


class NonConvergenceError(EgkError):
    """An iterative scheme failed to reach its tolerance."""

    def __init__(self, message: str, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics
