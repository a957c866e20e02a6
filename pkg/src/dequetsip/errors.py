"""Exception types shared across the package."""


class OracleScaleError(ValueError):
    """A brute-force oracle was asked for an input beyond its supported size."""


class ResourceLimitError(RuntimeError):
    """A computation would exceed the configured memory or size limits."""


class VerificationError(AssertionError):
    """An identity or integrality check failed; ``index`` is the first bad coefficient."""

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index
