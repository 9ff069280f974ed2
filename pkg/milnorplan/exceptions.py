from typing import Optional, Tuple


class MilnorError(Exception):
    """Base exception class for planner errors."""
    def __init__(self, message: str, exit_code: int = 1):
        self.message = message
        self.exit_code = exit_code
        super().__init__(self.message)


class ConfigurationError(MilnorError):
    """Raised when a configuration document or override is invalid."""
    def __init__(self, message: str):
        super().__init__(message, exit_code=2)


class DimensionMismatchError(MilnorError):
    """Raised when a point does not have the dimension an operation expects."""
    def __init__(self, expected: int, actual: int, what: str = "point"):
        super().__init__(f"Expected a {what} of dimension {expected}, got {actual}.", exit_code=2)


class GermDefinitionError(MilnorError):
    """Raised when a polynomial map, germ or arrangement violates its invariants."""
    def __init__(self, message: str):
        super().__init__(message, exit_code=2)


class UnknownGermError(MilnorError):
    """Raised when a germ name is not in the catalog."""
    def __init__(self, name: str):
        super().__init__(f"Germ '{name}' is not in the catalog.", exit_code=2)


class SphereDomainError(MilnorError):
    """Raised when sphere inputs fall outside the domain of a field, chart or planner."""
    def __init__(self, message: str):
        super().__init__(message, exit_code=2)


class PathMismatchError(MilnorError):
    """Raised when concatenated paths do not meet at the junction."""
    def __init__(self, gap: float):
        super().__init__(f"Cannot concatenate paths: junction gap {gap:.3e} exceeds tolerance.")


class RetractionError(MilnorError):
    """Raised when Newton retraction onto a level set fails."""
    def __init__(self, reason: str, message: str):
        self.reason = reason
        super().__init__(message)


class SamplingError(MilnorError):
    """Raised when fiber sampling cannot produce the requested number of points."""
    def __init__(self, message: str):
        super().__init__(message)


class TransportError(MilnorError):
    """Raised when horizontal lifting fails; carries the offending parameter interval."""
    def __init__(self, message: str, interval: Optional[Tuple[float, float]] = None):
        self.interval = interval
        if interval is not None:
            message = f"{message} (t in [{interval[0]:.6f}, {interval[1]:.6f}])"
        super().__init__(message)


class FiberPathError(MilnorError):
    """Raised when two fiber points cannot be joined inside the fiber."""
    def __init__(self, message: str):
        super().__init__(message)


class SectionError(MilnorError):
    """Raised when a cross-section cannot be constructed or is unavailable."""
    def __init__(self, message: str):
        super().__init__(message)


class TraceExportError(MilnorError):
    """Raised when a trace cannot be written or read back."""
    def __init__(self, message: str):
        super().__init__(message, exit_code=3)
