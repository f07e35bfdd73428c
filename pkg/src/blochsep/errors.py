"""Exception types shared across the package."""


class BlochSepError(Exception):
    """Base class for all blochsep errors."""


class DomainError(BlochSepError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ShapeError(BlochSepError, ValueError):
    """An array, vector or index set has incompatible dimensions."""


class ResourceError(BlochSepError, RuntimeError):
    """A configurable resource cap would be exceeded."""
