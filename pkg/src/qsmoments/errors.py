"""Exception types shared across the engines."""


class ContractViolation(ValueError):
    """An operation was called with arguments outside its contract."""


class ResourceLimitError(RuntimeError):
    """The requested size exceeds a configured computation cap."""


class UnsupportedError(ValueError):
    """The requested combination of options has no implementation."""
