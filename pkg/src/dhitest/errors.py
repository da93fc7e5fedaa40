"""Exception types shared across the package."""


class InvalidDistributionError(ValueError):
    """A probability array violates the joint-pmf contract."""


class ResourceLimitError(RuntimeError):
    """An exact computation was requested above the configured order bound."""


class InvalidConfigError(ValueError):
    """A run configuration is internally inconsistent or out of range."""
