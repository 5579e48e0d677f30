"""Shared exception types."""


class ConfigError(ValueError):
    """A configuration value violates an operation's requirements."""


class DomainError(ValueError):
    """A numeric-domain violation (divergent queue, unstable recursion, ...)."""
