# ABOUTME: Exception hierarchy shared by every package in the toolkit.
# ABOUTME: The CLI maps these classes onto process exit codes.


class RandomnessAmplificationError(Exception):
    """Base class for all toolkit errors."""

    pass


class InvalidStateError(RandomnessAmplificationError):
    """Raised when an operator is not a valid density operator or not Hermitian."""

    pass


class ConstraintError(RandomnessAmplificationError):
    """Raised when MDL box constraints cannot be met."""

    pass


class DomainError(RandomnessAmplificationError, ValueError):
    """Raised when a value lies outside a function's mathematical domain."""

    pass


class ArgumentError(RandomnessAmplificationError, ValueError):
    """Raised for malformed call arguments (lengths, sizes, parity)."""

    pass


class ConfigError(RandomnessAmplificationError):
    """Raised for invalid run-config files or environment settings."""

    pass
