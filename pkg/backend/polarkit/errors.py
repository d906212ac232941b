class PolarkitError(Exception):
    """Base class for all toolkit errors."""


class DomainError(PolarkitError, ValueError):
    """An argument lies outside the domain of the operation."""


class SearchRefusedError(PolarkitError, RuntimeError):
    """An exhaustive search was declined because the candidate space is too large."""
