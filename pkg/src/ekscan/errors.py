"""Exception hierarchy shared by all ekscan modules.

Every computational error carries a category so the CLI can map it to a
stable exit code.  Library code raises these instead of bare ValueError
wherever a caller could reasonably dispatch on the failure mode.
"""
from __future__ import annotations


class EkscanError(Exception):
    """Base class for all ekscan errors."""

    category = "error"
    exit_code = 1


class DomainError(EkscanError):
    """Argument outside the mathematical domain of an operation."""

    category = "domain"
    exit_code = 3


class ResourceError(EkscanError):
    """A configured memory/size budget would be exceeded."""

    category = "resource"
    exit_code = 4


class AuditFailure(EkscanError):
    """A measured error exceeded its certified bound.

    Raised instead of silently continuing: an audit failure means either
    the arithmetic backend misbehaved or the error model is violated.
    """

    category = "audit-failure"
    exit_code = 5


class SingularityError(EkscanError):
    """A denominator that must be nonzero for genuine input vanished."""

    category = "singularity"
    exit_code = 6

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class ContractError(EkscanError):
    """Caller violated an API precondition (e.g. length mismatch)."""

    category = "contract"
    exit_code = 7


class StoreError(EkscanError):
    """Result-store corruption or incompatible manifest."""

    category = "store"
    exit_code = 8
