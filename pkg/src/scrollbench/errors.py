"""Exception types shared across the package."""

from __future__ import annotations


class GeometryError(ValueError):
    """Raised for inconsistent trial layouts or unreachable targets."""


class TraceError(ValueError):
    """Raised when a scroll-event stream violates the ingestion contract.

    Carries the offending field name so HTTP handlers can surface a
    field-level message.
    """

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message


class DesignError(ValueError):
    """Raised for invalid study designs (bad counts, unknown techniques)."""


class AgentDivergedError(RuntimeError):
    """Raised when a simulated scroller exhausts its correction budget."""


class StoreError(ValueError):
    """Raised for session-store contract violations (duplicate seq, unknown session)."""
