"""
Exception types raised by the dual cube toolkit.

Validation errors subclass ValueError so callers that already guard against
bad arguments keep working; construction and search failures do not.
"""
from typing import FrozenSet, Optional


class DualCubeError(Exception):
    """Base class for every error raised by this package."""


class InvalidOrderError(DualCubeError, ValueError):
    """Raised for an order n < 2 or for objects built for different orders."""


class UnsupportedOrderError(DualCubeError, ValueError):
    """Raised when a construction is called below its minimum order."""


class PreconditionError(DualCubeError, ValueError):
    """Raised when an operation precondition does not hold."""


class InvalidTerminalsError(PreconditionError):
    """Raised for duplicate, malformed or wrongly sized terminal sets."""


class ConnectivityError(DualCubeError):
    """Fewer internally disjoint paths exist than were requested."""

    def __init__(
        self,
        message: str,
        requested: int,
        achieved: int,
        separator: Optional[FrozenSet] = None
    ):
        super().__init__(message)
        self.requested = requested
        self.achieved = achieved
        self.separator = separator if separator is not None else frozenset()


class RoutingError(DualCubeError):
    """A routing region that should be connected was not."""


class ReservationExhaustedError(DualCubeError):
    """No free connector cluster was left to reserve."""


class IncompleteSearchError(DualCubeError):
    """A certified search could not produce the requested number of trees."""


class BudgetExceededError(DualCubeError):
    """An exhaustive oracle refused an instance above its size guard."""
