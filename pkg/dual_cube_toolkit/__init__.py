"""
Dual Cube Toolkit

Generalized connectivity and component connectivity of dual cubes: graph
model, disjoint-path routing, internally disjoint Steiner trees, minimum
component cuts and brute-force oracles.
"""

__version__ = "0.1.0"

from .client import DualCubeClient
from .errors import (
    BudgetExceededError,
    ConnectivityError,
    DualCubeError,
    IncompleteSearchError,
    InvalidOrderError,
    InvalidTerminalsError,
    PreconditionError,
    ReservationExhaustedError,
    RoutingError,
    UnsupportedOrderError,
)
from .topology import ClusterRef, DualCube, Hypercube, Label

__all__ = [
    # Main entry point
    'DualCubeClient',
    # Graph model
    'DualCube',
    'Hypercube',
    'ClusterRef',
    'Label',
    # Errors
    'DualCubeError',
    'InvalidOrderError',
    'UnsupportedOrderError',
    'PreconditionError',
    'InvalidTerminalsError',
    'ConnectivityError',
    'RoutingError',
    'ReservationExhaustedError',
    'IncompleteSearchError',
    'BudgetExceededError',
]
