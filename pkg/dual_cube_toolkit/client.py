"""
Main client for the dual cube toolkit.
Owns one DualCube and hands it to every feature sub-client.
"""
from typing import TYPE_CHECKING

from .topology import DualCube, build_dual_cube

if TYPE_CHECKING:
    from .compcut import CutsClient
    from .oracle import OracleClient
    from .streeforge import TreesClient
    from .topology import TopologyClient


class DualCubeClient:
    """Main entry point: topology, trees, cuts and oracles for one D_n."""

    def __init__(self, n: int):
        """
        Initialize the client with domain-specific sub-clients.

        Args:
            n: Order of the dual cube, at least 2

        Raises:
            InvalidOrderError: If n is not an integer >= 2
        """
        self._cube = build_dual_cube(n)

        from .compcut import CutsClient
        from .oracle import OracleClient
        from .streeforge import TreesClient
        from .topology import TopologyClient

        self.topology: "TopologyClient" = TopologyClient(self._cube)
        self.trees: "TreesClient" = TreesClient(self._cube)
        self.cuts: "CutsClient" = CutsClient(self._cube)
        self.oracle: "OracleClient" = OracleClient(self._cube)

    @property
    def cube(self) -> DualCube:
        return self._cube

    @property
    def n(self) -> int:
        return self._cube.n

    def __repr__(self) -> str:
        return f"DualCubeClient(n={self._cube.n})"
