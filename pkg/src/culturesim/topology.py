"""Social network structures over which stories are transmitted.

Four deterministic network families are supported:

* ``fully_connected`` -- every agent hears every other agent.
* ``circle`` -- a ring; every agent hears its two ring neighbors.
* ``caveman`` -- a connected ring of cliques: ``c`` cliques of equal size
  with one intra-clique edge per clique rewired to the next clique.
* ``sequence`` -- a transmission chain; each position hears only the
  previous one and positions are executed one at a time.

Topologies are immutable, so one instance can be shared freely across
worker threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any

from .errors import AgentOutOfRange, InvalidPopulation


class NetworkKind(str, Enum):
    """Supported network structures."""

    FULLY_CONNECTED = "fully_connected"
    CIRCLE = "circle"
    CAVEMAN = "caveman"
    SEQUENCE = "sequence"


class Schedule(str, Enum):
    """How the agents of one generation are allowed to execute."""

    #: all agents of a generation may run concurrently
    SYNCHRONOUS = "synchronous"
    #: positions run strictly one after another (transmission chain)
    SEQUENTIAL_CHAIN = "sequential_chain"


@dataclass(frozen=True)
class Topology:
    """An immutable agent network.

    ``adjacency[i]`` is the sorted tuple of neighbors of agent ``i``.  For
    the undirected kinds the adjacency is symmetric and irreflexive; for
    ``sequence`` it is directed backwards: position ``i`` hears only
    position ``i - 1`` and position 0 hears nobody.
    """

    n_agents: int
    kind: NetworkKind
    adjacency: tuple[tuple[int, ...], ...]
    schedule: Schedule
    n_cliques: int | None = None

    def edges(self) -> list[tuple[int, int]]:
        """Sorted list of edges as ``(i, j)`` pairs with ``i < j``."""
        seen: set[tuple[int, int]] = set()
        for i, nbrs in enumerate(self.adjacency):
            for j in nbrs:
                seen.add((i, j) if i < j else (j, i))
        return sorted(seen)

    def degree(self, agent_id: int) -> int:
        return len(neighbors(self, agent_id))

    def to_json(self) -> dict[str, Any]:
        """JSON-friendly description: kind, sizes and the edge list."""
        payload: dict[str, Any] = {
            "kind": self.kind.value,
            "n_agents": self.n_agents,
            "edges": [list(e) for e in self.edges()],
        }
        if self.kind is NetworkKind.CAVEMAN:
            payload["n_cliques"] = self.n_cliques
        return payload


def neighbors(topology: Topology, agent_id: int) -> list[int]:
    """Neighbor ids of ``agent_id`` in ascending order."""
    if not 0 <= agent_id < topology.n_agents:
        raise AgentOutOfRange(
            f"agent {agent_id} outside [0, {topology.n_agents})"
        )
    return list(topology.adjacency[agent_id])


def build_topology(
    kind: NetworkKind | str,
    n_agents: int,
    n_cliques: int | None = None,
) -> Topology:
    """Construct one of the supported networks.

    Args:
        kind: network family, as a :class:`NetworkKind` or its string value.
        n_agents: population size (chain length for ``sequence``).
        n_cliques: number of cliques; required for ``caveman`` and
            rejected for every other kind.

    Raises:
        InvalidPopulation: if the population does not fit the requested
            structure (too small, not divisible into cliques, cliques of
            fewer than three agents, or a stray ``n_cliques``).
    """
    kind = NetworkKind(kind)
    if n_agents < 1:
        raise InvalidPopulation("population must contain at least one agent")
    if kind is not NetworkKind.CAVEMAN and n_cliques is not None:
        raise InvalidPopulation(f"n_cliques is only valid for caveman networks, not {kind.value}")

    if kind is NetworkKind.FULLY_CONNECTED:
        if n_agents < 2:
            raise InvalidPopulation("a fully connected network needs at least 2 agents")
        adjacency = tuple(
            tuple(j for j in range(n_agents) if j != i) for i in range(n_agents)
        )
        return Topology(n_agents, kind, adjacency, Schedule.SYNCHRONOUS)

    if kind is NetworkKind.CIRCLE:
        if n_agents < 3:
            raise InvalidPopulation("a circle needs at least 3 agents")
        adjacency = tuple(
            tuple(sorted({(i - 1) % n_agents, (i + 1) % n_agents}))
            for i in range(n_agents)
        )
        return Topology(n_agents, kind, adjacency, Schedule.SYNCHRONOUS)

    if kind is NetworkKind.CAVEMAN:
        return _build_caveman(n_agents, n_cliques)

    # sequence: position i hears position i - 1 only
    adjacency = tuple((() if i == 0 else (i - 1,)) for i in range(n_agents))
    return Topology(n_agents, kind, adjacency, Schedule.SEQUENTIAL_CHAIN)


def _build_caveman(n_agents: int, n_cliques: int | None) -> Topology:
    """Connected ring of cliques.

    Cliques are the contiguous blocks ``[k*m, (k+1)*m)``.  In clique ``k``
    the internal edge between its first two members is removed and the
    clique's first member is connected to the *second* member of the next
    clique around the ring, which keeps the graph connected with exactly
    ``c * (m*(m-1)/2 - 1) + c`` edges.
    """
    if n_cliques is None:
        raise InvalidPopulation("caveman networks require n_cliques")
    if n_cliques < 2:
        raise InvalidPopulation("a caveman network needs at least 2 cliques")
    if n_agents % n_cliques != 0:
        raise InvalidPopulation(
            f"{n_agents} agents cannot be split into {n_cliques} equal cliques"
        )
    clique_size = n_agents // n_cliques
    if clique_size < 3:
        raise InvalidPopulation(
            f"cliques of {clique_size} agents cannot be rewired; use at least 3 per clique"
        )

    adj: list[set[int]] = [set() for _ in range(n_agents)]
    for k in range(n_cliques):
        base = k * clique_size
        members = range(base, base + clique_size)
        for a in members:
            for b in members:
                if a < b:
                    adj[a].add(b)
                    adj[b].add(a)
        # rewire: drop one internal edge, bridge to the next clique
        adj[base].discard(base + 1)
        adj[base + 1].discard(base)
        bridge = ((k + 1) % n_cliques) * clique_size + 1
        adj[base].add(bridge)
        adj[bridge].add(base)

    adjacency = tuple(tuple(sorted(s)) for s in adj)
    return Topology(n_agents, NetworkKind.CAVEMAN, adjacency, Schedule.SYNCHRONOUS, n_cliques)


def topology_from_json(payload: dict[str, Any]) -> Topology:
    """Rebuild a topology from its :meth:`Topology.to_json` form."""
    return build_topology(
        payload["kind"], payload["n_agents"], payload.get("n_cliques")
    )
