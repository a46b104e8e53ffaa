import pytest

from culturesim import (
    AgentOutOfRange,
    InvalidPopulation,
    NetworkKind,
    Schedule,
    build_topology,
    neighbors,
)
from culturesim.topology import topology_from_json


def test_fully_connected_10():
    topo = build_topology("fully_connected", 10)
    assert len(topo.edges()) == 45
    assert all(topo.degree(i) == 9 for i in range(10))
    assert neighbors(topo, 0) == [1, 2, 3, 4, 5, 6, 7, 8, 9]


def test_circle_10():
    topo = build_topology("circle", 10)
    assert len(topo.edges()) == 10
    assert all(topo.degree(i) == 2 for i in range(10))
    assert neighbors(topo, 0) == [1, 9]
    assert neighbors(topo, 5) == [4, 6]


def test_caveman_two_cliques_of_five():
    topo = build_topology("caveman", 10, 2)
    # two 5-cliques, each missing its (first, second) edge, plus two bridges
    expected = sorted(
        [(a, b) for a in range(5) for b in range(a + 1, 5) if (a, b) != (0, 1)]
        + [(a, b) for a in range(5, 10) for b in range(a + 1, 10) if (a, b) != (5, 6)]
        + [(0, 6), (1, 5)]
    )
    assert topo.edges() == expected
    assert len(topo.edges()) == 20


def test_caveman_stays_connected():
    topo = build_topology("caveman", 12, 3)
    # breadth-first walk must reach every agent
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for node in frontier:
            for other in neighbors(topo, node):
                if other not in seen:
                    seen.add(other)
                    nxt.append(other)
        frontier = nxt
    assert seen == set(range(12))


def test_sequence_adjacency():
    topo = build_topology("sequence", 3)
    assert neighbors(topo, 0) == []
    assert neighbors(topo, 1) == [0]
    assert neighbors(topo, 2) == [1]
    assert topo.schedule is Schedule.SEQUENTIAL_CHAIN
    assert topo.edges() == [(0, 1), (1, 2)]


def test_synchronous_schedules():
    for kind in ("fully_connected", "circle"):
        assert build_topology(kind, 5).schedule is Schedule.SYNCHRONOUS
    assert build_topology("caveman", 6, 2).schedule is Schedule.SYNCHRONOUS


@pytest.mark.parametrize(
    "kind,n,cliques",
    [
        ("fully_connected", 1, None),
        ("circle", 2, None),
        ("caveman", 10, 3),  # not divisible
        ("caveman", 4, 2),  # cliques of 2 cannot be rewired
        ("caveman", 10, None),  # missing clique count
        ("caveman", 10, 1),
        ("circle", 10, 2),  # stray clique count
        ("sequence", 0, None),
    ],
)
def test_invalid_populations(kind, n, cliques):
    with pytest.raises(InvalidPopulation):
        build_topology(kind, n, cliques)


def test_neighbor_range_check():
    topo = build_topology("circle", 5)
    with pytest.raises(AgentOutOfRange):
        neighbors(topo, 5)
    with pytest.raises(AgentOutOfRange):
        neighbors(topo, -1)


def test_adjacency_is_symmetric_and_irreflexive():
    for topo in (
        build_topology("fully_connected", 7),
        build_topology("circle", 7),
        build_topology("caveman", 8, 2),
    ):
        for i in range(topo.n_agents):
            nbrs = neighbors(topo, i)
            assert i not in nbrs
            assert nbrs == sorted(nbrs)
            for j in nbrs:
                assert i in neighbors(topo, j)


def test_json_round_trip():
    topo = build_topology("caveman", 10, 2)
    payload = topo.to_json()
    assert payload["kind"] == "caveman"
    assert payload["n_agents"] == 10
    assert payload["n_cliques"] == 2
    assert len(payload["edges"]) == 20
    rebuilt = topology_from_json(payload)
    assert rebuilt.edges() == topo.edges()

    circle = build_topology("circle", 4).to_json()
    assert "n_cliques" not in circle
    assert circle["edges"] == [[0, 1], [0, 3], [1, 2], [2, 3]]


def test_edge_counts_across_sizes():
    # complete: n(n-1)/2, circle: n, sequence: n-1, caveman: c(m(m-1)/2 - 1) + c
    for n in range(3, 31):
        assert len(build_topology("fully_connected", n).edges()) == n * (n - 1) // 2
        assert len(build_topology("circle", n).edges()) == n
        assert len(build_topology("sequence", n).edges()) == n - 1
        for c in range(2, n + 1):
            if n % c == 0 and n // c >= 3:
                m = n // c
                expected = c * (m * (m - 1) // 2 - 1) + c
                assert len(build_topology("caveman", n, c).edges()) == expected


def test_enum_accepts_strings_and_rejects_unknown():
    assert build_topology(NetworkKind.CIRCLE, 4).kind is NetworkKind.CIRCLE
    with pytest.raises(ValueError):
        build_topology("hexagon", 4)
