"""The four network kinds and the structural guarantees each one makes.

Run with:  python3 demos/01_topologies.py
"""

from culturesim import NetworkKind, build_topology, neighbors


def describe(topology, label):
    degrees = sorted({topology.degree(i) for i in range(topology.n_agents)})
    print(f"{label}: {topology.n_agents} agents, {len(topology.edges())} edges, "
          f"degrees {degrees}")
    print(f"  agent 0 hears agents {neighbors(topology, 0)}")


def main():
    print("== fully connected ==")
    fc = build_topology(NetworkKind.FULLY_CONNECTED, 10)
    describe(fc, "fully_connected(10)")
    assert len(fc.edges()) == 10 * 9 // 2

    print("\n== circle ==")
    circle = build_topology("circle", 10)
    describe(circle, "circle(10)")
    # every agent hears exactly its two ring neighbors
    assert all(circle.degree(i) == 2 for i in range(10))

    print("\n== connected caveman ==")
    # two cliques of five; one edge inside each clique is rewired into a
    # bridge to the next clique, which keeps the graph connected
    caveman = build_topology("caveman", 10, n_cliques=2)
    describe(caveman, "caveman(10, 2 cliques)")
    bridges = [(i, j) for i, j in caveman.edges() if abs(i - j) >= 5]
    print(f"  bridges between cliques: {bridges}")

    print("\n== sequence (transmission chain) ==")
    chain = build_topology("sequence", 6)
    describe(chain, "sequence(6)")
    print("  position 0 hears nobody; every later position hears only its "
          "predecessor —")
    print("  the run is recorded as 6 generations of a single agent.")

    print("\nSerialization survives a round trip:")
    print(f"  {caveman.to_json()['kind']} with edges "
          f"{caveman.to_json()['edges'][:3]} ...")


if __name__ == "__main__":
    main()
