"""Force-directed layout of the story similarity graph.

Stories become nodes; pairs whose TF-IDF cosine similarity reaches a
threshold become edges whose attraction grows with the similarity, so
clusters of near-identical stories contract into tight knots.  The
iteration is a Fruchterman-Reingold scheme with a linearly cooling
temperature; given the same matrix, seed and iteration count it produces
identical coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

#: similarities below this value do not produce an edge
EDGE_THRESHOLD = 0.05


@dataclass(frozen=True, eq=False)
class LayoutGraph:
    """Laid-out story graph.

    ``positions`` is an ``(n, 2)`` array inside the [-1, 1] square;
    ``edges`` holds ``(i, j, weight)`` with ``i < j`` and the weight equal
    to the similarity that created the edge.
    """

    positions: np.ndarray
    edges: tuple[tuple[int, int, float], ...]

    @property
    def n_nodes(self) -> int:
        return len(self.positions)

    def color(self, index: int) -> float:
        """Color scalar in [0, 1]: story index scaled by the corpus size,
        so early stories are dark and late stories bright on a sequential
        colormap."""
        if self.n_nodes < 2:
            return 0.0
        return index / (self.n_nodes - 1)


def spring_layout(
    matrix: Sequence[Sequence[float]] | np.ndarray,
    seed: int = 0,
    iterations: int = 50,
    threshold: float = EDGE_THRESHOLD,
) -> LayoutGraph:
    """Force-directed embedding of a similarity matrix.

    Repulsion acts between every node pair; attraction only along edges,
    scaled by the edge weight.  Positions start uniformly at random from
    ``seed`` and the final arrangement is rescaled uniformly (one common
    scale, so relative distances survive) to fit the [-1, 1] square.
    """
    matrix = np.asarray(matrix, dtype=float)
    n = len(matrix)
    if n == 0:
        return LayoutGraph(positions=np.zeros((0, 2)), edges=())

    weights = np.where(matrix >= threshold, matrix, 0.0)
    np.fill_diagonal(weights, 0.0)
    edges = tuple(
        (i, j, float(matrix[i, j]))
        for i in range(n)
        for j in range(i + 1, n)
        if weights[i, j] > 0.0
    )

    if n == 1:
        return LayoutGraph(positions=np.zeros((1, 2)), edges=edges)

    rng = np.random.default_rng(seed)
    pos = rng.uniform(0.0, 1.0, size=(n, 2))

    k = np.sqrt(1.0 / n)  # ideal pairwise distance
    t = 0.1 * max(np.ptp(pos[:, 0]), np.ptp(pos[:, 1]))
    dt = t / (iterations + 1)
    for _ in range(iterations):
        delta = pos[:, None, :] - pos[None, :, :]
        distance = np.linalg.norm(delta, axis=-1)
        np.clip(distance, 0.01, None, out=distance)
        force = k * k / distance**2 - weights * distance / k
        displacement = np.einsum("ijk,ij->ik", delta, force)
        length = np.linalg.norm(displacement, axis=-1)
        length = np.where(length < 0.01, 0.1, length)
        pos += displacement * (t / length)[:, None]
        t -= dt

    pos -= pos.mean(axis=0)
    span = np.abs(pos).max()
    if span > 0:
        pos /= span
    return LayoutGraph(positions=pos, edges=edges)


def export_layout(graph: LayoutGraph) -> dict[str, Any]:
    """JSON form: nodes with positions and color scalars, edges with
    weights and a flag marking successive stories (index j = i + 1)."""
    return {
        "n_nodes": graph.n_nodes,
        "nodes": [
            {
                "index": i,
                "x": float(graph.positions[i, 0]),
                "y": float(graph.positions[i, 1]),
                "color": graph.color(i),
            }
            for i in range(graph.n_nodes)
        ],
        "edges": [
            {
                "source": i,
                "target": j,
                "weight": w,
                "successive": j == i + 1,
            }
            for i, j, w in graph.edges
        ],
    }


def layout_from_json(payload: dict[str, Any]) -> LayoutGraph:
    """Rebuild a :class:`LayoutGraph` from its :func:`export_layout` form."""
    nodes = sorted(payload["nodes"], key=lambda node: node["index"])
    positions = np.array([[node["x"], node["y"]] for node in nodes]).reshape(
        len(nodes), 2
    )
    edges = tuple(
        (edge["source"], edge["target"], edge["weight"])
        for edge in payload["edges"]
    )
    return LayoutGraph(positions=positions, edges=edges)
