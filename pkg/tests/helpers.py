"""Shared graph builders and comparison helpers for the tests."""

import numpy as np

from graphvrnn.graphs import Graph


def path_graph(n: int, attributes=None) -> Graph:
    return Graph.from_edges(
        n, [(i, i + 1) for i in range(n - 1)], attributes=attributes
    )


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(
        n, [(u, v) for u in range(n) for v in range(u + 1, n)]
    )


def star_graph(n: int) -> Graph:
    """Hub 0 adjacent to every other node, nothing else."""
    return Graph.from_edges(n, [(0, v) for v in range(1, n)])


def triangle(attributes=None) -> Graph:
    return Graph.from_edges(3, [(0, 1), (0, 2), (1, 2)], attributes=attributes)


def random_connected_graph(
    rng: np.random.Generator, n: int, p: float = 0.3, k: int = 0
) -> Graph:
    """G(n, p) unioned with a random spanning path, so it is connected."""
    edges = {
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p
    }
    spine = rng.permutation(n)
    edges.update(
        (min(int(a), int(b)), max(int(a), int(b)))
        for a, b in zip(spine[:-1], spine[1:])
    )
    attrs = rng.normal(size=(n, k)) if k else None
    return Graph.from_edges(n, edges, attributes=attrs)


def relabel(g: Graph, order: np.ndarray) -> frozenset:
    """Edge set after moving the node at original label order[i] to label i."""
    inv = np.empty(g.n, dtype=np.int64)
    inv[np.asarray(order)] = np.arange(g.n)
    return frozenset(
        (min(int(inv[u]), int(inv[v])), max(int(inv[u]), int(inv[v])))
        for u, v in g.edges
    )


def assert_graphs_equal(a: Graph, b: Graph, check_attrs: bool = True) -> None:
    assert a.n == b.n
    assert a.edges == b.edges
    if check_attrs:
        if a.attributes is None:
            assert b.attributes is None
        else:
            np.testing.assert_array_equal(a.attributes, b.attributes)
