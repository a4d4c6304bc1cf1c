"""Graph representation and the graph <-> BFS-sequence codec.

A graph is flattened into a sequence of per-node adjacency rows under a BFS
node order: row i (for the node at BFS position i) lists its connections to
the m most recent predecessors, newest first. With m at least the order's
true bandwidth the mapping is lossless, and `decode_graph` inverts
`encode_sequence` exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from collections import deque

import numpy as np

from .errors import BandwidthError, DataError, DisconnectedGraphError, FormatError


@dataclass(frozen=True, eq=False)
class Graph:
    """Undirected graph: adjacency plus optional per-node real attributes.

    edges holds unordered pairs (u, v) normalized to u < v, no self-loops.
    community_labels are dataset metadata only and never reach the model.
    """

    n: int
    edges: frozenset[tuple[int, int]]
    attributes: np.ndarray | None = None
    community_labels: np.ndarray | None = None

    def __post_init__(self):
        if self.n < 1:
            raise DataError(f"graph must have at least one node, got n={self.n}")
        for u, v in self.edges:
            if u == v:
                raise DataError(f"self-loop on node {u}")
            if not (0 <= u < v < self.n):
                raise DataError(f"edge ({u}, {v}) out of range for n={self.n}")
        if self.attributes is not None:
            attrs = np.asarray(self.attributes, dtype=np.float64)
            if attrs.ndim != 2 or attrs.shape[0] != self.n:
                raise DataError(
                    f"attributes must be n x k, got shape {attrs.shape} for n={self.n}"
                )
            object.__setattr__(self, "attributes", attrs)
        if self.community_labels is not None:
            labels = np.asarray(self.community_labels, dtype=np.int64)
            if labels.shape != (self.n,):
                raise DataError(
                    f"community_labels must have one entry per node, got {labels.shape}"
                )
            object.__setattr__(self, "community_labels", labels)

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges,
        attributes: np.ndarray | None = None,
        community_labels: np.ndarray | None = None,
    ) -> "Graph":
        normalized = frozenset((min(u, v), max(u, v)) for u, v in edges)
        return cls(n, normalized, attributes, community_labels)

    @property
    def k(self) -> int:
        return 0 if self.attributes is None else self.attributes.shape[1]

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def adjacency(self) -> np.ndarray:
        adj = np.zeros((self.n, self.n), dtype=np.uint8)
        for u, v in self.edges:
            adj[u, v] = 1
            adj[v, u] = 1
        return adj

    def neighbor_lists(self) -> list[list[int]]:
        """Adjacency lists with neighbors in ascending order."""
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        for lst in nbrs:
            lst.sort()
        return nbrs

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def is_connected(self) -> bool:
        if self.n == 1:
            return True
        nbrs = self.neighbor_lists()
        seen = np.zeros(self.n, dtype=bool)
        seen[0] = True
        queue = deque([0])
        count = 1
        while queue:
            u = queue.popleft()
            for w in nbrs[u]:
                if not seen[w]:
                    seen[w] = True
                    count += 1
                    queue.append(w)
        return count == self.n


@dataclass(frozen=True, eq=False)
class BfsSequence:
    """The sequence form of a graph under one BFS order.

    s_rows[p] (p = 0 for BFS position 1, up to position n-1) is the binary
    row for that node: entry j says whether it connects to the node j+1
    positions earlier, so widths are min(position, m). x_rows, when present,
    holds the node attributes permuted into BFS order. permutation[t] is the
    original index of the node at BFS position t.
    """

    n: int
    m: int
    s_rows: tuple[np.ndarray, ...]
    x_rows: np.ndarray | None = None
    permutation: np.ndarray | None = None

    def __post_init__(self):
        if self.n < 1:
            raise DataError(f"sequence must cover at least one node, got n={self.n}")
        if self.m < 1:
            raise DataError(f"bandwidth must be >= 1, got m={self.m}")
        if len(self.s_rows) != self.n - 1:
            raise FormatError(
                f"expected {self.n - 1} rows for n={self.n}, got {len(self.s_rows)}"
            )
        rows = []
        for p, row in enumerate(self.s_rows, start=1):
            row = np.asarray(row, dtype=np.uint8)
            want = min(p, self.m)
            if row.shape != (want,):
                raise FormatError(
                    f"row at position {p} has width {row.shape}, expected ({want},)"
                )
            if not np.all((row == 0) | (row == 1)):
                raise FormatError(f"row at position {p} has non-binary entries")
            rows.append(row)
        object.__setattr__(self, "s_rows", tuple(rows))
        if self.x_rows is not None:
            x = np.asarray(self.x_rows, dtype=np.float64)
            if x.ndim != 2 or x.shape[0] != self.n:
                raise FormatError(
                    f"x_rows must be n x k, got shape {x.shape} for n={self.n}"
                )
            object.__setattr__(self, "x_rows", x)
        if self.permutation is not None:
            perm = np.asarray(self.permutation, dtype=np.int64)
            if sorted(perm.tolist()) != list(range(self.n)):
                raise DataError("permutation is not a bijection on [0, n)")
            object.__setattr__(self, "permutation", perm)

    @property
    def k(self) -> int:
        return 0 if self.x_rows is None else self.x_rows.shape[1]


def bfs_order(g: Graph, rng: np.random.Generator) -> np.ndarray:
    """Sample a BFS visitation order of g's nodes.

    Draws a uniform random relabeling, then runs deterministic BFS from
    relabeled node 0 expanding neighbors in ascending relabeled order; the
    result is mapped back to original indices. All randomness comes from the
    relabeling draw, so equal streams give equal orders.
    """
    n = g.n
    label = rng.permutation(n)
    if n == 1:
        return np.zeros(1, dtype=np.int64)
    original = np.empty(n, dtype=np.int64)
    original[label] = np.arange(n)
    nbrs = g.neighbor_lists()
    relabeled: list[list[int]] = [[] for _ in range(n)]
    for v in range(n):
        relabeled[label[v]] = sorted(label[w] for w in nbrs[v])
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    order = [0]
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for w in relabeled[u]:
            if not seen[w]:
                seen[w] = True
                order.append(w)
                queue.append(w)
    if len(order) < n:
        unreachable = int(original[int(np.flatnonzero(~seen)[0])])
        raise DisconnectedGraphError(
            f"graph is disconnected: node {unreachable} is unreachable from the start node"
        )
    return original[np.array(order, dtype=np.int64)]


def encode_sequence(g: Graph, order: np.ndarray, m: int) -> BfsSequence:
    """Encode g under the given node order with lookback bandwidth m.

    Raises BandwidthError if any true edge spans more than m positions;
    encoding never silently drops edges.
    """
    n = g.n
    order = np.asarray(order, dtype=np.int64)
    if sorted(order.tolist()) != list(range(n)):
        raise DataError("order is not a permutation of the graph's nodes")
    if m < 1:
        raise DataError(f"bandwidth must be >= 1, got m={m}")
    pos = np.empty(n, dtype=np.int64)
    pos[order] = np.arange(n)
    for u, v in g.edges:
        span = abs(int(pos[u]) - int(pos[v]))
        if span > m:
            raise BandwidthError(
                f"edge ({u}, {v}) spans {span} positions under this order, "
                f"beyond bandwidth m={m}"
            )
    rows: list[np.ndarray] = []
    for p in range(1, n):
        width = min(p, m)
        row = np.zeros(width, dtype=np.uint8)
        rows.append(row)
    for u, v in g.edges:
        lo, hi = sorted((int(pos[u]), int(pos[v])))
        rows[hi - 1][hi - lo - 1] = 1
    x_rows = g.attributes[order] if g.attributes is not None else None
    return BfsSequence(n=n, m=m, s_rows=tuple(rows), x_rows=x_rows, permutation=order)


def decode_graph(seq: BfsSequence) -> Graph:
    """Invert encode_sequence: rebuild the graph in sequence-position space.

    The result's node t is the node at BFS position t of the encoding;
    attributes carry through, community labels do not survive encoding.
    """
    edges = set()
    for p, row in enumerate(seq.s_rows, start=1):
        for j in np.flatnonzero(row):
            edges.add((p - 1 - int(j), p))
    return Graph.from_edges(seq.n, edges, attributes=seq.x_rows)


def estimate_bandwidth(
    graphs: list[Graph], samples_per_graph: int, rng: np.random.Generator
) -> int:
    """Empirical bandwidth: the largest lookback a true edge needed over
    sampled BFS orders of every graph.

    Sufficient for the sampled orders by construction (fresh orders drawn
    later may exceed it). Per-graph streams derive from one base draw, so a
    superset of graphs scans the same orders for the shared prefix and the
    estimate is monotone under set growth.
    """
    if not graphs:
        raise DataError("estimate_bandwidth needs at least one graph")
    if samples_per_graph < 1:
        raise DataError("samples_per_graph must be >= 1")
    from .rng import derive, draw_base

    base = draw_base(rng)
    worst = 1
    for i, g in enumerate(graphs):
        stream = derive(base, i)
        for _ in range(samples_per_graph):
            order = bfs_order(g, stream)
            pos = np.empty(g.n, dtype=np.int64)
            pos[order] = np.arange(g.n)
            for u, v in g.edges:
                span = abs(int(pos[u]) - int(pos[v]))
                if span > worst:
                    worst = span
    return worst
