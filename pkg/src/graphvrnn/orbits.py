"""Per-node orbit counts for connected graphlets on up to 4 nodes.

Each node gets a 15-vector: how many times it occupies each automorphism
orbit across the 9 connected graphlets of size <= 4 (orbit 0 is plain
degree). Orbits 1-3 are counted directly from neighbor pairs; orbits 4-14
come from a combinatorial equation system over edge-triangle counts,
common-neighbor tallies, and the complete-graphlet count, avoiding any
subset enumeration.
"""

from __future__ import annotations

import numpy as np

from .graphs import Graph

ORBIT_COUNT = 15


def orbit_counts(g: Graph) -> np.ndarray:
    """(n, 15) integer orbit participation counts."""
    n = g.n
    orbit = np.zeros((n, ORBIT_COUNT), dtype=np.int64)
    edges = sorted(g.edges)
    deg = g.degrees()
    orbit[:, 0] = deg

    adj: list[set[int]] = [set() for _ in range(n)]
    # incidence: per node, (neighbor, edge id) sorted by neighbor
    inc: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for e, (u, v) in enumerate(edges):
        adj[u].add(v)
        adj[v].add(u)
        inc[u].append((v, e))
        inc[v].append((u, e))
    for lst in inc:
        lst.sort()
    adj_sorted = [sorted(s) for s in adj]

    # triangles spanning each edge
    tri = np.zeros(len(edges), dtype=np.int64)
    for e, (u, v) in enumerate(edges):
        tri[e] = len(adj[u] & adj[v])

    # complete 4-graphlets per node, each counted once via x > y > z > w order
    c4 = np.zeros(n, dtype=np.int64)
    for x in range(n):
        for y in adj_sorted[x]:
            if y >= x:
                break
            shared = [z for z in adj_sorted[y] if z < y and z in adj[x]]
            for i, z in enumerate(shared):
                for w in shared[i + 1 :]:
                    if w in adj[z]:
                        c4[x] += 1
                        c4[y] += 1
                        c4[z] += 1
                        c4[w] += 1

    common = np.zeros(n, dtype=np.int64)
    for x in range(n):
        f_12_14 = f_10_13 = f_13_14 = f_11_13 = 0
        f_7_11 = f_5_8 = f_6_9 = f_9_12 = f_4_8 = f_8_12 = 0
        f_14 = int(c4[x])
        touched: list[int] = []

        # x in the middle of the pattern
        for y, ey in inc[x]:
            for z, ez in inc[y]:
                if z in adj[x]:
                    if z < y:  # triangle x,y,z seen once per unordered (y, z)
                        f_12_14 += tri[ez] - 1
                        f_10_13 += (deg[y] - 1 - tri[ez]) + (deg[z] - 1 - tri[ez])
                elif z != x:
                    if common[z] == 0:
                        touched.append(z)
                    common[z] += 1
            for idx2 in range(len(inc[x])):
                z, ez = inc[x][idx2]
                if z <= y:
                    continue
                if z in adj[y]:  # triangle on the pair of x's neighbors
                    orbit[x, 3] += 1
                    f_13_14 += (tri[ey] - 1) + (tri[ez] - 1)
                    f_11_13 += (deg[x] - 1 - tri[ey]) + (deg[x] - 1 - tri[ez])
                else:  # induced path y - x - z
                    orbit[x, 2] += 1
                    f_7_11 += (deg[x] - 2 - tri[ey]) + (deg[x] - 2 - tri[ez])
                    f_5_8 += (deg[y] - 1 - tri[ey]) + (deg[z] - 1 - tri[ez])

        # x at the side of the pattern
        for y, ey in inc[x]:
            for z, ez in inc[y]:
                if z == x or z in adj[x]:
                    continue
                orbit[x, 1] += 1  # induced path x - y - z
                f_6_9 += deg[y] - 2 - tri[ey]
                f_9_12 += tri[ez]
                f_4_8 += deg[z] - 1 - tri[ez]
                f_8_12 += common[z] - 1

        for z in touched:
            common[z] = 0

        orbit[x, 14] = f_14
        orbit[x, 13] = (f_13_14 - 6 * f_14) // 2
        orbit[x, 12] = f_12_14 - 3 * f_14
        orbit[x, 11] = (f_11_13 - f_13_14 + 6 * f_14) // 2
        orbit[x, 10] = f_10_13 - f_13_14 + 6 * f_14
        orbit[x, 9] = (f_9_12 - 2 * f_12_14 + 6 * f_14) // 2
        orbit[x, 8] = (f_8_12 - 2 * f_12_14 + 6 * f_14) // 2
        orbit[x, 7] = (f_13_14 + f_7_11 - f_11_13 - 6 * f_14) // 6
        orbit[x, 6] = (2 * f_12_14 + f_6_9 - f_9_12 - 6 * f_14) // 2
        orbit[x, 5] = 2 * f_12_14 + f_5_8 - f_8_12 - 6 * f_14
        orbit[x, 4] = 2 * f_12_14 + f_4_8 - f_8_12 - 6 * f_14

    return orbit


def mean_orbit_vector(g: Graph) -> np.ndarray:
    """The graph's orbit statistic: mean orbit-count vector over nodes."""
    return orbit_counts(g).mean(axis=0)
