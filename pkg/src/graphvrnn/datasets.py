"""Synthetic benchmark dataset generators and splitting.

Four named datasets: three two-community families (com-small, com-mix,
com-attr) and a hub-and-spokes surrogate for 1-hop citation ego graphs
(ego-surrogate). Every generated graph is connected (rejection sampling)
and records its community labels; com-attr additionally carries 1-D node
attributes drawn per community.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DataError
from .graphs import Graph
from .rng import derive, draw_base

DATASET_NAMES = ("com-small", "com-mix", "com-attr", "ego-surrogate")

_DEFAULT_COUNTS = {
    "com-small": 500,
    "com-mix": 500,
    "com-attr": 500,
    "ego-surrogate": 200,
}

_SIZE_RANGES = {
    "com-small": (12, 20),
    "com-mix": (24, 40),
    "com-attr": (30, 60),
    "ego-surrogate": (4, 18),
}


@dataclass(frozen=True)
class CommunitySpec:
    """Parameters of one two-or-more-community graph draw."""

    sizes: tuple[int, ...]
    p_intra: tuple[float, ...]
    p_inter: float
    attr_dists: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self):
        if not self.sizes or any(s < 1 for s in self.sizes):
            raise DataError(f"community sizes must be positive, got {self.sizes}")
        if len(self.p_intra) != len(self.sizes):
            raise DataError("p_intra must list one probability per community")
        probs = list(self.p_intra) + [self.p_inter]
        if any(not (0.0 <= p <= 1.0) for p in probs):
            raise DataError(f"probabilities must lie in [0, 1], got {probs}")
        if self.attr_dists is not None and len(self.attr_dists) != len(self.sizes):
            raise DataError("attr_dists must list one (mean, std) per community")

    @property
    def n(self) -> int:
        return sum(self.sizes)

    def describe(self) -> dict:
        return {
            "sizes": list(self.sizes),
            "p_intra": list(self.p_intra),
            "p_inter": self.p_inter,
            "attr_dists": None
            if self.attr_dists is None
            else [list(d) for d in self.attr_dists],
        }


def _community_labels(sizes: tuple[int, ...]) -> np.ndarray:
    return np.repeat(np.arange(len(sizes), dtype=np.int64), sizes)


def gen_community_graph(
    spec: CommunitySpec, rng: np.random.Generator, max_retries: int = 1000
) -> Graph:
    """Draw one connected community graph from spec.

    Each within-community pair is an independent edge with its community's
    p_intra, each cross pair with p_inter; the structure draw repeats until
    connected. Attributes (when configured) are drawn after the accepted
    structure, i.i.d. per node from its community's normal distribution.
    """
    n = spec.n
    labels = _community_labels(spec.sizes)
    prob = np.full((n, n), spec.p_inter, dtype=np.float64)
    same = labels[:, None] == labels[None, :]
    intra = np.asarray(spec.p_intra, dtype=np.float64)[labels]
    prob[same] = np.broadcast_to(intra[:, None], (n, n))[same]
    iu, ju = np.triu_indices(n, k=1)
    pair_probs = prob[iu, ju]

    for _ in range(max_retries):
        mask = rng.random(pair_probs.shape) < pair_probs
        edges = frozenset(
            (int(u), int(v)) for u, v in zip(iu[mask], ju[mask], strict=True)
        )
        g = Graph(n, edges, community_labels=labels)
        if g.is_connected():
            break
    else:
        raise DataError(
            f"no connected draw within {max_retries} retries for spec {spec.describe()}"
        )

    attributes = None
    if spec.attr_dists is not None:
        means = np.array([d[0] for d in spec.attr_dists])[labels]
        stds = np.array([d[1] for d in spec.attr_dists])[labels]
        attributes = (means + stds * rng.standard_normal(n)).reshape(n, 1)
    return Graph(n, g.edges, attributes=attributes, community_labels=labels)


def gen_ego_graph(n: int, rng: np.random.Generator, p_peripheral: float = 0.1) -> Graph:
    """One hub adjacent to all others; each peripheral pair connected with
    p_peripheral. Connected by construction."""
    if n < 1:
        raise DataError(f"ego graph needs n >= 1, got {n}")
    edges = {(0, v) for v in range(1, n)}
    if n > 2:
        iu, ju = np.triu_indices(n - 1, k=1)
        mask = rng.random(iu.shape) < p_peripheral
        for u, v in zip(iu[mask] + 1, ju[mask] + 1, strict=True):
            edges.add((int(u), int(v)))
    return Graph.from_edges(n, edges)


def _split_sizes(n: int) -> tuple[int, int]:
    # Odd node counts put the extra node in community 1.
    return (n + 1) // 2, n // 2


def community_spec_for(name: str, n: int, type_b: bool = False) -> CommunitySpec:
    """The CommunitySpec a named dataset uses for an n-node draw."""
    if name == "com-small":
        return CommunitySpec(_split_sizes(n), (0.7, 0.7), 0.05)
    if name == "com-mix":
        p = (0.4, 0.6) if type_b else (0.3, 0.3)
        return CommunitySpec(_split_sizes(n), p, 0.05)
    if name == "com-attr":
        return CommunitySpec(
            _split_sizes(n), (0.3, 0.3), 0.05, attr_dists=((1.5, 0.75), (-0.5, 1.0))
        )
    raise DataError(f"unknown community dataset {name!r}")


def gen_dataset(
    name: str,
    count: int | None = None,
    rng: np.random.Generator | None = None,
    size_range: tuple[int, int] | None = None,
) -> list[Graph]:
    """Generate a named benchmark dataset.

    Graph i is fully determined by a per-graph stream derived from one base
    draw on rng, so generation parallelizes per graph without changing
    results. size_range overrides the dataset's node-count bounds (used for
    reduced-scale runs).
    """
    if name not in DATASET_NAMES:
        raise DataError(f"unknown dataset {name!r}; expected one of {DATASET_NAMES}")
    if rng is None:
        raise DataError("gen_dataset requires an rng")
    if count is None:
        count = _DEFAULT_COUNTS[name]
    if count < 1:
        raise DataError(f"count must be >= 1, got {count}")
    lo, hi = size_range if size_range is not None else _SIZE_RANGES[name]
    if not (1 <= lo <= hi):
        raise DataError(f"invalid size range [{lo}, {hi}]")

    base = draw_base(rng)
    graphs: list[Graph] = []
    for i in range(count):
        stream = derive(base, i)
        n = int(stream.integers(lo, hi + 1))
        if name == "ego-surrogate":
            graphs.append(gen_ego_graph(n, stream))
        elif name == "com-mix":
            type_b = bool(stream.random() < 0.5)
            graphs.append(gen_community_graph(community_spec_for(name, n, type_b), stream))
        else:
            graphs.append(gen_community_graph(community_spec_for(name, n), stream))
    return graphs


def dataset_params(name: str, size_range: tuple[int, int] | None = None) -> dict:
    """Manifest-ready description of a named dataset's parameters."""
    lo, hi = size_range if size_range is not None else _SIZE_RANGES[name]
    params: dict = {"size_range": [lo, hi]}
    if name == "com-small":
        params.update(p_intra=[0.7, 0.7], p_inter=0.05)
    elif name == "com-mix":
        params.update(
            type_a_p_intra=[0.3, 0.3],
            type_b_p_intra=[0.4, 0.6],
            p_inter=0.05,
            type_ratio=0.5,
        )
    elif name == "com-attr":
        params.update(
            p_intra=[0.3, 0.3],
            p_inter=0.05,
            attr_dists=[[1.5, 0.75], [-0.5, 1.0]],
        )
    elif name == "ego-surrogate":
        params.update(p_peripheral=0.1, surrogate=True)
    return params


def split_dataset(
    graphs: list[Graph], ratio: float = 0.8, rng: np.random.Generator | None = None
) -> tuple[list[Graph], list[Graph]]:
    """Uniformly shuffle and split into (train, test) of sizes
    (floor(ratio * N), remainder)."""
    if not (0.0 < ratio < 1.0):
        raise DataError(f"split ratio must lie in (0, 1), got {ratio}")
    if len(graphs) < 2:
        raise DataError(f"need at least 2 graphs to split, got {len(graphs)}")
    if rng is None:
        raise DataError("split_dataset requires an rng")
    perm = rng.permutation(len(graphs))
    cut = int(ratio * len(graphs))
    train = [graphs[i] for i in perm[:cut]]
    test = [graphs[i] for i in perm[cut:]]
    return train, test
