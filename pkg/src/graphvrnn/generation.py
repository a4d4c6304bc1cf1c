"""Autoregressive sampling of whole graphs from a trained checkpoint.

Generation walks sample_step from the learned start token, appending one
node per step, and stops at the first all-zero adjacency row (the next
node would be disconnected) or at the hard node cap. The accumulated rows
decode through the same codec training used, so every output is connected
and exactly representable.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, asdict

import numpy as np

from .errors import DataError
from .graphs import BfsSequence, Graph, decode_graph
from .model import ModelConfig, sample_step
from .nn import Checkpoint
from .rng import derive


@dataclass(frozen=True)
class GenerationSpec:
    count: int
    max_n: int
    seed: int = 0

    def __post_init__(self):
        if self.count < 1:
            raise DataError(f"count must be >= 1, got {self.count}")
        if self.max_n < 1:
            raise DataError(f"max_n must be >= 1, got {self.max_n}")


def generate_graph(
    checkpoint: Checkpoint, max_n: int, rng: np.random.Generator
) -> Graph:
    """Sample one graph (and attributes when the model has them)."""
    config = ModelConfig.from_dict(checkpoint.config)
    params = checkpoint.params
    rows: list[np.ndarray] = []
    xs: list[np.ndarray] = []

    state = None
    prev_s: np.ndarray | None = None
    prev_x: np.ndarray | None = None
    n = 0
    while n < max_n:
        s_row, x_row, state = sample_step(params, config, state, prev_s, prev_x, rng)
        if n >= 1 and not s_row.any():
            break
        n += 1
        if n >= 2:
            rows.append(s_row)
        if x_row is not None:
            xs.append(x_row)
        prev_s, prev_x = s_row, x_row

    seq = BfsSequence(
        n=n,
        m=config.m,
        s_rows=tuple(rows),
        x_rows=np.stack(xs) if xs else None,
    )
    return decode_graph(seq)


def checkpoint_digest(path) -> str:
    sha = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            sha.update(chunk)
    return sha.hexdigest()


def generate_set(
    checkpoint: Checkpoint,
    spec: GenerationSpec,
    out_path=None,
    checkpoint_path=None,
) -> list[Graph]:
    """count independent draws; graph j's stream derives from (seed, j), so
    it is the same graph whether drawn alone or within the set.

    With out_path the set is saved in graph-set format under a provenance
    manifest (generation spec, model config echo, checkpoint digest when
    its path is given).
    """
    graphs = [
        generate_graph(checkpoint, spec.max_n, derive(spec.seed, j))
        for j in range(spec.count)
    ]
    if out_path is not None:
        from .graphio import save_graphs

        manifest = {
            "generator": "model",
            "spec": asdict(spec),
            "model_config": checkpoint.config,
            "checkpoint_step": checkpoint.step,
        }
        if checkpoint_path is not None:
            manifest["checkpoint_sha256"] = checkpoint_digest(checkpoint_path)
        save_graphs(graphs, out_path, manifest)
    return graphs
