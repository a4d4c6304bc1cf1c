"""The optimization loop: batching, schedule, checkpointing, run logging.

Each step samples graphs uniformly with replacement, draws a fresh BFS
order per graph (a data-augmentation reading of the sum over orders),
encodes and pads, then takes one optimizer step at the scheduled learning
rate. Single-threaded runs are bit-deterministic given (seed, config), and
checkpoints carry the rng state so a resumed run continues the exact
trajectory of an uninterrupted one.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field, asdict

import numpy as np
import torch

from .errors import BandwidthError, DataError, NumericError
from .graphs import Graph, bfs_order, encode_sequence, estimate_bandwidth
from .graphio import load_graphs
from .model import ModelConfig, collate, elbo_loss, forward_teacher_forced, init_model
from .nn import (
    adam_step,
    load_checkpoint,
    rng_from_state,
    rng_state_of,
    save_checkpoint,
)
from .rng import derive

METRICS_HEADER = "step\tlr\ttotal\tbce\tmse\tkl"


@dataclass(frozen=True)
class TrainConfig:
    steps: int
    dataset_path: str
    model: ModelConfig
    out_dir: str
    batch_size: int = 32
    lr0: float = 0.001
    decay_factor: float = 0.3
    decay_steps: tuple[int, ...] = (12800, 32000)
    seed: int = 0
    log_every: int = 100
    checkpoint_every: int = 1000
    bandwidth_samples: int = 10
    order_retries: int = 100
    fixed_order: bool = False

    def __post_init__(self):
        if self.steps < 1:
            raise DataError(f"steps must be positive, got {self.steps}")
        if self.batch_size < 1:
            raise DataError(f"batch_size must be positive, got {self.batch_size}")
        steps = tuple(self.decay_steps)
        if list(steps) != sorted(steps):
            raise DataError(f"decay_steps must be ascending, got {steps}")
        object.__setattr__(self, "decay_steps", steps)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["model"] = self.model.to_dict()
        d["decay_steps"] = list(self.decay_steps)
        return d


def lr_at_step(cfg: TrainConfig, step: int) -> float:
    """lr0 scaled by decay_factor once per decay boundary at or below step."""
    if step < 0:
        raise DataError(f"step must be >= 0, got {step}")
    decays = sum(1 for s in cfg.decay_steps if s <= step)
    return cfg.lr0 * cfg.decay_factor**decays


@dataclass
class TrainResult:
    checkpoint_path: str
    metrics_path: str
    history: list[dict] = field(default_factory=list)


def _encode_fresh(
    g: Graph, m: int, rng: np.random.Generator, retries: int
):
    """Encode g under a freshly drawn BFS order, redrawing (bounded) when an
    order exceeds the model's bandwidth."""
    for _ in range(retries):
        order = bfs_order(g, rng)
        try:
            return encode_sequence(g, order, m)
        except BandwidthError:
            continue
    raise DataError(
        f"no BFS order of a {g.n}-node graph fit bandwidth m={m} "
        f"within {retries} draws; re-estimate the dataset bandwidth"
    )


def _format_row(step: int, lr: float, total: float, bce: float, mse: float, kl: float) -> str:
    return f"{step}\t{lr!r}\t{total!r}\t{bce!r}\t{mse!r}\t{kl!r}"


def train_run(cfg: TrainConfig, resume_from: str | None = None) -> TrainResult:
    """Run (or resume) one training job; returns paths and the logged rows.

    The dataset file is the training split. The model's m must cover the
    split's estimated bandwidth. A non-finite loss aborts with a diagnostic
    checkpoint and the offending step number.
    """
    torch.set_num_threads(1)
    graphs = load_graphs(cfg.dataset_path)
    if not graphs:
        raise DataError(f"dataset {cfg.dataset_path!r} holds no graphs")
    ks = {g.k for g in graphs}
    if len(ks) != 1:
        raise DataError(f"dataset mixes attribute dimensions {sorted(ks)}")
    if ks.pop() != cfg.model.k:
        raise DataError(
            f"dataset attribute dimension does not match model k={cfg.model.k}"
        )

    est = estimate_bandwidth(graphs, cfg.bandwidth_samples, derive(cfg.seed, 2))
    if cfg.model.m < est:
        raise DataError(
            f"model bandwidth m={cfg.model.m} is below the training split's "
            f"estimate {est}"
        )

    os.makedirs(cfg.out_dir, exist_ok=True)
    metrics_path = os.path.join(cfg.out_dir, "metrics.tsv")
    final_path = os.path.join(cfg.out_dir, "final.ckpt")
    config_echo = cfg.model.to_dict()
    extra = {"max_nodes": max(g.n for g in graphs)}

    if resume_from is not None:
        ck = load_checkpoint(resume_from)
        if ck.config != config_echo:
            raise DataError("checkpoint model config does not match the run's")
        params = ck.params
        rng = rng_from_state(ck.rng_state)
        start_step = ck.step
        mode = "a"
    else:
        params = init_model(cfg.model, derive(cfg.seed, 0))
        rng = derive(cfg.seed, 1)
        start_step = 0
        mode = "w"

    fixed_orders = None
    if cfg.fixed_order:
        order_rng = derive(cfg.seed, 3)
        fixed_orders = [
            _encode_fresh(g, cfg.model.m, order_rng, cfg.order_retries) for g in graphs
        ]

    history: list[dict] = []
    with open(metrics_path, mode, encoding="utf-8") as log:
        if mode == "w":
            log.write(METRICS_HEADER + "\n")
        for step in range(start_step, cfg.steps):
            lr = lr_at_step(cfg, step)
            idx = rng.integers(0, len(graphs), size=cfg.batch_size)
            if fixed_orders is not None:
                seqs = [fixed_orders[i] for i in idx]
            else:
                seqs = [
                    _encode_fresh(graphs[i], cfg.model.m, rng, cfg.order_retries)
                    for i in idx
                ]
            batch = collate(seqs, cfg.model.m)
            outputs = forward_teacher_forced(params, cfg.model, batch, rng)
            total, bce, mse, kl = elbo_loss(outputs, batch, cfg.model.beta)

            values = [float(t.detach()) for t in (total, bce, mse, kl)]
            if not all(math.isfinite(v) for v in values):
                diag = os.path.join(cfg.out_dir, f"diagnostic_step{step + 1}.ckpt")
                save_checkpoint(
                    diag, params, config_echo, rng_state_of(rng), step,
                    extra={"reason": "non-finite loss"},
                )
                raise NumericError(
                    f"non-finite loss at step {step + 1} "
                    f"(total={values[0]!r}); diagnostic checkpoint at {diag}"
                )

            params.zero_grad()
            total.backward()
            adam_step(params, params.grads(), lr)

            done = step + 1
            if done % cfg.log_every == 0 or done == cfg.steps:
                row = {
                    "step": done, "lr": lr, "total": values[0],
                    "bce": values[1], "mse": values[2], "kl": values[3],
                }
                history.append(row)
                log.write(_format_row(done, lr, *values) + "\n")
            if done % cfg.checkpoint_every == 0 and done != cfg.steps:
                save_checkpoint(
                    os.path.join(cfg.out_dir, f"ckpt_{done:06d}.ckpt"),
                    params, config_echo, rng_state_of(rng), done, extra=extra,
                )

    save_checkpoint(
        final_path, params, config_echo, rng_state_of(rng), cfg.steps, extra=extra
    )
    return TrainResult(
        checkpoint_path=final_path, metrics_path=metrics_path, history=history
    )
