"""The sequence model and its variants.

Three variants share one body: a stacked node-level GRU summarizing the
partially built graph, an edge-level GRU decoding each node's adjacency row
one slot at a time, and (when attributes are on) an attribute decoder.

- graphvrnn: per-step latent z_i with a learned prior read from h_{i-1}
  and a posterior read from h_i (one shared RNN pass, indices offset).
- graphvrnn-nlp: same posterior, prior fixed at the standard normal.
- graphrnn: deterministic baseline, no latent machinery at all.

Prediction step i (1-based) emits node i's adjacency row (width
min(i-1, m)) and its attributes; one trailing step per sequence carries the
all-zero end-of-sequence row. The latent is injected only at its own step;
earlier latents reach the future through the recurrent state.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict

import numpy as np
import torch

from .errors import DataError
from .graphs import BfsSequence
from .nn import (
    GaussianParams,
    ParameterSet,
    as_tensor,
    bce_with_logits,
    gru_stack_step,
    kl_diag_gaussians,
    mlp_forward,
    reparameterize,
)

VARIANTS = ("graphvrnn", "graphvrnn-nlp", "graphrnn")

MLP_DEPTH = 3


@dataclass(frozen=True)
class ModelConfig:
    variant: str
    m: int
    node_hidden: int = 128
    edge_hidden: int = 16
    node_layers: int = 4
    edge_layers: int = 4
    d_z: int = 64
    k: int = 0
    beta: float = 1.0

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise DataError(f"unknown variant {self.variant!r}; expected {VARIANTS}")
        for name in ("m", "node_hidden", "edge_hidden", "node_layers", "edge_layers", "d_z"):
            if getattr(self, name) < 1:
                raise DataError(f"{name} must be positive, got {getattr(self, name)}")
        if self.k < 0:
            raise DataError(f"k must be >= 0, got {self.k}")
        if self.beta < 0:
            raise DataError(f"beta must be >= 0, got {self.beta}")

    @property
    def latent(self) -> bool:
        """Whether the variant carries z at all."""
        return self.variant != "graphrnn"

    @property
    def learned_prior(self) -> bool:
        return self.variant == "graphvrnn"

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ModelConfig":
        return cls(**d)


def default_node_hidden(max_nodes: int) -> int:
    """128, halved to 64 for small-graph datasets (max |V| <= 20)."""
    return 64 if max_nodes <= 20 else 128


def _uniform(rng: np.random.Generator, shape: tuple[int, ...], bound: float) -> np.ndarray:
    return rng.uniform(-bound, bound, size=shape)


def _add_gru_stack(
    params: ParameterSet,
    rng: np.random.Generator,
    prefix: str,
    input_dim: int,
    hidden: int,
    layers: int,
) -> None:
    bound = 1.0 / np.sqrt(hidden)
    for layer in range(layers):
        in_dim = input_dim if layer == 0 else hidden
        params.add(f"{prefix}.layer{layer}.w_ih", _uniform(rng, (3 * hidden, in_dim), bound))
        params.add(f"{prefix}.layer{layer}.w_hh", _uniform(rng, (3 * hidden, hidden), bound))
        params.add(f"{prefix}.layer{layer}.b_ih", _uniform(rng, (3 * hidden,), bound))
        params.add(f"{prefix}.layer{layer}.b_hh", _uniform(rng, (3 * hidden,), bound))


def _add_linear(
    params: ParameterSet,
    rng: np.random.Generator,
    prefix: str,
    in_dim: int,
    out_dim: int,
) -> None:
    bound = 1.0 / np.sqrt(in_dim)
    params.add(f"{prefix}.weight", _uniform(rng, (out_dim, in_dim), bound))
    params.add(f"{prefix}.bias", _uniform(rng, (out_dim,), bound))


def _add_mlp(
    params: ParameterSet,
    rng: np.random.Generator,
    prefix: str,
    in_dim: int,
    hidden: int,
    out_dim: int,
) -> None:
    dims = [in_dim] + [hidden] * (MLP_DEPTH - 1) + [out_dim]
    for i in range(MLP_DEPTH):
        _add_linear(params, rng, f"{prefix}.layer{i}", dims[i], dims[i + 1])


def init_model(config: ModelConfig, rng: np.random.Generator) -> ParameterSet:
    """Allocate and initialize every parameter the variant needs.

    Allocation order is fixed (it is both the rng draw order and the
    checkpoint blob order). z always sits first in concatenated inputs, so
    the deterministic variant's projections are exactly the z-free column
    blocks of the variational ones.
    """
    p = ParameterSet()
    m, k, H = config.m, config.k, config.node_hidden
    zdim = config.d_z if config.latent else 0

    p.add("node_rnn.start_token", np.zeros(m + k))
    _add_gru_stack(p, rng, "node_rnn", m + k, H, config.node_layers)
    if config.latent:
        _add_mlp(p, rng, "posterior", H, H, 2 * config.d_z)
    if config.learned_prior:
        _add_mlp(p, rng, "prior", H, H, 2 * config.d_z)
    _add_linear(p, rng, "edge_init", zdim + H, config.edge_layers * config.edge_hidden)
    p.add("edge_rnn.start_token", np.zeros(1))
    _add_gru_stack(p, rng, "edge_rnn", 1, config.edge_hidden, config.edge_layers)
    _add_linear(p, rng, "edge_head", config.edge_hidden, 1)
    if k > 0:
        _add_mlp(p, rng, "attr", zdim + H + m, H, k)
    return p


def _gru_layers(params: ParameterSet, prefix: str, layers: int):
    return [
        (
            params[f"{prefix}.layer{l}.w_ih"],
            params[f"{prefix}.layer{l}.w_hh"],
            params[f"{prefix}.layer{l}.b_ih"],
            params[f"{prefix}.layer{l}.b_hh"],
        )
        for l in range(layers)
    ]


def _mlp_layers(params: ParameterSet, prefix: str):
    return [
        (params[f"{prefix}.layer{i}.weight"], params[f"{prefix}.layer{i}.bias"])
        for i in range(MLP_DEPTH)
    ]


@dataclass
class PaddedBatch:
    """Teacher-forcing targets padded to a common length.

    Step j holds the node at BFS position j: its adjacency row (j >= 1,
    width min(j, m)) and its attributes (j <= n-1; step 0 is the first
    node, attributes only). Step n is the all-zero end-of-sequence row, so
    a graph with n nodes occupies steps 0..n. s_target rows are zero-padded
    to width m; masks mark real slots/steps."""

    s_target: torch.Tensor          # (B, L, m)
    x_target: torch.Tensor | None   # (B, L, k)
    step_mask: torch.Tensor         # (B, L) bool
    edge_mask: torch.Tensor         # (B, L, m) bool
    attr_mask: torch.Tensor | None  # (B, L) bool
    sizes: torch.Tensor             # (B,) node counts

    @property
    def batch_size(self) -> int:
        return self.s_target.shape[0]

    @property
    def length(self) -> int:
        return self.s_target.shape[1]


def collate(seqs: list[BfsSequence], m: int) -> PaddedBatch:
    """Pad a batch of sequences to rows of width m and a common step count."""
    if not seqs:
        raise DataError("cannot collate an empty batch")
    ks = {s.k for s in seqs}
    if len(ks) != 1:
        raise DataError(f"mixed attribute dimensions in one batch: {sorted(ks)}")
    k = ks.pop()
    if any(s.m > m for s in seqs):
        raise DataError("sequence bandwidth exceeds the model's m")
    B = len(seqs)
    L = max(s.n for s in seqs) + 1
    s_target = np.zeros((B, L, m), dtype=np.float64)
    x_target = np.zeros((B, L, k), dtype=np.float64) if k else None
    step_mask = np.zeros((B, L), dtype=bool)
    edge_mask = np.zeros((B, L, m), dtype=bool)
    attr_mask = np.zeros((B, L), dtype=bool) if k else None
    sizes = np.zeros(B, dtype=np.int64)
    for b, seq in enumerate(seqs):
        n = seq.n
        sizes[b] = n
        step_mask[b, : n + 1] = True
        for j in range(1, n + 1):
            width = min(j, m)
            edge_mask[b, j, :width] = True
            if j < n:
                row = seq.s_rows[j - 1]
                s_target[b, j, : row.shape[0]] = row
        if k:
            x_target[b, :n] = seq.x_rows
            attr_mask[b, :n] = True
    return PaddedBatch(
        s_target=as_tensor(s_target),
        x_target=None if x_target is None else as_tensor(x_target),
        step_mask=torch.as_tensor(step_mask),
        edge_mask=torch.as_tensor(edge_mask),
        attr_mask=None if attr_mask is None else torch.as_tensor(attr_mask),
        sizes=torch.as_tensor(sizes),
    )


@dataclass
class StepOutputs:
    """Per-step model outputs over a padded batch.

    q/p are present only for variational variants; h_prev[:, j] is the
    node-RNN summary the step-j decoders consumed."""

    edge_logits: torch.Tensor            # (B, L, m)
    attr_preds: torch.Tensor | None      # (B, L, k)
    q_params: GaussianParams | None
    p_params: GaussianParams | None
    z: torch.Tensor | None               # (B, L, d_z)
    h_prev: torch.Tensor                 # (B, L, H)


def forward_teacher_forced(
    params: ParameterSet,
    config: ModelConfig,
    batch: PaddedBatch,
    rng: np.random.Generator | None = None,
    eps: torch.Tensor | None = None,
    force_zero_latent: bool = False,
) -> StepOutputs:
    """One teacher-forced pass over a padded batch.

    A single node-RNN pass yields h_0..h_L; step j's posterior reads
    h_{j+1} (history through its own row) while its prior and decoders read
    h_j. Edge slots are teacher-forced on ground-truth previous bits; the
    attribute decoder sees the ground-truth row. eps overrides the latent
    noise draw (shape (B, L, d_z)); force_zero_latent is a test hook that
    replaces q, p, and z with zero constants, reducing the reconstruction
    path to the deterministic variant's.
    """
    B, L, m = batch.s_target.shape
    H = config.node_hidden
    k = config.k
    if (batch.x_target is None) != (k == 0):
        raise DataError("batch attribute block does not match config.k")

    node_layers = _gru_layers(params, "node_rnn", config.node_layers)
    start = params["node_rnn.start_token"].expand(B, m + k)
    if k:
        seq_in = torch.cat([batch.s_target, batch.x_target], dim=-1)
    else:
        seq_in = batch.s_target

    state = [torch.zeros(B, H, dtype=start.dtype) for _ in range(config.node_layers)]
    hs = []
    out, state = gru_stack_step(start, state, node_layers)
    hs.append(out)
    for t in range(L):
        out, state = gru_stack_step(seq_in[:, t], state, node_layers)
        hs.append(out)
    h = torch.stack(hs, dim=1)        # (B, L + 1, H)
    h_prev = h[:, :L]
    h_post = h[:, 1:]

    q = p = z = None
    if config.latent and not force_zero_latent:
        q_out = mlp_forward(h_post, _mlp_layers(params, "posterior"))
        q = GaussianParams(*q_out.split(config.d_z, dim=-1))
        if config.learned_prior:
            p_out = mlp_forward(h_prev, _mlp_layers(params, "prior"))
            p = GaussianParams(*p_out.split(config.d_z, dim=-1))
        else:
            zero = torch.zeros(B, L, config.d_z, dtype=h.dtype)
            p = GaussianParams(zero, zero.clone())
        if eps is None:
            if rng is None:
                raise DataError("forward pass needs an rng (or explicit eps)")
            eps = as_tensor(rng.standard_normal((B, L, config.d_z)), h.dtype)
        z = reparameterize(q, eps=eps)
    elif config.latent and force_zero_latent:
        zero = torch.zeros(B, L, config.d_z, dtype=h.dtype)
        q = GaussianParams(zero, zero.clone())
        p = GaussianParams(zero.clone(), zero.clone())
        z = zero.clone()

    ctx = torch.cat([z, h_prev], dim=-1) if config.latent else h_prev
    flat_init = ctx.reshape(B * L, -1) @ params["edge_init.weight"].T
    flat_init = flat_init + params["edge_init.bias"]
    edge_state = [
        s.reshape(B * L, config.edge_hidden)
        for s in flat_init.reshape(B * L, config.edge_layers, config.edge_hidden).unbind(1)
    ]
    edge_layers = _gru_layers(params, "edge_rnn", config.edge_layers)
    sos = params["edge_rnn.start_token"].expand(B * L, 1)
    prev_bits = batch.s_target.reshape(B * L, m)
    logits = []
    slot_in = sos
    for s in range(m):
        out, edge_state = gru_stack_step(slot_in, edge_state, edge_layers)
        logit = out @ params["edge_head.weight"].T + params["edge_head.bias"]
        logits.append(logit)
        if s + 1 < m:
            slot_in = prev_bits[:, s : s + 1]
    edge_logits = torch.cat(logits, dim=-1).reshape(B, L, m)

    attr_preds = None
    if k:
        pieces = [h_prev, batch.s_target]
        if config.latent:
            pieces.insert(0, z)
        attr_in = torch.cat(pieces, dim=-1)
        attr_preds = mlp_forward(attr_in, _mlp_layers(params, "attr"))

    return StepOutputs(
        edge_logits=edge_logits,
        attr_preds=attr_preds,
        q_params=q,
        p_params=p,
        z=z,
        h_prev=h_prev,
    )


def elbo_loss(
    outputs: StepOutputs, targets: PaddedBatch, beta: float
) -> tuple[torch.Tensor, torch.Tensor, torch.Tensor, torch.Tensor]:
    """Minimization form of the negative bound, split into its terms.

    Per sequence: each step contributes its slot-mean binary cross-entropy
    and its attribute squared error, summed over steps; the KL between
    posterior and prior is likewise summed over unmasked steps. All three
    terms are then averaged over the batch and combined as
    total = bce + mse + beta * kl. The deterministic variant's kl is 0.
    """
    edge_mask = targets.edge_mask.to(outputs.edge_logits.dtype)
    elem = bce_with_logits(outputs.edge_logits, targets.s_target) * edge_mask
    widths = edge_mask.sum(dim=-1)
    step_bce = elem.sum(dim=-1) / widths.clamp(min=1.0)
    bce_term = step_bce.sum(dim=-1).mean()

    if outputs.attr_preds is not None:
        attr_mask = targets.attr_mask.to(elem.dtype)
        sq = ((outputs.attr_preds - targets.x_target) ** 2).mean(dim=-1)
        mse_term = (sq * attr_mask).sum(dim=-1).mean()
    else:
        mse_term = torch.zeros((), dtype=elem.dtype)

    if outputs.q_params is not None:
        kl = kl_diag_gaussians(outputs.q_params, outputs.p_params)
        kl_term = (kl * targets.step_mask.to(kl.dtype)).sum(dim=-1).mean()
    else:
        kl_term = torch.zeros((), dtype=elem.dtype)

    total = bce_term + mse_term + beta * kl_term
    return total, bce_term, mse_term, kl_term


@dataclass
class NodeState:
    """Generation-time node-RNN state: per-layer hiddens plus the last
    top-layer output."""

    layers: list[torch.Tensor]
    output: torch.Tensor


def sample_step(
    params: ParameterSet,
    config: ModelConfig,
    state: NodeState | None,
    prev_s: np.ndarray | None,
    prev_x: np.ndarray | None,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray | None, NodeState]:
    """One generation step: advance the node RNN on the previous step's
    output, draw z from the step's prior, decode an adjacency row slot by
    slot (each slot conditioned on its own sampled bits), and emit
    attributes as the decoder mean.

    state=None marks the first step: the RNN consumes the learned start
    token and the emitted row is empty (the first node has no lookback).
    Row widths follow min(i - 1, m) as the step index i advances.
    """
    m, k, H = config.m, config.k, config.node_hidden
    node_layers = _gru_layers(params, "node_rnn", config.node_layers)
    with torch.no_grad():
        if state is None:
            x_in = params["node_rnn.start_token"]
            layer_state = [
                torch.zeros(H, dtype=x_in.dtype) for _ in range(config.node_layers)
            ]
            width = 0
        else:
            padded = np.zeros(m + k, dtype=np.float64)
            padded[: prev_s.shape[0]] = prev_s
            if k:
                padded[m:] = prev_x
            x_in = as_tensor(padded)
            layer_state = state.layers
            width = min(prev_s.shape[0] + 1, m)
        h, new_layers = gru_stack_step(x_in, layer_state, node_layers)

        z = None
        if config.latent:
            if config.learned_prior:
                p_out = mlp_forward(h, _mlp_layers(params, "prior"))
                prior = GaussianParams(*p_out.split(config.d_z, dim=-1))
                z = reparameterize(prior, rng)
            else:
                z = as_tensor(rng.standard_normal(config.d_z), h.dtype)

        s_row = np.zeros(width, dtype=np.uint8)
        if width > 0:
            ctx = torch.cat([z, h], dim=-1) if config.latent else h
            init = ctx @ params["edge_init.weight"].T + params["edge_init.bias"]
            edge_state = list(init.reshape(config.edge_layers, config.edge_hidden).unbind(0))
            edge_layers = _gru_layers(params, "edge_rnn", config.edge_layers)
            slot_in = params["edge_rnn.start_token"]
            for s in range(width):
                out, edge_state = gru_stack_step(slot_in, edge_state, edge_layers)
                logit = out @ params["edge_head.weight"].T + params["edge_head.bias"]
                prob = torch.sigmoid(logit).item()
                bit = 1 if rng.random() < prob else 0
                s_row[s] = bit
                slot_in = torch.tensor([float(bit)], dtype=h.dtype)

        x_row = None
        if k:
            padded_row = np.zeros(m, dtype=np.float64)
            padded_row[:width] = s_row
            pieces = [h, as_tensor(padded_row)]
            if config.latent:
                pieces.insert(0, z)
            attr_in = torch.cat(pieces, dim=-1)
            x_row = mlp_forward(attr_in, _mlp_layers(params, "attr")).numpy().copy()

    return s_row, x_row, NodeState(layers=new_layers, output=h)
