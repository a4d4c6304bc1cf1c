"""The differentiable compute layer.

Parameter storage, the recurrent/MLP forward operators, stochastic
reparameterization, losses, the optimizer, a finite-difference gradient
checker, and the byte-stable checkpoint container. torch supplies tensor
arithmetic and reverse-mode differentiation; every formula (gate equations,
stable BCE, KL, Adam) is written out here, and all tensors are float64
unless a caller explicitly downcasts. Randomness always enters as numpy
draws converted to tensors, never from torch's own generators.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
import torch

from .errors import FormatError, NumericError

DTYPE = torch.float64

LOGVAR_MIN = -10.0
LOGVAR_MAX = 10.0


def as_tensor(values: np.ndarray, dtype: torch.dtype = DTYPE) -> torch.Tensor:
    return torch.as_tensor(np.asarray(values), dtype=dtype)


class ParameterSet:
    """Named learnable tensors plus their optimizer state.

    Names are unique, shapes immutable after insertion; iteration follows
    insertion order, which is also the checkpoint blob order. First/second
    moments live here so a checkpoint restores optimization mid-flight.
    """

    def __init__(self, dtype: torch.dtype = DTYPE):
        self.dtype = dtype
        self._params: dict[str, torch.Tensor] = {}
        self._m: dict[str, torch.Tensor] = {}
        self._v: dict[str, torch.Tensor] = {}
        self.step_count = 0

    def add(self, name: str, values: np.ndarray) -> torch.Tensor:
        if name in self._params:
            raise ValueError(f"duplicate parameter name {name!r}")
        t = as_tensor(values, self.dtype).clone().requires_grad_(True)
        self._params[name] = t
        self._m[name] = torch.zeros_like(t, requires_grad=False)
        self._v[name] = torch.zeros_like(t, requires_grad=False)
        return t

    def __getitem__(self, name: str) -> torch.Tensor:
        return self._params[name]

    def __contains__(self, name: str) -> bool:
        return name in self._params

    def names(self) -> list[str]:
        return list(self._params)

    def items(self):
        return self._params.items()

    def moments(self, name: str) -> tuple[torch.Tensor, torch.Tensor]:
        return self._m[name], self._v[name]

    def zero_grad(self) -> None:
        for t in self._params.values():
            t.grad = None

    def grads(self) -> dict[str, torch.Tensor | None]:
        return {name: t.grad for name, t in self._params.items()}

    def size(self) -> int:
        return sum(t.numel() for t in self._params.values())


@dataclass(frozen=True)
class GaussianParams:
    """Diagonal Gaussian as (mean, log-variance) over the last axis.

    logvar is clamped to [-10, 10] at construction; the clamp is part of
    the model, keeping KL and standard deviations finite.
    """

    mean: torch.Tensor
    logvar: torch.Tensor

    def __post_init__(self):
        if self.mean.shape != self.logvar.shape:
            raise ValueError(
                f"mean and logvar shapes differ: {tuple(self.mean.shape)} "
                f"vs {tuple(self.logvar.shape)}"
            )
        object.__setattr__(
            self, "logvar", torch.clamp(self.logvar, LOGVAR_MIN, LOGVAR_MAX)
        )

    @property
    def dim(self) -> int:
        return self.mean.shape[-1]


def gru_stack_step(
    x: torch.Tensor,
    state: list[torch.Tensor],
    layers: list[tuple[torch.Tensor, torch.Tensor, torch.Tensor, torch.Tensor]],
) -> tuple[torch.Tensor, list[torch.Tensor]]:
    """One time step of a stacked GRU.

    layers[l] = (w_ih, w_hh, b_ih, b_hh) with gates packed (reset, update,
    candidate) along the first axis; each layer's hidden feeds the next
    layer's input and the output is the top layer's new hidden. x is
    (..., in), state[l] is (..., H).
    """
    if len(state) != len(layers):
        raise ValueError(f"{len(state)} state vectors for {len(layers)} layers")
    new_state: list[torch.Tensor] = []
    inp = x
    for h, (w_ih, w_hh, b_ih, b_hh) in zip(state, layers):
        hidden = w_hh.shape[1]
        if inp.shape[-1] != w_ih.shape[1] or h.shape[-1] != hidden:
            raise ValueError(
                f"gru layer expects input {w_ih.shape[1]}, hidden {hidden}; "
                f"got input {inp.shape[-1]}, hidden {h.shape[-1]}"
            )
        gi = inp @ w_ih.T + b_ih
        gh = h @ w_hh.T + b_hh
        i_r, i_z, i_n = gi.split(hidden, dim=-1)
        h_r, h_z, h_n = gh.split(hidden, dim=-1)
        r = torch.sigmoid(i_r + h_r)
        z = torch.sigmoid(i_z + h_z)
        n = torch.tanh(i_n + r * h_n)
        h_new = (1.0 - z) * n + z * h
        new_state.append(h_new)
        inp = h_new
    return inp, new_state


def mlp_forward(
    x: torch.Tensor, layers: list[tuple[torch.Tensor, torch.Tensor]]
) -> torch.Tensor:
    """Affine chain with ReLU on hidden layers and a linear output head."""
    out = x
    last = len(layers) - 1
    for i, (w, b) in enumerate(layers):
        if out.shape[-1] != w.shape[1]:
            raise ValueError(
                f"mlp layer {i} expects input {w.shape[1]}, got {out.shape[-1]}"
            )
        out = out @ w.T + b
        if i != last:
            out = torch.relu(out)
    return out


def reparameterize(
    g: GaussianParams,
    rng: np.random.Generator | None = None,
    eps: torch.Tensor | None = None,
) -> torch.Tensor:
    """z = mean + exp(logvar / 2) * eps with eps ~ N(0, I) drawn from rng.

    Gradients flow to mean and logvar only. Passing eps explicitly freezes
    the noise (gradient checks, step-by-step comparisons).
    """
    if eps is None:
        if rng is None:
            raise ValueError("reparameterize needs an rng when eps is not given")
        eps = as_tensor(rng.standard_normal(tuple(g.mean.shape)), g.mean.dtype)
    return g.mean + torch.exp(0.5 * g.logvar) * eps


def kl_diag_gaussians(q: GaussianParams, p: GaussianParams) -> torch.Tensor:
    """Closed-form KL(q || p) between diagonal Gaussians, summed over the
    last axis; leading axes broadcast through. Always >= 0."""
    if q.mean.shape[-1] != p.mean.shape[-1]:
        raise ValueError(
            f"dimension mismatch: q has {q.mean.shape[-1]}, p has {p.mean.shape[-1]}"
        )
    diff = q.mean - p.mean
    return 0.5 * torch.sum(
        torch.exp(q.logvar - p.logvar)
        + diff * diff * torch.exp(-p.logvar)
        - 1.0
        + (p.logvar - q.logvar),
        dim=-1,
    )


def bce_with_logits(logits: torch.Tensor, targets: torch.Tensor) -> torch.Tensor:
    """Elementwise binary cross-entropy on logits in the stable form
    max(l, 0) - l*t + log(1 + exp(-|l|))."""
    return (
        torch.clamp(logits, min=0.0)
        - logits * targets
        + torch.log1p(torch.exp(-torch.abs(logits)))
    )


def recon_losses(
    edge_logits: torch.Tensor,
    edge_targets: torch.Tensor,
    attr_preds: torch.Tensor | None,
    attr_targets: torch.Tensor | None,
    edge_mask: torch.Tensor | None = None,
    attr_mask: torch.Tensor | None = None,
) -> tuple[torch.Tensor, torch.Tensor]:
    """(bce, mse): means over valid (unmasked) edge slots / attribute slots.

    Masks are boolean with the same shape as their term (attr_mask may omit
    the trailing attribute axis). attr_preds None means no attribute head;
    the mse term is then exactly zero.
    """
    if edge_logits.shape != edge_targets.shape:
        raise ValueError(
            f"edge shapes differ: {tuple(edge_logits.shape)} vs "
            f"{tuple(edge_targets.shape)}"
        )
    elem = bce_with_logits(edge_logits, edge_targets)
    if edge_mask is None:
        count = elem.numel()
        total = elem.sum()
    else:
        count = int(edge_mask.sum())
        total = (elem * edge_mask).sum()
    if count == 0:
        raise ValueError("all edge slots are padded; the bce mean is undefined")
    bce = total / count

    if attr_preds is None:
        return bce, torch.zeros((), dtype=edge_logits.dtype)
    if attr_targets is None or attr_preds.shape != attr_targets.shape:
        raise ValueError("attribute predictions and targets must share a shape")
    sq = (attr_preds - attr_targets) ** 2
    if attr_mask is None:
        a_count = sq.numel()
        a_total = sq.sum()
    else:
        if attr_mask.dim() == sq.dim() - 1:
            attr_mask = attr_mask.unsqueeze(-1).expand_as(sq)
        a_count = int(attr_mask.sum())
        a_total = (sq * attr_mask).sum()
    if a_count == 0:
        raise ValueError("all attribute slots are padded; the mse mean is undefined")
    return bce, a_total / a_count


def adam_step(
    params: ParameterSet,
    grads: dict[str, torch.Tensor | None],
    lr: float,
    beta1: float = 0.9,
    beta2: float = 0.999,
    eps: float = 1e-8,
) -> None:
    """One bias-corrected adaptive-moment update over every parameter.

    A missing or None gradient counts as zero (its moments still decay).
    Non-finite gradients abort, naming the parameter.
    """
    params.step_count += 1
    t = params.step_count
    c1 = 1.0 - beta1**t
    c2 = 1.0 - beta2**t
    with torch.no_grad():
        for name, p in params.items():
            g = grads.get(name)
            if g is None:
                g = torch.zeros_like(p)
            elif not torch.isfinite(g).all():
                raise NumericError(f"non-finite gradient for parameter {name!r}")
            m, v = params.moments(name)
            m.mul_(beta1).add_(g, alpha=1.0 - beta1)
            v.mul_(beta2).addcmul_(g, g, value=1.0 - beta2)
            p.sub_(lr * (m / c1) / (torch.sqrt(v / c2) + eps))


def gradient_check(
    loss_fn,
    params: ParameterSet,
    probe_count: int,
    rng: np.random.Generator,
    step: float = 1e-4,
) -> float:
    """Max relative error between reverse-mode gradients and central finite
    differences on randomly probed coordinates.

    loss_fn() must be deterministic (noise frozen by the caller). The
    relative error uses denominator max(|grad|, |fd|, 1e-3), so coordinates
    whose gradients sit below the finite-difference noise floor are compared
    absolutely at that scale.
    """
    params.zero_grad()
    loss = loss_fn()
    loss.backward()
    analytic = {
        name: (t.grad.detach().clone() if t.grad is not None else torch.zeros_like(t))
        for name, t in params.items()
    }

    coords: list[tuple[str, int]] = []
    for name, t in params.items():
        coords.extend((name, i) for i in range(t.numel()))
    if probe_count < len(coords):
        picked = rng.choice(len(coords), size=probe_count, replace=False)
        probes = [coords[int(i)] for i in picked]
    else:
        probes = coords

    worst = 0.0
    with torch.no_grad():
        for name, idx in probes:
            flat = params[name].view(-1)
            original = flat[idx].item()
            flat[idx] = original + step
            plus = float(loss_fn())
            flat[idx] = original - step
            minus = float(loss_fn())
            flat[idx] = original
            fd = (plus - minus) / (2.0 * step)
            a = float(analytic[name].view(-1)[idx])
            rel = abs(a - fd) / max(abs(a), abs(fd), 1e-3)
            if rel > worst:
                worst = rel
    return worst


CHECKPOINT_MAGIC = "graphvrnn-checkpoint/1"


@dataclass
class Checkpoint:
    """A loaded checkpoint: parameters with optimizer state, the model
    config echo, the training stream's rng state, and the step count."""

    params: ParameterSet
    config: dict
    rng_state: dict | None
    step: int
    extra: dict = field(default_factory=dict)


def save_checkpoint(
    path,
    params: ParameterSet,
    config: dict,
    rng_state: dict | None,
    step: int,
    extra: dict | None = None,
) -> None:
    """Write a byte-stable checkpoint: magic line, canonical JSON header,
    then little-endian float64 blobs (values, first moment, second moment)
    per parameter in declaration order."""
    names = params.names()
    header = {
        "adam_step_count": params.step_count,
        "config": config,
        "extra": extra or {},
        "params": [
            {"name": n, "shape": list(params[n].shape)} for n in names
        ],
        "rng": rng_state,
        "step": step,
    }
    header_line = json.dumps(header, separators=(",", ":"), sort_keys=True)
    with open(path, "wb") as fh:
        fh.write((CHECKPOINT_MAGIC + "\n").encode("utf-8"))
        fh.write((header_line + "\n").encode("utf-8"))
        for n in names:
            m, v = params.moments(n)
            for t in (params[n], m, v):
                arr = t.detach().cpu().contiguous().to(torch.float64).numpy()
                fh.write(arr.astype("<f8", copy=False).tobytes())


def load_checkpoint(path) -> Checkpoint:
    with open(path, "rb") as fh:
        magic = fh.readline().decode("utf-8").rstrip("\n")
        if magic != CHECKPOINT_MAGIC:
            raise FormatError(f"not a checkpoint file (magic {magic!r})")
        try:
            header = json.loads(fh.readline().decode("utf-8"))
        except json.JSONDecodeError as exc:
            raise FormatError(f"corrupt checkpoint header ({exc})") from exc
        params = ParameterSet()
        params.step_count = int(header["adam_step_count"])
        for meta in header["params"]:
            name, shape = meta["name"], tuple(meta["shape"])
            count = int(np.prod(shape)) if shape else 1
            blocks = []
            for _ in range(3):
                raw = fh.read(count * 8)
                if len(raw) != count * 8:
                    raise FormatError(
                        f"checkpoint truncated inside parameter {name!r}"
                    )
                blocks.append(
                    np.frombuffer(raw, dtype="<f8").reshape(shape).copy()
                )
            params.add(name, blocks[0])
            m, v = params.moments(name)
            m.copy_(as_tensor(blocks[1]))
            v.copy_(as_tensor(blocks[2]))
    return Checkpoint(
        params=params,
        config=header["config"],
        rng_state=header["rng"],
        step=int(header["step"]),
        extra=header.get("extra", {}),
    )


def rng_state_of(rng: np.random.Generator) -> dict:
    return rng.bit_generator.state


def rng_from_state(state: dict) -> np.random.Generator:
    bg = np.random.PCG64()
    bg.state = state
    return np.random.Generator(bg)
