"""Command-line workflow around the library.

Subcommands: dataset, train, generate, eval, gradcheck, bench. Each command
that writes outputs leaves exactly one manifest.json in its output
directory recording the merged configuration, the seed, the tool version,
sha256 digests of its input files, and start/finish timestamps, so the run
is reproducible from the manifest alone. A failed run leaves an INCOMPLETE
marker next to whatever partial outputs exist.

Configuration: flags override a JSON config file (--config), which
overrides built-in defaults; the merged result is what the manifest stores.

Exit codes: 0 success, 1 usage or configuration problems, 2 data errors,
3 numeric failures. Errors print one machine-parseable JSON line to stderr.
"""

from __future__ import annotations

import contextlib
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import click
import numpy as np

from . import __version__
from .datasets import DATASET_NAMES, dataset_params, gen_dataset, split_dataset
from .errors import DataError, GraphVrnnError, NumericError
from .evaluation import evaluate, pooled_attributes
from .generation import GenerationSpec, checkpoint_digest, generate_set
from .graphio import load_graphs, save_graphs
from .graphs import Graph, bfs_order, encode_sequence, estimate_bandwidth
from .model import (
    ModelConfig,
    VARIANTS,
    collate,
    default_node_hidden,
    elbo_loss,
    forward_teacher_forced,
    init_model,
)
from .nn import as_tensor, gradient_check, load_checkpoint
from .reporting import (
    average_reports,
    render_bench_figures,
    render_eval_figures,
    write_bench_table,
    write_eval_report,
)
from .rng import derive, derive_seed
from .training import TrainConfig, train_run

GRADCHECK_THRESHOLD = 1e-3

_DATASET_DEFAULTS = {
    "count": None,
    "seed": 0,
    "size_min": None,
    "size_max": None,
    "split": 0.8,
}

_TRAIN_DEFAULTS = {
    "variant": "graphvrnn",
    "preset": "desk",
    "steps": None,
    "seed": 0,
    "beta": 1.0,
    "m": None,
    "node_hidden": None,
    "edge_hidden": 16,
    "node_layers": 4,
    "edge_layers": 4,
    "d_z": 64,
    "batch_size": 32,
    "lr": 0.001,
    "log_every": 100,
    "checkpoint_every": 1000,
    "fixed_order": False,
}

_PRESET_STEPS = {"desk": 6000, "paper": 36000}

_GENERATE_DEFAULTS = {"count": 100, "max_n": None, "seed": 0}

_EVAL_DEFAULTS = {"sigma": 1.0}

_GRADCHECK_DEFAULTS = {"variant": "graphvrnn", "probes": 220, "seed": 0}

_BENCH_DEFAULTS = {
    "variants": ",".join(VARIANTS),
    "runs": 5,
    "count": None,
    "gen_count": None,
    "sigma": 1.0,
    "size_min": None,
    "size_max": None,
    "split": 0.8,
    **{k: v for k, v in _TRAIN_DEFAULTS.items() if k != "variant"},
}


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


def _emit_error(kind: str, message: str) -> None:
    sys.stderr.write(json.dumps({"error": kind, "message": message}) + "\n")


def _merge(defaults: dict, config_path: str | None, flags: dict) -> dict:
    """flags > config file > defaults; unknown config keys are refused."""
    merged = dict(defaults)
    if config_path is not None:
        try:
            loaded = json.loads(Path(config_path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise click.UsageError(f"config file {config_path}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise click.UsageError(f"config file {config_path}: expected a JSON object")
        unknown = sorted(set(loaded) - set(defaults))
        if unknown:
            raise click.UsageError(
                f"config file {config_path}: unknown keys {unknown}"
            )
        merged.update(loaded)
    merged.update({k: v for k, v in flags.items() if v is not None})
    return merged


def _write_manifest(
    out_dir: Path,
    command: str,
    config: dict,
    seed: int,
    inputs: dict[str, str],
    started: str,
) -> None:
    payload = {
        "command": command,
        "config": config,
        "finished": _utc_now(),
        "inputs": {
            name: {"path": str(path), "sha256": checkpoint_digest(path)}
            for name, path in inputs.items()
        },
        "seed": seed,
        "started": started,
        "version": __version__,
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


@contextlib.contextmanager
def _run_scope(out_dir: Path):
    """Mark the output directory INCOMPLETE if the command body fails."""
    try:
        yield
    except BaseException:
        try:
            (out_dir / "INCOMPLETE").write_text(
                "this run did not finish; outputs may be partial\n", encoding="utf-8"
            )
        except OSError:
            pass
        raise


def _size_range(cfg: dict) -> tuple[int, int] | None:
    if (cfg["size_min"] is None) != (cfg["size_max"] is None):
        raise click.UsageError("--size-min and --size-max must be given together")
    if cfg["size_min"] is None:
        return None
    return (cfg["size_min"], cfg["size_max"])


def _dataset_job(name: str, cfg: dict, out_dir: Path) -> dict:
    """Generate, split, and save a dataset; returns the manifest config."""
    size_range = _size_range(cfg)
    seed = cfg["seed"]
    graphs = gen_dataset(name, cfg["count"], derive(seed, 0), size_range)
    train, test = split_dataset(graphs, cfg["split"], derive(seed, 1))
    est = estimate_bandwidth(train, 10, derive(seed, 2))
    params = dataset_params(name, size_range)
    base = {"dataset": name, "estimated_m": est, "params": params, "seed": seed}
    save_graphs(graphs, out_dir / "all.graphs", {**base, "count": len(graphs), "split": "all"})
    save_graphs(train, out_dir / "train.graphs", {**base, "count": len(train), "split": "train"})
    save_graphs(test, out_dir / "test.graphs", {**base, "count": len(test), "split": "test"})
    return {
        "name": name,
        "count": len(graphs),
        "train": len(train),
        "test": len(test),
        "split": cfg["split"],
        "seed": seed,
        "estimated_m": est,
        "params": params,
    }


def _train_job(data_path: str, out_dir: Path, cfg: dict, resume: str | None = None):
    """Build the TrainConfig a merged config dict describes and run it."""
    graphs = load_graphs(data_path)
    if not graphs:
        raise DataError(f"dataset {data_path!r} holds no graphs")
    steps = cfg["steps"] if cfg["steps"] is not None else _PRESET_STEPS[cfg["preset"]]
    max_nodes = max(g.n for g in graphs)
    m = cfg["m"]
    if m is None:
        m = estimate_bandwidth(graphs, 10, derive(cfg["seed"], 2))
    node_hidden = cfg["node_hidden"]
    if node_hidden is None:
        node_hidden = default_node_hidden(max_nodes)
    model_cfg = ModelConfig(
        variant=cfg["variant"],
        m=m,
        node_hidden=node_hidden,
        edge_hidden=cfg["edge_hidden"],
        node_layers=cfg["node_layers"],
        edge_layers=cfg["edge_layers"],
        d_z=cfg["d_z"],
        k=graphs[0].k,
        beta=cfg["beta"],
    )
    train_cfg = TrainConfig(
        steps=steps,
        dataset_path=str(data_path),
        model=model_cfg,
        out_dir=str(out_dir),
        batch_size=cfg["batch_size"],
        lr0=cfg["lr"],
        seed=cfg["seed"],
        log_every=cfg["log_every"],
        checkpoint_every=cfg["checkpoint_every"],
        fixed_order=cfg["fixed_order"],
    )
    return train_cfg, train_run(train_cfg, resume_from=resume)


def _generate_job(ckpt_path: str, out_dir: Path, count: int, max_n: int | None, seed: int):
    ck = load_checkpoint(str(ckpt_path))
    if max_n is None:
        stored = (ck.extra or {}).get("max_nodes")
        if stored is None:
            raise click.UsageError(
                "--max-n is required: the checkpoint stores no node-count hint"
            )
        max_n = 2 * int(stored)
    spec = GenerationSpec(count=count, max_n=max_n, seed=seed)
    out_path = out_dir / "generated.graphs"
    graphs = generate_set(ck, spec, out_path=out_path, checkpoint_path=str(ckpt_path))
    return spec, graphs, out_path


def _eval_job(gen_path: str, test_path: str, sigma: float, out_dir: Path):
    generated = load_graphs(gen_path)
    test = load_graphs(test_path)
    provenance = {
        "generated_sha256": checkpoint_digest(gen_path),
        "test_sha256": checkpoint_digest(test_path),
    }
    report = evaluate(generated, test, sigma=sigma, provenance=provenance)
    write_eval_report(out_dir / "report.tsv", report)
    render_eval_figures(out_dir, generated, test)
    return report


def gradcheck_run(variant: str, probes: int = 220, seed: int = 0) -> dict:
    """Finite-difference check of the full training loss at tiny dims.

    A fixed three-graph attributed batch (triangle, path, cycle) with frozen
    latent noise; central differences at step 1e-4 against reverse-mode
    gradients on randomly probed coordinates.
    """
    config = ModelConfig(variant=variant, m=4, node_hidden=8, edge_hidden=4, d_z=4, k=1)
    params = init_model(config, derive(seed, 0))
    attr_rng = derive(seed, 1)
    shapes = [
        (3, ((0, 1), (0, 2), (1, 2))),
        (4, ((0, 1), (1, 2), (2, 3))),
        (5, ((0, 1), (1, 2), (2, 3), (3, 4), (0, 4))),
    ]
    graphs = [
        Graph(n, frozenset(edges), attributes=attr_rng.normal(size=(n, 1)))
        for n, edges in shapes
    ]
    order_rng = derive(seed, 2)
    seqs = [encode_sequence(g, bfs_order(g, order_rng), config.m) for g in graphs]
    batch = collate(seqs, config.m)
    eps = None
    if config.latent:
        b, length = batch.s_target.shape[:2]
        eps = as_tensor(derive(seed, 3).standard_normal((b, length, config.d_z)))

    def loss_fn():
        outputs = forward_teacher_forced(params, config, batch, eps=eps)
        return elbo_loss(outputs, batch, config.beta)[0]

    worst = gradient_check(loss_fn, params, probes, derive(seed, 4))
    return {
        "variant": variant,
        "probes": min(probes, params.size()),
        "max_relative_error": worst,
        "threshold": GRADCHECK_THRESHOLD,
    }


@click.group()
@click.version_option(version=__version__, prog_name="graphvrnn")
def cli():
    """Variational autoregressive graph generation: data, training,
    sampling, and two-sample evaluation."""


@cli.command("dataset")
@click.argument("name", type=click.Choice(DATASET_NAMES))
@click.option("--count", type=int, default=None, help="Number of graphs (dataset default if omitted).")
@click.option("--seed", type=int, default=None, help="Base seed.")
@click.option("--size-min", type=int, default=None, help="Smallest node count (with --size-max).")
@click.option("--size-max", type=int, default=None, help="Largest node count (with --size-min).")
@click.option("--split", type=float, default=None, help="Train fraction of the split.")
@click.option("--out", "out_path", required=True, type=click.Path(file_okay=False), help="Output directory.")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None, help="JSON config file.")
def cmd_dataset(name, count, seed, size_min, size_max, split, out_path, config_path):
    """Generate a synthetic benchmark dataset plus its train/test split."""
    cfg = _merge(
        _DATASET_DEFAULTS,
        config_path,
        {"count": count, "seed": seed, "size_min": size_min, "size_max": size_max, "split": split},
    )
    started = _utc_now()
    out_dir = Path(out_path)
    out_dir.mkdir(parents=True, exist_ok=True)
    with _run_scope(out_dir):
        echo = _dataset_job(name, cfg, out_dir)
        inputs = {"config": config_path} if config_path else {}
        _write_manifest(out_dir, "dataset", {**echo, "out": str(out_dir)}, cfg["seed"], inputs, started)
    click.echo(json.dumps(
        {"out": str(out_dir), "count": echo["count"], "train": echo["train"],
         "test": echo["test"], "estimated_m": echo["estimated_m"]},
        sort_keys=True,
    ))


@cli.command("train")
@click.option("--data", "data_path", required=True, type=click.Path(exists=True, dir_okay=False), help="Training split (graph-set file).")
@click.option("--out", "out_path", required=True, type=click.Path(file_okay=False), help="Output directory.")
@click.option("--variant", type=click.Choice(VARIANTS), default=None)
@click.option("--preset", type=click.Choice(sorted(_PRESET_STEPS)), default=None, help="Step-count preset when --steps is omitted.")
@click.option("--steps", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--beta", type=float, default=None, help="KL weight.")
@click.option("--m", "bandwidth", type=int, default=None, help="Adjacency lookback width (estimated from data if omitted).")
@click.option("--node-hidden", type=int, default=None)
@click.option("--edge-hidden", type=int, default=None)
@click.option("--d-z", type=int, default=None)
@click.option("--batch-size", type=int, default=None)
@click.option("--lr", type=float, default=None)
@click.option("--log-every", type=int, default=None)
@click.option("--checkpoint-every", type=int, default=None)
@click.option("--fixed-order", is_flag=True, default=None, help="Freeze one BFS order per graph instead of per-visit redraws.")
@click.option("--resume", "resume_path", type=click.Path(exists=True, dir_okay=False), default=None, help="Checkpoint to continue from.")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None)
def cmd_train(data_path, out_path, variant, preset, steps, seed, beta, bandwidth,
              node_hidden, edge_hidden, d_z, batch_size, lr, log_every,
              checkpoint_every, fixed_order, resume_path, config_path):
    """Train a model variant on a graph-set file."""
    cfg = _merge(
        _TRAIN_DEFAULTS,
        config_path,
        {
            "variant": variant, "preset": preset, "steps": steps, "seed": seed,
            "beta": beta, "m": bandwidth, "node_hidden": node_hidden,
            "edge_hidden": edge_hidden, "d_z": d_z, "batch_size": batch_size,
            "lr": lr, "log_every": log_every, "checkpoint_every": checkpoint_every,
            "fixed_order": fixed_order,
        },
    )
    started = _utc_now()
    out_dir = Path(out_path)
    out_dir.mkdir(parents=True, exist_ok=True)
    with _run_scope(out_dir):
        train_cfg, result = _train_job(data_path, out_dir, cfg, resume_path)
        echo = {**train_cfg.to_dict(), "preset": cfg["preset"], "data": str(data_path)}
        inputs = {"data": data_path}
        if resume_path:
            echo["resume"] = str(resume_path)
            inputs["resume"] = resume_path
        if config_path:
            inputs["config"] = config_path
        _write_manifest(out_dir, "train", echo, cfg["seed"], inputs, started)
    summary = {"checkpoint": result.checkpoint_path, "metrics": result.metrics_path}
    if result.history:
        last = result.history[-1]
        summary.update({k: last[k] for k in ("step", "total", "bce", "mse", "kl")})
    click.echo(json.dumps(summary, sort_keys=True))


@cli.command("generate")
@click.option("--checkpoint", "ckpt_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(file_okay=False))
@click.option("--count", type=int, default=None, help="Graphs to sample.")
@click.option("--max-n", type=int, default=None, help="Hard node cap (default: twice the training maximum).")
@click.option("--seed", type=int, default=None)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None)
def cmd_generate(ckpt_path, out_path, count, max_n, seed, config_path):
    """Sample a graph set from a trained checkpoint."""
    cfg = _merge(
        _GENERATE_DEFAULTS, config_path,
        {"count": count, "max_n": max_n, "seed": seed},
    )
    started = _utc_now()
    out_dir = Path(out_path)
    out_dir.mkdir(parents=True, exist_ok=True)
    with _run_scope(out_dir):
        spec, graphs, gen_path = _generate_job(
            ckpt_path, out_dir, cfg["count"], cfg["max_n"], cfg["seed"]
        )
        echo = {"checkpoint": str(ckpt_path), "count": spec.count,
                "max_n": spec.max_n, "seed": spec.seed, "out": str(out_dir)}
        inputs = {"checkpoint": ckpt_path}
        if config_path:
            inputs["config"] = config_path
        _write_manifest(out_dir, "generate", echo, cfg["seed"], inputs, started)
    click.echo(json.dumps(
        {"generated": str(gen_path), "count": len(graphs),
         "mean_nodes": float(np.mean([g.n for g in graphs]))},
        sort_keys=True,
    ))


@cli.command("eval")
@click.option("--generated", "gen_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--test", "test_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", required=True, type=click.Path(file_okay=False))
@click.option("--sigma", type=float, default=None, help="Kernel width.")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None)
def cmd_eval(gen_path, test_path, out_path, sigma, config_path):
    """Two-sample MMD/EMD report between a generated set and a test set."""
    cfg = _merge(_EVAL_DEFAULTS, config_path, {"sigma": sigma})
    started = _utc_now()
    out_dir = Path(out_path)
    out_dir.mkdir(parents=True, exist_ok=True)
    with _run_scope(out_dir):
        report = _eval_job(gen_path, test_path, cfg["sigma"], out_dir)
        echo = {"generated": str(gen_path), "test": str(test_path),
                "sigma": cfg["sigma"], "out": str(out_dir)}
        inputs = {"generated": gen_path, "test": test_path}
        if config_path:
            inputs["config"] = config_path
        _write_manifest(out_dir, "eval", echo, 0, inputs, started)
    click.echo(json.dumps(report.to_dict(), sort_keys=True))


@cli.command("gradcheck")
@click.option("--variant", type=click.Choice(VARIANTS), default=None)
@click.option("--probes", type=int, default=None, help="Coordinates to probe.")
@click.option("--seed", type=int, default=None)
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None)
def cmd_gradcheck(variant, probes, seed, config_path):
    """Check reverse-mode gradients of the full loss by finite differences."""
    cfg = _merge(
        _GRADCHECK_DEFAULTS, config_path,
        {"variant": variant, "probes": probes, "seed": seed},
    )
    result = gradcheck_run(cfg["variant"], cfg["probes"], cfg["seed"])
    click.echo(json.dumps(result, sort_keys=True))
    if result["max_relative_error"] >= GRADCHECK_THRESHOLD:
        raise NumericError(
            f"gradient check failed: max relative error "
            f"{result['max_relative_error']!r} >= {GRADCHECK_THRESHOLD}"
        )


@cli.command("bench")
@click.option("--dataset", "dataset_name", required=True, type=click.Choice(DATASET_NAMES))
@click.option("--variants", default=None, help="Comma-separated variant list.")
@click.option("--runs", type=int, default=None, help="Independent seeded runs to average.")
@click.option("--count", type=int, default=None, help="Dataset size.")
@click.option("--gen-count", type=int, default=None, help="Graphs generated per run (default: test split size).")
@click.option("--steps", type=int, default=None)
@click.option("--preset", type=click.Choice(sorted(_PRESET_STEPS)), default=None)
@click.option("--seed", type=int, default=None)
@click.option("--beta", type=float, default=None)
@click.option("--sigma", type=float, default=None)
@click.option("--size-min", type=int, default=None)
@click.option("--size-max", type=int, default=None)
@click.option("--split", type=float, default=None)
@click.option("--batch-size", type=int, default=None)
@click.option("--lr", type=float, default=None)
@click.option("--out", "out_path", required=True, type=click.Path(file_okay=False))
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None)
def cmd_bench(dataset_name, variants, runs, count, gen_count, steps, preset, seed,
              beta, sigma, size_min, size_max, split, batch_size, lr, out_path,
              config_path):
    """Full pipeline: dataset, per-variant seeded train/generate/eval runs,
    averaged report, and figures."""
    cfg = _merge(
        _BENCH_DEFAULTS,
        config_path,
        {
            "variants": variants, "runs": runs, "count": count,
            "gen_count": gen_count, "steps": steps, "preset": preset,
            "seed": seed, "beta": beta, "sigma": sigma, "size_min": size_min,
            "size_max": size_max, "split": split, "batch_size": batch_size,
            "lr": lr,
        },
    )
    variant_list = [v.strip() for v in cfg["variants"].split(",") if v.strip()]
    if not variant_list:
        raise click.UsageError("--variants names no variants")
    for v in variant_list:
        if v not in VARIANTS:
            raise click.UsageError(f"unknown variant {v!r}; expected one of {VARIANTS}")
    if cfg["runs"] < 1:
        raise click.UsageError(f"--runs must be >= 1, got {cfg['runs']}")

    started = _utc_now()
    out_dir = Path(out_path)
    out_dir.mkdir(parents=True, exist_ok=True)
    with _run_scope(out_dir):
        data_dir = out_dir / "data"
        data_dir.mkdir(exist_ok=True)
        data_echo = _dataset_job(
            dataset_name,
            {"count": cfg["count"], "seed": cfg["seed"], "size_min": cfg["size_min"],
             "size_max": cfg["size_max"], "split": cfg["split"]},
            data_dir,
        )
        train_path = data_dir / "train.graphs"
        test_path = data_dir / "test.graphs"
        test = load_graphs(test_path)
        n_generate = cfg["gen_count"] if cfg["gen_count"] is not None else len(test)
        has_attrs = all(g.attributes is not None for g in test)

        base_train = {k: cfg[k] for k in _TRAIN_DEFAULTS if k != "variant"}
        run_seeds = []
        for r in range(cfg["runs"]):
            train_seed = derive_seed(cfg["seed"], r)
            run_seeds.append(
                {"run": r, "train_seed": train_seed,
                 "generate_seed": derive_seed(train_seed, 1)}
            )

        rows: dict[str, dict] = {}
        attr_samples: dict[str, np.ndarray] = {}
        if has_attrs:
            attr_samples["test"] = pooled_attributes(test)
        for variant in variant_list:
            reports = []
            for entry_ in run_seeds:
                r = entry_["run"]
                run_dir = out_dir / variant / f"run{r}"
                run_cfg = {**base_train, "variant": variant, "seed": entry_["train_seed"]}
                _, train_result = _train_job(str(train_path), run_dir, run_cfg)
                _, gen_graphs, gen_path = _generate_job(
                    train_result.checkpoint_path, run_dir, n_generate, None,
                    entry_["generate_seed"],
                )
                report = _eval_job(str(gen_path), str(test_path), cfg["sigma"], run_dir)
                reports.append(report)
                click.echo(
                    f"bench: {variant} run {r}: degree_mmd={report.degree_mmd!r}"
                    + (f" emd_all={report.emd_all!r}" if report.emd_all is not None else "")
                )
                if has_attrs and r == 0:
                    attr_samples[variant] = pooled_attributes(gen_graphs)
            rows[variant] = average_reports(reports)

        table_path = write_bench_table(out_dir / "bench_report.tsv", rows)
        figure_paths = render_bench_figures(
            out_dir, rows, attr_samples if has_attrs else None
        )
        echo = {**cfg, "variants": variant_list, "dataset": dataset_name,
                "data": data_echo, "gen_count": n_generate, "run_seeds": run_seeds,
                "out": str(out_dir)}
        inputs = {"config": config_path} if config_path else {}
        _write_manifest(out_dir, "bench", echo, cfg["seed"], inputs, started)
    click.echo(json.dumps(
        {"report": str(table_path), "figures": [str(p) for p in figure_paths],
         "metrics": rows},
        sort_keys=True,
    ))


def main(argv: list[str] | None = None) -> int:
    """Run the CLI and map exceptions onto the documented exit codes."""
    try:
        cli.main(args=argv, prog_name="graphvrnn", standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.UsageError as exc:
        _emit_error(type(exc).__name__, exc.format_message())
        return 1
    except click.ClickException as exc:
        _emit_error(type(exc).__name__, exc.format_message())
        return 1
    except click.exceptions.Abort:
        _emit_error("Aborted", "interrupted")
        return 1
    except NumericError as exc:
        _emit_error(type(exc).__name__, str(exc))
        return 3
    except GraphVrnnError as exc:
        _emit_error(type(exc).__name__, str(exc))
        return 2
    except Exception as exc:
        _emit_error(type(exc).__name__, str(exc))
        return 1


def entry() -> None:
    sys.exit(main())
