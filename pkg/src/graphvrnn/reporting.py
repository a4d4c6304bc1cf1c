"""Delimited report files and benchmark figures.

Reports are tab-separated text with a header row so they can be pasted
into anything that reads TSV. Figures are rendered with the Agg backend
straight to PNG files next to the tables; nothing opens a window.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .evaluation import MmdReport

METRIC_COLUMNS = (
    "degree_mmd",
    "clustering_mmd",
    "orbit_mmd",
    "emd_com1",
    "emd_com2",
    "emd_all",
)

MMD_COLUMNS = METRIC_COLUMNS[:3]
EMD_COLUMNS = METRIC_COLUMNS[3:]


def format_value(value: float | int | None) -> str:
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def write_eval_report(path: str | Path, report: MmdReport) -> Path:
    """Two-column metric/value table for a single evaluation."""
    path = Path(path)
    lines = ["metric\tvalue"]
    for name in METRIC_COLUMNS:
        lines.append(f"{name}\t{format_value(getattr(report, name))}")
    lines.append(f"n_generated\t{report.n_generated}")
    lines.append(f"n_test\t{report.n_test}")
    lines.append(f"sigma\t{format_value(report.sigma)}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def average_reports(reports: list[MmdReport]) -> dict[str, float | None]:
    """Arithmetic mean of each metric across runs; a metric missing from
    any run (attribute-free datasets) averages to None."""
    out: dict[str, float | None] = {}
    for name in METRIC_COLUMNS:
        values = [getattr(r, name) for r in reports]
        out[name] = None if any(v is None for v in values) else float(np.mean(values))
    return out


def write_bench_table(path: str | Path, variant_rows: dict[str, dict[str, float | None]]) -> Path:
    """One row per variant of run-averaged metrics."""
    path = Path(path)
    lines = ["variant\t" + "\t".join(METRIC_COLUMNS)]
    for variant, row in variant_rows.items():
        cells = [format_value(row.get(name)) for name in METRIC_COLUMNS]
        lines.append(variant + "\t" + "\t".join(cells))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def render_bench_figures(
    out_dir: str | Path,
    variant_rows: dict[str, dict[str, float | None]],
    attribute_samples: dict[str, np.ndarray] | None = None,
) -> list[Path]:
    """Bar charts of the averaged metrics, plus an attribute density
    overlay when attribute samples are given. Returns the written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    written.append(
        _render_bars(out_dir / "mmd_bars.png", variant_rows, MMD_COLUMNS, "Squared MMD")
    )
    if any(
        row.get(name) is not None for row in variant_rows.values() for name in EMD_COLUMNS
    ):
        written.append(
            _render_bars(out_dir / "emd_bars.png", variant_rows, EMD_COLUMNS, "Attribute EMD")
        )
    if attribute_samples:
        written.append(_render_densities(out_dir / "attribute_density.png", attribute_samples))
    return written


def render_eval_figures(out_dir: str | Path, generated: list, test: list) -> list[Path]:
    """Figures for a single evaluation: pooled degree distributions of the
    two sets, plus attribute densities when both sets carry attributes."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    deg_gen = np.concatenate([g.degrees() for g in generated])
    deg_test = np.concatenate([g.degrees() for g in test])
    width = int(max(deg_gen.max(), deg_test.max())) + 1
    fig, ax = plt.subplots(figsize=(7, 4))
    for name, deg in (("generated", deg_gen), ("test", deg_test)):
        ax.plot(np.arange(width), np.bincount(deg, minlength=width) / deg.size,
                marker="o", label=name)
    ax.set_xlabel("degree")
    ax.set_ylabel("frequency")
    ax.legend()
    fig.tight_layout()
    degree_path = out_dir / "degree_distribution.png"
    fig.savefig(degree_path, dpi=120)
    plt.close(fig)
    written.append(degree_path)

    if all(g.attributes is not None for g in generated + test):
        samples = {
            "generated": np.concatenate([g.attributes.ravel() for g in generated]),
            "test": np.concatenate([g.attributes.ravel() for g in test]),
        }
        written.append(_render_densities(out_dir / "attribute_density.png", samples))
    return written


def _render_bars(
    path: Path,
    variant_rows: dict[str, dict[str, float | None]],
    columns: tuple[str, ...],
    ylabel: str,
) -> Path:
    variants = list(variant_rows)
    x = np.arange(len(columns), dtype=np.float64)
    width = 0.8 / max(len(variants), 1)
    fig, ax = plt.subplots(figsize=(7, 4))
    for i, variant in enumerate(variants):
        heights = [variant_rows[variant].get(name) or 0.0 for name in columns]
        ax.bar(x + (i - (len(variants) - 1) / 2) * width, heights, width, label=variant)
    ax.set_xticks(x)
    ax.set_xticklabels([name.replace("_", " ") for name in columns])
    ax.set_ylabel(ylabel)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def _render_densities(path: Path, samples: dict[str, np.ndarray]) -> Path:
    pooled = np.concatenate([np.asarray(v).ravel() for v in samples.values()])
    lo, hi = float(pooled.min()), float(pooled.max())
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5
    bins = np.linspace(lo, hi, 61)
    centers = (bins[:-1] + bins[1:]) / 2
    fig, ax = plt.subplots(figsize=(7, 4))
    for name, values in samples.items():
        density, _ = np.histogram(np.asarray(values).ravel(), bins=bins, density=True)
        ax.plot(centers, density, label=name)
    ax.set_xlabel("node attribute")
    ax.set_ylabel("density")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
