"""Deterministic figure rendering from cfmimo result files.

Three figure kinds, all driven purely by the input file (no recomputation):

  cdf          empirical CDF of one numeric column of results.csv,
               x-axis in bits/s/Hz
  heatmap      pilot-length sweep grid (pilot_sweep.csv), axes are the
               uplink/downlink training lengths
  convergence  minimum rate per SCA iteration (sca_trace.csv), one line
               per placement

Rendering is reproducible byte for byte at fixed backend settings: the Agg
backend, a fixed figure size and dpi, and no software metadata in the PNG.
When a manifest.json sits next to the input file, a short hash of it is
stamped in the figure footer for provenance.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib
import numpy as np

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

KINDS = ("cdf", "heatmap", "convergence")

# column sets the three kinds rely on
HEATMAP_COLUMNS = ("ul_pilot_len", "dl_pilot_len", "mean_net")
CONVERGENCE_COLUMNS = ("placement", "iteration", "min_rate_cf")


class SchemaError(ValueError):
    """Input file lacks a column the figure needs."""


@dataclass(frozen=True)
class PlotSpec:
    kind: str
    input_path: Path
    output_path: Path
    column: str = "net_cf"  # cdf only
    xlabel: str | None = None
    ylabel: str | None = None
    title: str | None = None
    dpi: int = 120
    figsize: tuple = (6.0, 4.0)
    style: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; pick one of {KINDS}")


def _read_csv(path: Path) -> dict:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise SchemaError(f"{path}: empty file, no header")
        rows = list(reader)
    return {"columns": list(reader.fieldnames), "rows": rows}


def _column(table: dict, path: Path, name: str) -> np.ndarray:
    if name not in table["columns"]:
        raise SchemaError(
            f"{path}: column {name!r} not found; available: {table['columns']}")
    values = [row[name] for row in table["rows"] if row[name] not in ("", None)]
    return np.array([float(v) for v in values])


def _manifest_hash(input_path: Path) -> str | None:
    manifest = input_path.parent / "manifest.json"
    if not manifest.exists():
        return None
    digest = hashlib.sha256(manifest.read_bytes()).hexdigest()[:12]
    try:
        seed = json.loads(manifest.read_text()).get("seed")
    except json.JSONDecodeError:
        seed = None
    return f"manifest {digest}" + (f", seed {seed}" if seed is not None else "")


def _render_cdf(spec: PlotSpec, ax):
    table = _read_csv(spec.input_path)
    values = np.sort(_column(table, spec.input_path, spec.column))
    if values.size == 0:
        raise SchemaError(f"{spec.input_path}: column {spec.column!r} has no values")
    # right-continuous empirical CDF with a pre-step at the minimum
    x = np.concatenate([[values[0]], values])
    y = np.concatenate([[0.0], np.arange(1, values.size + 1) / values.size])
    ax.step(x, y, where="post", **spec.style)
    ax.set_xlabel(spec.xlabel or f"{spec.column} [bits/s/Hz]")
    ax.set_ylabel(spec.ylabel or "cumulative probability")
    ax.set_ylim(0.0, 1.02)
    ax.grid(True, alpha=0.3)


def _render_heatmap(spec: PlotSpec, ax, fig):
    table = _read_csv(spec.input_path)
    ul = _column(table, spec.input_path, HEATMAP_COLUMNS[0]).astype(int)
    dl = _column(table, spec.input_path, HEATMAP_COLUMNS[1]).astype(int)
    # NaN cells (infeasible pilot pairs) must survive, so read values raw
    if HEATMAP_COLUMNS[2] not in table["columns"]:
        raise SchemaError(f"{spec.input_path}: column 'mean_net' not found; "
                          f"available: {table['columns']}")
    vals = np.array([float(r[HEATMAP_COLUMNS[2]]) for r in table["rows"]])
    ul_axis = np.unique(ul)
    dl_axis = np.unique(dl)
    grid = np.full((len(ul_axis), len(dl_axis)), np.nan)
    for u, d, v in zip(ul, dl, vals):
        grid[np.searchsorted(ul_axis, u), np.searchsorted(dl_axis, d)] = v
    image = ax.imshow(grid, origin="lower", aspect="auto", **spec.style)
    ax.set_xticks(range(len(dl_axis)), [str(d) for d in dl_axis])
    ax.set_yticks(range(len(ul_axis)), [str(u) for u in ul_axis])
    ax.set_xlabel(spec.xlabel or "downlink pilot length")
    ax.set_ylabel(spec.ylabel or "uplink pilot length")
    fig.colorbar(image, ax=ax, label="mean net rate [bits/s/Hz]")


def _render_convergence(spec: PlotSpec, ax):
    table = _read_csv(spec.input_path)
    placement = _column(table, spec.input_path, CONVERGENCE_COLUMNS[0]).astype(int)
    iteration = _column(table, spec.input_path, CONVERGENCE_COLUMNS[1]).astype(int)
    rate = _column(table, spec.input_path, CONVERGENCE_COLUMNS[2])
    for p in np.unique(placement):
        sel = placement == p
        order = np.argsort(iteration[sel])
        ax.plot(iteration[sel][order], rate[sel][order], marker="o",
                label=f"placement {p}", **spec.style)
    ax.set_xlabel(spec.xlabel or "SCA iteration")
    ax.set_ylabel(spec.ylabel or "minimum rate [bits/s/Hz]")
    ax.grid(True, alpha=0.3)
    if len(np.unique(placement)) <= 10:
        ax.legend(fontsize=8)


def render(spec: PlotSpec) -> Path:
    """Render the figure described by spec; returns the output path."""
    if not Path(spec.input_path).exists():
        raise FileNotFoundError(f"input file {spec.input_path} does not exist")
    fig, ax = plt.subplots(figsize=spec.figsize)
    try:
        if spec.kind == "cdf":
            _render_cdf(spec, ax)
        elif spec.kind == "heatmap":
            _render_heatmap(spec, ax, fig)
        else:
            _render_convergence(spec, ax)
        if spec.title:
            ax.set_title(spec.title)
        footer = _manifest_hash(Path(spec.input_path))
        if footer:
            fig.text(0.99, 0.01, footer, ha="right", va="bottom", fontsize=6,
                     color="0.4")
        fig.tight_layout()
        out = Path(spec.output_path)
        out.parent.mkdir(parents=True, exist_ok=True)
        # no Software tag: keeps the PNG byte-stable across matplotlib builds
        fig.savefig(out, dpi=spec.dpi, metadata={"Software": None})
    finally:
        plt.close(fig)
    return Path(spec.output_path)
