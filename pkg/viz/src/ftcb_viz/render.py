"""Figure renderers for stats bundles.

Density heatmaps are written pixel-exact with Pillow: one pixel block per
grid cell, so the image height is exactly (qubits x scale) rows; the color
scale is annotated in the PNG text metadata and as an optional legend strip
appended to the right (which widens the image without adding rows).  The
remaining figures use matplotlib with fixed seeds and the Agg backend.
"""
from __future__ import annotations

import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import networkx as nx
from PIL import Image, PngImagePlugin

from .bundle import DensityGrid, StatsBundle

LAYOUT_SEED = 7
FIGURE_DPI = 110


class RenderError(ValueError):
    pass


# --- density heatmap -------------------------------------------------------------

_VIRIDIS_STOPS = [
    (0.0, (68, 1, 84)), (0.25, (59, 82, 139)), (0.5, (33, 145, 140)),
    (0.75, (94, 201, 98)), (1.0, (253, 231, 37)),
]


def _colormap(t: float) -> tuple[int, int, int]:
    t = min(1.0, max(0.0, t))
    for (t0, c0), (t1, c1) in zip(_VIRIDIS_STOPS, _VIRIDIS_STOPS[1:]):
        if t <= t1:
            f = 0.0 if t1 == t0 else (t - t0) / (t1 - t0)
            return tuple(round(a + f * (b - a)) for a, b in zip(c0, c1))
    return _VIRIDIS_STOPS[-1][1]


def render_density(grid: DensityGrid, out_path: Path, scale: int = 1,
                   legend: bool = True) -> Path:
    """Heatmap: qubits on the vertical axis, time bins on the horizontal.

    The body is exactly (rows*scale) x (bins*scale) pixels; the legend
    strip extends columns only.  Color range annotated in PNG metadata.
    """
    if grid.n_rows == 0 or grid.n_bins == 0:
        raise RenderError("empty density grid")
    if scale < 1:
        raise RenderError("scale must be >= 1")
    vmax = max(max(row) for row in grid.cells)
    height = grid.n_rows * scale
    legend_cols = (6 + 2) * scale if legend else 0
    width = grid.n_bins * scale + legend_cols
    img = Image.new("RGB", (width, height), (255, 255, 255))
    px = img.load()
    for r, row in enumerate(grid.cells):
        for c, value in enumerate(row):
            color = _colormap(0.0 if vmax == 0 else value / vmax)
            for dy in range(scale):
                for dx in range(scale):
                    px[c * scale + dx, r * scale + dy] = color
    if legend:
        base = grid.n_bins * scale + 2 * scale
        for y in range(height):
            t = 1.0 - (y / max(1, height - 1))
            color = _colormap(t)
            for x in range(base, base + 4 * scale):
                px[x, y] = color
    meta = PngImagePlugin.PngInfo()
    meta.add_text("color_scale", json.dumps(
        {"min": 0, "max": vmax, "colormap": "viridis-5stop"}))
    meta.add_text("grid_shape", f"{grid.n_rows}x{grid.n_bins}")
    out_path.parent.mkdir(parents=True, exist_ok=True)
    img.save(out_path, pnginfo=meta)
    return out_path


# --- weight histogram ---------------------------------------------------------------

def render_weight_hist(bundle: StatsBundle, out_path: Path) -> Path | None:
    """Bar chart of Pauli weights; overlays raw mean/std when present.

    Returns None (with a warning recorded) when the histogram is empty.
    """
    weight = bundle.stats["pbc"].get("optimized_weight") or {}
    hist = weight.get("histogram") or {}
    if not hist:
        bundle.warnings.append("empty weight histogram; skipping")
        return None
    xs = sorted(int(k) for k in hist)
    ys = [hist[str(x)] for x in xs]
    fig, ax = plt.subplots(figsize=(6, 4), dpi=FIGURE_DPI)
    ax.bar(xs, ys, color="#3b528b", label="optimized")
    raw = bundle.stats["pbc"].get("raw_weight") or {}
    mean, std = weight.get("mean"), weight.get("std")
    parts = []
    if mean is not None:
        parts.append(f"optimized {mean:.2f} ± {std:.2f}")
    if raw.get("mean") is not None:
        parts.append(f"raw {raw['mean']:.2f} ± {raw['std']:.2f}")
        ax.axvline(raw["mean"], color="#d95f02", linestyle="--", label="raw mean")
    ax.set_xlabel("Pauli weight")
    ax.set_ylabel("operator count")
    ax.set_title(f"{bundle.label}: " + "; ".join(parts))
    ax.legend(loc="best")
    fig.tight_layout()
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path)
    plt.close(fig)
    return out_path


# --- interaction graph -----------------------------------------------------------------

def render_interaction_graph(bundle: StatsBundle, out_path: Path,
                             which: str = "clifford_t") -> Path:
    """Force-directed drawing: node color by weighted degree, edge width by
    weight; layout seeded for reproducibility."""
    section = bundle.stats.get(which) or {}
    graph_data = section.get("interaction_graph")
    if not graph_data:
        raise RenderError(f"no interaction graph in section {which!r}")
    g = nx.Graph()
    g.add_nodes_from(range(graph_data["n"]))
    for i, j, w in graph_data["edges"]:
        g.add_edge(i, j, weight=w)
    degrees = graph_data["interaction_degree"]
    pos = nx.spring_layout(g, seed=LAYOUT_SEED)
    fig, ax = plt.subplots(figsize=(6, 6), dpi=FIGURE_DPI)
    max_w = max((w for _, _, w in graph_data["edges"]), default=1)
    widths = [0.5 + 2.5 * g[u][v]["weight"] / max_w for u, v in g.edges]
    nodes = nx.draw_networkx_nodes(g, pos, node_color=degrees,
                                   cmap="viridis", node_size=120, ax=ax)
    nx.draw_networkx_edges(g, pos, width=widths, alpha=0.6, ax=ax)
    if graph_data["n"] <= 40:
        nx.draw_networkx_labels(g, pos, font_size=7, ax=ax)
    fig.colorbar(nodes, ax=ax, label="weighted interaction degree")
    ax.set_title(f"{bundle.label}: {which} interaction graph")
    ax.set_axis_off()
    fig.tight_layout()
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path)
    plt.close(fig)
    return out_path


# --- optimization summary ------------------------------------------------------------------

def render_opt_summary(manifest: dict, root: Path, out_path: Path) -> Path:
    """Grouped bars of rotation/weight reduction on a symmetric-log axis.

    Negative bars are average-weight increases.  Reads each manifest
    entry's stats document for the two percentages.
    """
    entries = [e for e in manifest.get("entries", []) if e.get("status") == "ok"]
    if not entries:
        raise RenderError("manifest contains no successful entries")
    labels, rot, wgt = [], [], []
    for entry in entries:
        stats_file = Path(entry["stats_file"])
        if not stats_file.is_absolute():
            stats_file = root / stats_file
        stats = json.loads(stats_file.read_text())
        labels.append(f"{Path(entry['input']).stem}\n{entry['pipeline']}")
        rot.append(stats["rotation_reduction_pct"])
        wgt.append(stats["weight_reduction_pct"])
    xs = range(len(labels))
    fig, ax = plt.subplots(figsize=(max(6, 1.2 * len(labels)), 4.5),
                           dpi=FIGURE_DPI)
    width = 0.38
    ax.bar([x - width / 2 for x in xs], rot, width, label="rotation reduction %",
           color="#31688e")
    ax.bar([x + width / 2 for x in xs], wgt, width, label="avg weight reduction %",
           color="#b5de2b")
    ax.set_yscale("symlog", linthresh=1.0)
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.set_xticks(list(xs))
    ax.set_xticklabels(labels, fontsize=7)
    ax.set_ylabel("% change after layering and merging (symlog)")
    ax.legend(loc="best")
    fig.tight_layout()
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path)
    plt.close(fig)
    return out_path
