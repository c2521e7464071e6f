"""ftcb-viz: render figures from exported stats directories.

Walks the input directory for stats.json bundles (covers both single
`ftcb analyze` outputs and `ftcb bench` trees) and writes one image per
requested figure family per bundle; the optimization summary needs the
bench manifest and renders once per tree.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bundle import BundleError, find_bundles, load_manifest
from .render import (RenderError, render_density, render_interaction_graph,
                     render_opt_summary, render_weight_hist)

FIGURES = ("density", "weights", "graph", "opt")


def render_all(stats_dir: Path, out_dir: Path, figures: list[str],
               scale: int = 1) -> tuple[list[Path], list[str]]:
    written: list[Path] = []
    warnings: list[str] = []
    bundles = find_bundles(stats_dir)
    if not bundles and set(figures) != {"opt"}:
        raise BundleError(f"no stats.json found under {stats_dir}")
    for bundle in bundles:
        stem = bundle.label
        if "density" in figures:
            for attr, tag in (("t_density", "t_density"),
                              ("pbc_density", "pbc_density")):
                grid = getattr(bundle, attr)
                if grid is None:
                    continue
                written.append(render_density(
                    grid, out_dir / f"{stem}_{tag}.png", scale=scale))
        if "weights" in figures:
            out = render_weight_hist(bundle, out_dir / f"{stem}_weights.png")
            if out:
                written.append(out)
        if "graph" in figures:
            for which in ("clifford_t", "pbc"):
                written.append(render_interaction_graph(
                    bundle, out_dir / f"{stem}_{which}_graph.png", which))
        warnings.extend(f"{stem}: {w}" for w in bundle.warnings)
    if "opt" in figures:
        manifest = load_manifest(stats_dir)
        if manifest is None:
            warnings.append("no manifest.json found; skipping opt summary")
        else:
            written.append(render_opt_summary(
                manifest, stats_dir, out_dir / "opt_summary.png"))
    return written, warnings


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="ftcb-viz",
        description="Render figures from ftcb stats exports")
    parser.add_argument("stats_dir")
    parser.add_argument("--figures", default=",".join(FIGURES),
                        help="comma list from {density,weights,graph,opt}")
    parser.add_argument("--out", default="ftcb_figs")
    parser.add_argument("--scale", type=int, default=1,
                        help="integer pixel size per density grid cell")
    args = parser.parse_args(argv)
    figures = [f.strip() for f in args.figures.split(",") if f.strip()]
    unknown = set(figures) - set(FIGURES)
    if unknown:
        print(f"error: unknown figures {sorted(unknown)}", file=sys.stderr)
        return 1
    try:
        written, warnings = render_all(Path(args.stats_dir), Path(args.out),
                                       figures, args.scale)
    except (BundleError, RenderError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for warning in warnings:
        print(f"warning: {warning}", file=sys.stderr)
    for path in written:
        print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
