"""Loading and validation of exported stats bundles.

A bundle is one analyzed circuit's output directory: stats.json plus the
optional density CSVs.  Validation covers exactly the keys the renderers
consume; missing optional sections are reported so callers can skip the
affected figures with a warning instead of crashing.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

REQUIRED_KEYS = (
    "schema_version", "source", "pipeline", "t_count",
    "qubit_interaction_degree", "pbc_t_operators", "pbc_avg_pauli_weight",
    "total_gates", "depth", "clifford_gates", "clifford_t", "pbc",
)
GRAPH_KEYS = ("n", "edges", "interaction_degree")


class BundleError(ValueError):
    pass


@dataclass
class DensityGrid:
    qubits: list[int]
    cells: list[list[int]]

    @property
    def n_rows(self) -> int:
        return len(self.cells)

    @property
    def n_bins(self) -> int:
        return len(self.cells[0]) if self.cells else 0


def load_density_csv(path: Path) -> DensityGrid:
    lines = path.read_text().strip().split("\n")
    if not lines or not lines[0].startswith("qubit,"):
        raise BundleError(f"{path}: malformed density CSV header")
    header_bins = lines[0].split(",")[1:]
    qubits, cells = [], []
    for ln in lines[1:]:
        fields = ln.split(",")
        if len(fields) != len(header_bins) + 1:
            raise BundleError(f"{path}: row width does not match header")
        try:
            qubits.append(int(fields[0]))
            cells.append([int(v) for v in fields[1:]])
        except ValueError:
            raise BundleError(f"{path}: non-integer cell") from None
    return DensityGrid(qubits, cells)


@dataclass
class StatsBundle:
    path: Path
    stats: dict
    t_density: DensityGrid | None = None
    pbc_density: DensityGrid | None = None
    warnings: list[str] = field(default_factory=list)

    @property
    def name(self) -> str:
        return self.stats.get("source", {}).get("name", self.path.parent.name)

    @property
    def label(self) -> str:
        pipeline = self.stats.get("pipeline", {}).get("label", "")
        stem = Path(self.name).stem
        return f"{stem}_{pipeline}" if pipeline else stem


def validate_stats(stats: dict):
    if not isinstance(stats, dict):
        raise BundleError("stats document must be a JSON object")
    missing = [k for k in REQUIRED_KEYS if k not in stats]
    if missing:
        raise BundleError(f"stats document missing keys: {missing}")
    for section in ("clifford_t", "pbc"):
        graph = stats[section].get("interaction_graph")
        if not isinstance(graph, dict):
            raise BundleError(f"missing {section}.interaction_graph")
        for key in GRAPH_KEYS:
            if key not in graph:
                raise BundleError(f"missing {section}.interaction_graph.{key}")


def load_bundle(stats_path: Path) -> StatsBundle:
    """Load one stats.json and its sibling CSVs; validate before returning."""
    try:
        stats = json.loads(stats_path.read_text())
    except json.JSONDecodeError as exc:
        raise BundleError(f"{stats_path}: {exc}") from None
    validate_stats(stats)
    bundle = StatsBundle(stats_path, stats)
    for attr, fname in (("t_density", "t_density.csv"),
                        ("pbc_density", "pbc_density.csv")):
        csv_path = stats_path.parent / fname
        if csv_path.exists():
            setattr(bundle, attr, load_density_csv(csv_path))
        else:
            bundle.warnings.append(f"{fname} not found; skipping that figure")
    return bundle


def find_bundles(root: Path) -> list[StatsBundle]:
    """All stats.json documents under root, recursively, sorted by path."""
    return [load_bundle(p) for p in sorted(root.rglob("stats.json"))]


def load_manifest(root: Path) -> dict | None:
    manifest = root / "manifest.json"
    if not manifest.exists():
        return None
    return json.loads(manifest.read_text())
