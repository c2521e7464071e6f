"""End-to-end analysis pipeline: parse -> normalize -> synthesize ->
Clifford+T statistics -> PBC transpilation -> optimization -> PBC
statistics.  Produces the stats document plus the derived artifacts
(Clifford+T QASM, PBC text, density CSVs).
"""
from __future__ import annotations

import json
from dataclasses import dataclass

from . import metrics
from .circuit import GateCircuit
from .normalize import normalize_to_clifford_rz
from .pbc import PBCCircuit, PBCStats, compile_to_pbc, optimize_pbc, \
    pbc_reduction_stats, serialize_pbc
from .qasm import serialize_qasm
from .synth import SynthesisConfig, SynthesisError, ingest_external_ct, \
    synthesize_circuit

SCHEMA_VERSION = 1

PIPELINE_LABELS = {"none": "none"}
for _k in range(0, 9):
    PIPELINE_LABELS[f"sk-{_k}"] = f"sk-{_k}"


@dataclass
class AnalysisConfig:
    synth: str = "none"              # sk | none | external
    sk_depth: int = 1
    sk_base_length: int = 10
    pbc_opt: bool = True
    include_measurements: bool = True
    weight_scope: str = "rotations"  # rotations | measurements | both
    bins: int = 32
    seed: int = 0
    label: str | None = None

    def __post_init__(self):
        if self.synth not in ("sk", "none", "external"):
            raise ValueError(f"unknown synth mode {self.synth!r}")
        if self.sk_depth < 0 or self.bins < 1 or self.sk_base_length < 1:
            raise ValueError("invalid analysis configuration")

    def pipeline_label(self) -> str:
        if self.label:
            return self.label
        if self.synth == "sk":
            return f"sk-{self.sk_depth}"
        return self.synth


@dataclass
class AnalysisResult:
    config: AnalysisConfig
    clifford_t: GateCircuit
    pbc: PBCCircuit
    pbc_stats: PBCStats
    stats: dict
    t_grid: metrics.DensityGrid
    pbc_grid: metrics.DensityGrid

    def stats_json(self) -> str:
        return json.dumps(self.stats, indent=2, sort_keys=True) + "\n"

    def clifford_t_qasm(self) -> str:
        return serialize_qasm(self.clifford_t)

    def pbc_text(self) -> str:
        return serialize_pbc(self.pbc)


def to_clifford_t(circuit: GateCircuit, cfg: AnalysisConfig,
                  external: GateCircuit | None = None):
    """Normalize and synthesize down to Clifford+T per the configured mode."""
    if cfg.synth == "external":
        if external is None:
            raise SynthesisError("external synthesis mode needs an external circuit")
        return ingest_external_ct(external), None
    normalized = normalize_to_clifford_rz(circuit)
    if cfg.synth == "none":
        return ingest_external_ct(normalized), None
    ct, report = synthesize_circuit(
        normalized, SynthesisConfig(cfg.sk_depth, cfg.sk_base_length))
    return ct, report


def _graph_section(graph: metrics.InteractionGraph, seed: int) -> dict:
    deg = metrics.degree_stats(graph)
    community = metrics.louvain(graph, seed=seed)
    section = {
        "n": graph.n,
        "edges": graph.edge_list(),
        "degree_mean_unweighted": deg["unweighted_mean"],
        "degree_std_unweighted": deg["unweighted_std"],
        "degree_mean_weighted": deg["weighted_mean"],
        "degree_std_weighted": deg["weighted_std"],
        "interaction_degree": deg["interaction_degree"],
        "modularity": community.q,
        "num_communities": community.community_count,
    }
    section["graph_density"] = (
        metrics.graph_density(graph) if graph.n >= 2 else None)
    return section


def analyze_circuit(circuit: GateCircuit, cfg: AnalysisConfig,
                    external: GateCircuit | None = None,
                    source_name: str = "circuit") -> AnalysisResult:
    ct, synth_report = to_clifford_t(circuit, cfg, external)
    cts = metrics.ct_stats(ct)
    ct_graph = metrics.build_ct_graph(ct)
    ct_graph_section = _graph_section(ct_graph, cfg.seed)
    timing = metrics.t_timing(ct)
    t_grid = metrics.t_density(ct, cfg.bins)

    pbc = compile_to_pbc(ct)
    raw_weights = metrics.pauli_weight_stats(pbc, cfg.weight_scope)
    if cfg.pbc_opt:
        pbc, pbc_stats = optimize_pbc(pbc)
    else:
        pbc_stats = PBCStats(
            raw_rotation_count=len(pbc.rotations),
            optimized_rotation_count=len(pbc.rotations),
            raw_weight_mean=raw_weights.mean or 0.0,
            raw_weight_std=raw_weights.std or 0.0,
            optimized_weight_mean=raw_weights.mean or 0.0,
            optimized_weight_std=raw_weights.std or 0.0,
        )
    opt_weights = metrics.pauli_weight_stats(pbc, cfg.weight_scope)
    reductions = pbc_reduction_stats(pbc_stats)
    pbc_graph = metrics.build_pbc_graph(pbc, cfg.include_measurements)
    pbc_graph_section = _graph_section(pbc_graph, cfg.seed)
    pbc_grid = metrics.pbc_density(pbc, cfg.bins, cfg.include_measurements)
    ops_per_qubit = metrics.pbc_ops_per_qubit(pbc)

    stats = {
        "schema_version": SCHEMA_VERSION,
        "source": {
            "name": source_name,
            "n_qubits": circuit.n_qubits,
            "n_clbits": circuit.n_clbits,
        },
        "pipeline": {
            "label": cfg.pipeline_label(),
            "synth": cfg.synth,
            "sk_depth": cfg.sk_depth if cfg.synth == "sk" else None,
            "sk_base_length": cfg.sk_base_length if cfg.synth == "sk" else None,
            "pbc_optimization": cfg.pbc_opt,
            "include_measurements": cfg.include_measurements,
            "weight_scope": cfg.weight_scope,
            "bins": cfg.bins,
            "seed": cfg.seed,
        },
        # canonical top-level keys
        "t_count": cts.t_count,
        "qubit_interaction_degree": {
            "mean": ct_graph_section["degree_mean_weighted"],
            "std": ct_graph_section["degree_std_weighted"],
            "per_qubit": ct_graph_section["interaction_degree"],
        },
        "pbc_t_operators": pbc_stats.optimized_rotation_count,
        "pbc_avg_pauli_weight": opt_weights.mean,
        "total_gates": cts.total_gates,
        "depth": cts.depth,
        "clifford_gates": cts.clifford_count,
        "easy_clifford": cts.easy_clifford,
        "hard_clifford": cts.hard_clifford,
        "graph_density": ct_graph_section["graph_density"],
        "degree_mean_unweighted": ct_graph_section["degree_mean_unweighted"],
        "degree_std_unweighted": ct_graph_section["degree_std_unweighted"],
        "degree_mean_weighted": ct_graph_section["degree_mean_weighted"],
        "modularity": ct_graph_section["modularity"],
        "num_communities": ct_graph_section["num_communities"],
        "rotation_reduction_pct": reductions["rotation_reduction_pct"],
        "weight_reduction_pct": reductions["weight_reduction_pct"],
        # full sections
        "clifford_t": {
            "counts": dict(sorted(cts.counts.items())),
            "total_gates": cts.total_gates,
            "depth": cts.depth,
            "t_count": cts.t_count,
            "clifford_gates": cts.clifford_count,
            "easy_clifford": cts.easy_clifford,
            "hard_clifford": cts.hard_clifford,
            "per_qubit_t": cts.per_qubit_t,
            "t_timing": timing,
            "interaction_graph": ct_graph_section,
            "synthesis": synth_report.to_json() if synth_report else None,
        },
        "pbc": {
            "raw_rotations": pbc_stats.raw_rotation_count,
            "optimized_rotations": pbc_stats.optimized_rotation_count,
            "rotation_reduction_pct": reductions["rotation_reduction_pct"],
            "raw_weight": {
                "mean": pbc_stats.raw_weight_mean,
                "std": pbc_stats.raw_weight_std,
            },
            "optimized_weight": opt_weights.to_json(),
            "weight_reduction_pct": reductions["weight_reduction_pct"],
            "optimization_passes": pbc_stats.optimization_passes,
            "layer_count": pbc_stats.layer_count,
            "measurement_count": len(pbc.measurements.rows),
            "ops_per_qubit": ops_per_qubit,
            "interaction_graph": pbc_graph_section,
        },
    }
    return AnalysisResult(cfg, ct, pbc, pbc_stats, stats, t_grid, pbc_grid)
