"""Characterization statistics: gate counts, interaction graphs, Louvain
modularity, density and degree statistics, T-gate spatio-temporal
statistics, Pauli weight statistics, and optimization deltas.

Degree conventions: the weighted interaction degree of a node is the sum
of incident edge weights; the unweighted degree counts incident edges.
Both are reported (tables in the wild mix the two).  All spreads are
population standard deviations.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .circuit import CLIFFORD_T_KINDS, GateCircuit, circuit_depth, op_layers
from .pbc import PBCCircuit


class MetricsError(ValueError):
    pass


# --- interaction graphs ------------------------------------------------------

@dataclass
class InteractionGraph:
    """Weighted undirected graph over logical qubits; no self-loops."""

    n: int
    weights: dict[tuple[int, int], int] = field(default_factory=dict)

    def add(self, i: int, j: int, w: int = 1):
        if i == j:
            raise MetricsError("self-loops are not allowed")
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise MetricsError(f"node index out of range (n={self.n})")
        key = (i, j) if i < j else (j, i)
        self.weights[key] = self.weights.get(key, 0) + w

    def total_weight(self) -> int:
        return sum(self.weights.values())

    def weighted_degrees(self) -> list[float]:
        deg = [0.0] * self.n
        for (i, j), w in self.weights.items():
            deg[i] += w
            deg[j] += w
        return deg

    def unweighted_degrees(self) -> list[int]:
        deg = [0] * self.n
        for (i, j) in self.weights:
            deg[i] += 1
            deg[j] += 1
        return deg

    def neighbors(self) -> list[dict[int, float]]:
        adj: list[dict[int, float]] = [dict() for _ in range(self.n)]
        for (i, j), w in self.weights.items():
            adj[i][j] = adj[i].get(j, 0) + w
            adj[j][i] = adj[j].get(i, 0) + w
        return adj

    def edge_list(self) -> list[list[int]]:
        return [[i, j, w] for (i, j), w in sorted(self.weights.items())]


def build_ct_graph(circuit: GateCircuit) -> InteractionGraph:
    """One weight increment per CNOT on its (control, target) pair.

    Total on any circuit: single-qubit gates contribute nothing, so this
    also characterizes normalized Clifford+Rz circuits before synthesis.
    """
    g = InteractionGraph(circuit.n_qubits)
    for op in circuit.ops:
        if op.kind == "CNOT":
            g.add(op.qubits[0], op.qubits[1])
    return g


def build_pbc_graph(pbc: PBCCircuit, include_measurements: bool = True
                    ) -> InteractionGraph:
    """Every unordered support pair of every operator gets +1."""
    g = InteractionGraph(pbc.n)
    operators = [rot.pauli for rot in pbc.rotations]
    if include_measurements:
        operators.extend(pbc.measurements.paulis())
    for p in operators:
        sup = p.support()
        for a in range(len(sup)):
            for b in range(a + 1, len(sup)):
                g.add(sup[a], sup[b])
    return g


def graph_density(g: InteractionGraph) -> float:
    """Total edge weight over the complete-graph edge count; may exceed 1."""
    if g.n < 2:
        raise MetricsError("density needs at least 2 nodes")
    return g.total_weight() / (g.n * (g.n - 1) / 2)


def _mean_std(values) -> tuple[float, float]:
    vals = list(values)
    if not vals:
        return 0.0, 0.0
    mean = sum(vals) / len(vals)
    var = sum((v - mean) ** 2 for v in vals) / len(vals)
    return mean, var ** 0.5


def degree_stats(g: InteractionGraph) -> dict:
    wdeg = g.weighted_degrees()
    udeg = g.unweighted_degrees()
    wmean, wstd = _mean_std(wdeg)
    umean, ustd = _mean_std(udeg)
    return {
        "weighted_mean": wmean, "weighted_std": wstd,
        "unweighted_mean": umean, "unweighted_std": ustd,
        "interaction_degree": wdeg, "unweighted_degree": udeg,
    }


# --- modularity / Louvain ------------------------------------------------------

def modularity(g: InteractionGraph, assignment: list[int]) -> float:
    """Weighted modularity of a node->community assignment.

    Q = sum_c [ L_c/m - (k_c/2m)^2 ] with L_c the intra-community weight,
    k_c the weighted degree sum of community c, and m the total weight.
    Zero-edge graphs have Q = 0 by convention.
    """
    m = float(g.total_weight())
    if m == 0:
        return 0.0
    intra: dict[int, float] = {}
    k: dict[int, float] = {}
    for (i, j), w in g.weights.items():
        if assignment[i] == assignment[j]:
            intra[assignment[i]] = intra.get(assignment[i], 0.0) + w
    for node, deg in enumerate(g.weighted_degrees()):
        c = assignment[node]
        k[c] = k.get(c, 0.0) + deg
    q = 0.0
    for c in k:
        q += intra.get(c, 0.0) / m - (k[c] / (2 * m)) ** 2
    return q


@dataclass
class CommunityResult:
    assignment: list[int]
    q: float
    community_count: int


def _relabel(assignment: list[int]) -> list[int]:
    """Contiguous ids from 0 in order of first appearance."""
    seen: dict[int, int] = {}
    out = []
    for c in assignment:
        if c not in seen:
            seen[c] = len(seen)
        out.append(seen[c])
    return out


def louvain(g: InteractionGraph, seed: int = 0, shuffle: bool = False
            ) -> CommunityResult:
    """Two-phase Louvain maximization of weighted modularity.

    Nodes are processed in index order; `shuffle` enables a seeded
    shuffle instead.  Deterministic for fixed inputs, seed, and flag.
    """
    if g.n == 0:
        raise MetricsError("empty graph")
    if g.total_weight() == 0:
        assignment = list(range(g.n))
        return CommunityResult(assignment, 0.0, g.n)
    rng = random.Random(seed)

    # current partition of original nodes, refined level by level
    node_groups: list[list[int]] = [[v] for v in range(g.n)]
    adj = g.neighbors()
    m = float(g.total_weight())
    self_loops = [0.0] * g.n  # aggregated graphs grow self-weights

    while True:
        n = len(node_groups)
        community = list(range(n))
        comm_total = [self_loops[v] + sum(adj[v].values()) for v in range(n)]
        node_strength = comm_total[:]
        improved_any = False
        order = list(range(n))
        if shuffle:
            rng.shuffle(order)
        moved = True
        while moved:
            moved = False
            for v in order:
                cv = community[v]
                k_v = node_strength[v]
                # weight from v to each neighboring community
                links: dict[int, float] = {}
                for u, w in adj[v].items():
                    links[community[u]] = links.get(community[u], 0.0) + w
                comm_total[cv] -= k_v
                base = links.get(cv, 0.0) - comm_total[cv] * k_v / (2 * m)
                best_c, best_gain = cv, 0.0
                for c, w_in in sorted(links.items()):
                    if c == cv:
                        continue
                    gain = (w_in - comm_total[c] * k_v / (2 * m)) - base
                    if gain > best_gain + 1e-12:
                        best_gain, best_c = gain, c
                comm_total[best_c] += k_v
                if best_c != cv:
                    community[v] = best_c
                    moved = True
                    improved_any = True
        if not improved_any:
            break
        # aggregate: one node per non-empty community
        ids = _relabel(community)
        n_new = max(ids) + 1
        new_groups: list[list[int]] = [[] for _ in range(n_new)]
        for v, c in enumerate(ids):
            new_groups[c].extend(node_groups[v])
        new_self = [0.0] * n_new
        new_adj: list[dict[int, float]] = [dict() for _ in range(n_new)]
        for v in range(n):
            cv = ids[v]
            new_self[cv] += self_loops[v]
            for u, w in adj[v].items():
                cu = ids[u]
                if cu == cv:
                    new_self[cv] += w / 2  # each intra edge visited twice
                else:
                    new_adj[cv][cu] = new_adj[cv].get(cu, 0.0) + w
        node_groups = new_groups
        adj = new_adj
        self_loops = new_self
        if len(node_groups) == n:
            break

    assignment = [0] * g.n
    for c, group in enumerate(node_groups):
        for v in group:
            assignment[v] = c
    assignment = _relabel(assignment)
    q = modularity(g, assignment)
    return CommunityResult(assignment, q, max(assignment) + 1)


# --- Clifford+T statistics ------------------------------------------------------

EASY_CLIFFORD = ("H", "X", "Z")
HARD_CLIFFORD = ("S", "Sdg", "CNOT")


@dataclass
class CTStats:
    counts: dict[str, int]
    total_gates: int
    t_count: int
    clifford_count: int
    easy_clifford: int
    hard_clifford: int
    depth: int
    per_qubit_t: list[int]


def ct_stats(circuit: GateCircuit) -> CTStats:
    """Gate tallies over the Clifford+T set; Measure/Barrier are not gates."""
    bad = circuit.gate_kinds() - CLIFFORD_T_KINDS
    if bad:
        raise MetricsError(f"not a Clifford+T circuit: {sorted(bad)}")
    counts: dict[str, int] = {}
    per_qubit_t = [0] * circuit.n_qubits
    for op in circuit.ops:
        if op.kind in ("Measure", "Barrier"):
            continue
        counts[op.kind] = counts.get(op.kind, 0) + 1
        if op.kind in ("T", "Tdg"):
            per_qubit_t[op.qubits[0]] += 1
    total = sum(counts.values())
    t_count = counts.get("T", 0) + counts.get("Tdg", 0)
    return CTStats(
        counts=counts,
        total_gates=total,
        t_count=t_count,
        clifford_count=total - t_count,
        easy_clifford=sum(counts.get(k, 0) for k in EASY_CLIFFORD),
        hard_clifford=sum(counts.get(k, 0) for k in HARD_CLIFFORD),
        depth=circuit_depth(circuit),
        per_qubit_t=per_qubit_t,
    )


# --- T-gate spatio-temporal statistics ----------------------------------------------

@dataclass
class DensityGrid:
    """rows = qubits, cols = time bins, integer event counts."""

    cells: list[list[int]]

    @property
    def n_rows(self) -> int:
        return len(self.cells)

    @property
    def n_bins(self) -> int:
        return len(self.cells[0]) if self.cells else 0

    def total(self) -> int:
        return sum(sum(row) for row in self.cells)

    def to_csv(self) -> str:
        header = "qubit," + ",".join(f"bin{b}" for b in range(self.n_bins))
        lines = [header]
        for q, row in enumerate(self.cells):
            lines.append(str(q) + "," + ",".join(str(c) for c in row))
        return "\n".join(lines) + "\n"


def _events_to_grid(events: list[tuple[int, int]], n_qubits: int, depth: int,
                    n_bins: int) -> DensityGrid:
    if n_bins < 1:
        raise MetricsError("need at least one bin")
    cells = [[0] * n_bins for _ in range(n_qubits)]
    for qubit, layer in events:
        if depth > 0:
            b = min(layer * n_bins // depth, n_bins - 1)
        else:
            b = 0
        cells[qubit][b] += 1
    return DensityGrid(cells)


def t_density(circuit: GateCircuit, n_bins: int) -> DensityGrid:
    """T/Tdg events at (qubit, 0-based ASAP layer), folded into time bins."""
    depth = circuit_depth(circuit)
    layers = op_layers(circuit)
    events = [(op.qubits[0], layers[i]) for i, op in enumerate(circuit.ops)
              if op.kind in ("T", "Tdg")]
    return _events_to_grid(events, circuit.n_qubits, depth, n_bins)


def pbc_density(pbc: PBCCircuit, n_bins: int,
                include_measurements: bool = True) -> DensityGrid:
    """Support events of PBC operators over execution order bins.

    Rotations occupy sequential time slots in list order; measurement
    operators share the final slot.
    """
    if n_bins < 1:
        raise MetricsError("need at least one bin")
    operators: list = [(i, rot.pauli) for i, rot in enumerate(pbc.rotations)]
    depth = len(pbc.rotations)
    if include_measurements:
        operators.extend((depth, row) for row in pbc.measurements.paulis())
        depth += 1
    events = [(q, slot) for slot, p in operators for q in p.support()]
    return _events_to_grid(events, pbc.n, depth, n_bins)


def t_timing(circuit: GateCircuit) -> dict:
    """Inter-T intervals per qubit and peak per-layer T concurrency."""
    bad = circuit.gate_kinds() - CLIFFORD_T_KINDS
    if bad:
        raise MetricsError(f"not a Clifford+T circuit: {sorted(bad)}")
    layers = op_layers(circuit)
    per_qubit_layers: list[list[int]] = [[] for _ in range(circuit.n_qubits)]
    layer_counts: dict[int, int] = {}
    for i, op in enumerate(circuit.ops):
        if op.kind in ("T", "Tdg"):
            per_qubit_layers[op.qubits[0]].append(layers[i])
            layer_counts[layers[i]] = layer_counts.get(layers[i], 0) + 1
    intervals: list[int] = []
    for seq in per_qubit_layers:
        intervals.extend(b - a for a, b in zip(seq, seq[1:]))
    counts = [len(seq) for seq in per_qubit_layers]
    mean, std = _mean_std(counts)
    return {
        "per_qubit_t_mean": mean,
        "per_qubit_t_var": std ** 2,
        "per_qubit_t_max": max(counts, default=0),
        "inter_t_intervals": intervals,
        "peak_concurrency": max(layer_counts.values(), default=0),
    }


# --- Pauli weight statistics ----------------------------------------------------------

@dataclass
class WeightStats:
    histogram: dict[int, int]
    mean: float | None
    std: float | None
    count: int

    def to_json(self) -> dict:
        return {
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "mean": self.mean,
            "std": self.std,
            "count": self.count,
        }


def pauli_weight_stats(pbc: PBCCircuit, scope: str = "rotations") -> WeightStats:
    if scope == "rotations":
        paulis = [rot.pauli for rot in pbc.rotations]
    elif scope == "measurements":
        paulis = pbc.measurements.paulis()
    elif scope == "both":
        paulis = [rot.pauli for rot in pbc.rotations] + pbc.measurements.paulis()
    else:
        raise MetricsError(f"unknown weight-stats scope {scope!r}")
    hist: dict[int, int] = {}
    for p in paulis:
        w = p.weight
        hist[w] = hist.get(w, 0) + 1
    if not paulis:
        return WeightStats({}, None, None, 0)
    mean, std = _mean_std(p.weight for p in paulis)
    return WeightStats(hist, mean, std, len(paulis))


def pbc_ops_per_qubit(pbc: PBCCircuit) -> list[int]:
    """Operators (rotations and measurements) whose support touches each qubit."""
    counts = [0] * pbc.n
    for p in [rot.pauli for rot in pbc.rotations] + pbc.measurements.paulis():
        for q in p.support():
            counts[q] += 1
    return counts
