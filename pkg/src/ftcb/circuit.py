"""Gate-level circuit IR: ops over named gate kinds with qubit indices and angles."""
from __future__ import annotations

from dataclasses import dataclass, field


class CircuitError(ValueError):
    pass


# kind -> (arity, param count); Barrier takes any number of qubits.
GATE_SIGNATURES = {
    "H": (1, 0), "S": (1, 0), "Sdg": (1, 0),
    "X": (1, 0), "Y": (1, 0), "Z": (1, 0),
    "T": (1, 0), "Tdg": (1, 0),
    "CNOT": (2, 0), "CZ": (2, 0), "SWAP": (2, 0), "CCX": (3, 0),
    "Rz": (1, 1), "Rx": (1, 1), "Ry": (1, 1),
    "U1": (1, 1), "U2": (1, 2), "U3": (1, 3),
    "CU1": (2, 1),
    "Measure": (1, 0),
    "Barrier": (None, 0),
}

CLIFFORD_T_KINDS = frozenset(
    {"H", "S", "Sdg", "X", "Y", "Z", "T", "Tdg", "CNOT", "Measure", "Barrier"})
CLIFFORD_RZ_KINDS = CLIFFORD_T_KINDS | {"Rz"}


@dataclass(frozen=True)
class GateOp:
    kind: str
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()
    clbit: int | None = None

    def __post_init__(self):
        sig = GATE_SIGNATURES.get(self.kind)
        if sig is None:
            raise CircuitError(f"unknown gate kind {self.kind!r}")
        arity, nparams = sig
        if arity is not None and len(self.qubits) != arity:
            raise CircuitError(
                f"{self.kind} takes {arity} qubit(s), got {len(self.qubits)}")
        if len(set(self.qubits)) != len(self.qubits):
            raise CircuitError(f"{self.kind} qubit operands must be distinct")
        if len(self.params) != nparams:
            raise CircuitError(
                f"{self.kind} takes {nparams} parameter(s), got {len(self.params)}")
        if (self.clbit is not None) != (self.kind == "Measure"):
            raise CircuitError("clbit is set exactly for Measure ops")


def gate(kind: str, *qubits: int, params: tuple[float, ...] = (), clbit: int | None = None) -> GateOp:
    return GateOp(kind, tuple(qubits), tuple(float(p) for p in params), clbit)


@dataclass
class GateCircuit:
    n_qubits: int
    n_clbits: int = 0
    ops: list[GateOp] = field(default_factory=list)
    # parse-time provenance such as the flattened register map; ignored by ==
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.n_qubits <= 0:
            raise CircuitError("circuit needs at least one qubit")
        for op in self.ops:
            self._check(op)

    def _check(self, op: GateOp):
        for q in op.qubits:
            if not 0 <= q < self.n_qubits:
                raise CircuitError(f"qubit index {q} out of range (n={self.n_qubits})")
        if op.clbit is not None and not 0 <= op.clbit < self.n_clbits:
            raise CircuitError(f"clbit index {op.clbit} out of range (m={self.n_clbits})")

    def append(self, op: GateOp):
        self._check(op)
        self.ops.append(op)

    def extend(self, ops):
        for op in ops:
            self.append(op)

    def count_kinds(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for op in self.ops:
            counts[op.kind] = counts.get(op.kind, 0) + 1
        return counts

    def gate_kinds(self) -> set[str]:
        return {op.kind for op in self.ops}

    def __iter__(self):
        return iter(self.ops)

    def __len__(self):
        return len(self.ops)


def circuit_depth(circuit: GateCircuit) -> int:
    """ASAP layering depth.

    Each op lands on layer 1 + max(finish layer of its qubits); Barrier
    occupies no layer but aligns its qubits; Measure counts as a normal
    depth-1 op.
    """
    level = [0] * circuit.n_qubits
    for op in circuit.ops:
        qs = op.qubits if op.qubits else tuple(range(circuit.n_qubits))
        if op.kind == "Barrier":
            if not qs:
                continue
            top = max(level[q] for q in qs)
            for q in qs:
                level[q] = top
        else:
            layer = 1 + max(level[q] for q in qs)
            for q in qs:
                level[q] = layer
    return max(level, default=0)


def op_layers(circuit: GateCircuit) -> list[int]:
    """0-based ASAP layer index per op (Barrier ops get -1)."""
    level = [0] * circuit.n_qubits
    out = []
    for op in circuit.ops:
        qs = op.qubits if op.qubits else tuple(range(circuit.n_qubits))
        if op.kind == "Barrier":
            if qs:
                top = max(level[q] for q in qs)
                for q in qs:
                    level[q] = top
            out.append(-1)
        else:
            layer = 1 + max(level[q] for q in qs)
            for q in qs:
                level[q] = layer
            out.append(layer - 1)
    return out
