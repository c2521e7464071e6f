"""Normalization of arbitrary supported circuits to the Clifford+Rz gate set.

Target set: {H, S, Sdg, X, Y, Z, T, Tdg, CNOT, Rz, Measure, Barrier}.
Adjacent Rz gates are deliberately NOT merged; the toolkit characterizes
unoptimized baselines.  All rewrites are exact up to global phase and are
pinned by unitary-equivalence tests.
"""
from __future__ import annotations

from .circuit import CLIFFORD_RZ_KINDS, GateCircuit, GateOp

# Ry(t) == S H Rz(t) H Sdg as a matrix product, i.e. Sdg applied first.
_RY_PRE = ("Sdg", "H")
_RY_POST = ("H", "S")


def _ry_ops(q: int, theta: float) -> list[GateOp]:
    ops = [GateOp(k, (q,)) for k in _RY_PRE]
    ops.append(GateOp("Rz", (q,), (theta,)))
    ops.extend(GateOp(k, (q,)) for k in _RY_POST)
    return ops


def _ccx_ops(a: int, b: int, c: int) -> list[GateOp]:
    """Canonical 7-T, 6-CNOT, 2-H Toffoli network (controls a,b; target c)."""
    return [
        GateOp("H", (c,)),
        GateOp("CNOT", (b, c)),
        GateOp("Tdg", (c,)),
        GateOp("CNOT", (a, c)),
        GateOp("T", (c,)),
        GateOp("CNOT", (b, c)),
        GateOp("Tdg", (c,)),
        GateOp("CNOT", (a, c)),
        GateOp("T", (b,)),
        GateOp("T", (c,)),
        GateOp("H", (c,)),
        GateOp("CNOT", (a, b)),
        GateOp("T", (a,)),
        GateOp("Tdg", (b,)),
        GateOp("CNOT", (a, b)),
    ]


def _expand(op: GateOp) -> list[GateOp]:
    kind = op.kind
    if kind in CLIFFORD_RZ_KINDS:
        return [op]
    if kind == "Rx":
        q = op.qubits[0]
        return [GateOp("H", (q,)), GateOp("Rz", (q,), op.params), GateOp("H", (q,))]
    if kind == "Ry":
        return _ry_ops(op.qubits[0], op.params[0])
    if kind == "U1":
        return [GateOp("Rz", op.qubits, op.params)]
    if kind == "U2":
        phi, lam = op.params
        q = op.qubits[0]
        out = [GateOp("Rz", (q,), (lam,))]
        out.extend(_ry_ops(q, 1.5707963267948966))
        out.append(GateOp("Rz", (q,), (phi,)))
        return out
    if kind == "U3":
        theta, phi, lam = op.params
        q = op.qubits[0]
        out = [GateOp("Rz", (q,), (lam,))]
        out.extend(_ry_ops(q, theta))
        out.append(GateOp("Rz", (q,), (phi,)))
        return out
    if kind == "CU1":
        lam = op.params[0]
        c, t = op.qubits
        return [
            GateOp("Rz", (c,), (lam / 2,)),
            GateOp("CNOT", (c, t)),
            GateOp("Rz", (t,), (-lam / 2,)),
            GateOp("CNOT", (c, t)),
            GateOp("Rz", (t,), (lam / 2,)),
        ]
    if kind == "CZ":
        c, t = op.qubits
        return [GateOp("H", (t,)), GateOp("CNOT", (c, t)), GateOp("H", (t,))]
    if kind == "SWAP":
        a, b = op.qubits
        return [GateOp("CNOT", (a, b)), GateOp("CNOT", (b, a)), GateOp("CNOT", (a, b))]
    if kind == "CCX":
        return _ccx_ops(*op.qubits)
    raise AssertionError(f"no rewrite for gate kind {kind}")


def normalize_to_clifford_rz(circuit: GateCircuit) -> GateCircuit:
    """Rewrite every op into the Clifford+Rz set; idempotent."""
    ops: list[GateOp] = []
    for op in circuit.ops:
        ops.extend(_expand(op))
    out = GateCircuit(circuit.n_qubits, circuit.n_clbits, ops)
    out.metadata.update(circuit.metadata)
    return out
