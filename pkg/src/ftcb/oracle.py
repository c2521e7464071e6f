"""Dense-matrix brute-force oracle.

Deliberately naive ground truth for the symbolic machinery: full 2^n
unitaries (n <= 10), Pauli matrices, PBC equivalence fidelity, and
exhaustive modularity maximization.  Nothing here is shared with the
implementations it checks.

Endianness is fixed once: qubit 0 is the most significant bit of the
state index.  A dedicated test asserts this convention.
"""
from __future__ import annotations

import math
import numpy as np

from .circuit import GateCircuit, GateOp
from .pauli import PauliString

MAX_UNITARY_QUBITS = 10
MAX_PBC_QUBITS = 6
MAX_MODULARITY_NODES = 10

_SQ2 = 1 / math.sqrt(2)

_FIXED_1Q = {
    "H": np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    "S": np.diag([1, 1j]).astype(complex),
    "Sdg": np.diag([1, -1j]).astype(complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.diag([1, -1]).astype(complex),
    "T": np.diag([1, np.exp(1j * math.pi / 4)]).astype(complex),
    "Tdg": np.diag([1, np.exp(-1j * math.pi / 4)]).astype(complex),
}

_PAULI_MATS = {
    "I": np.eye(2, dtype=complex),
    "X": _FIXED_1Q["X"],
    "Y": _FIXED_1Q["Y"],
    "Z": _FIXED_1Q["Z"],
}


class OracleError(ValueError):
    pass


def rz(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)]).astype(complex)


def rx(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def ry(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def u3(theta: float, phi: float, lam: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array(
        [[c, -np.exp(1j * lam) * s],
         [np.exp(1j * phi) * s, np.exp(1j * (phi + lam)) * c]], dtype=complex)


def gate_matrix_1q(op: GateOp) -> np.ndarray:
    if op.kind in _FIXED_1Q:
        return _FIXED_1Q[op.kind]
    if op.kind == "Rz":
        return rz(op.params[0])
    if op.kind == "Rx":
        return rx(op.params[0])
    if op.kind == "Ry":
        return ry(op.params[0])
    if op.kind == "U1":
        return np.diag([1, np.exp(1j * op.params[0])]).astype(complex)
    if op.kind == "U2":
        return u3(math.pi / 2, op.params[0], op.params[1])
    if op.kind == "U3":
        return u3(*op.params)
    raise OracleError(f"not a one-qubit gate: {op.kind}")


def _embed_1q(m: np.ndarray, q: int, n: int) -> np.ndarray:
    return np.kron(np.kron(np.eye(2 ** q), m), np.eye(2 ** (n - 1 - q)))


def _bit(n: int, q: int) -> int:
    # state-index bit mask for qubit q under the qubit-0-most-significant layout
    return 1 << (n - 1 - q)


def _permutation_matrix(n: int, mapper) -> np.ndarray:
    dim = 1 << n
    g = np.zeros((dim, dim), dtype=complex)
    for j in range(dim):
        g[mapper(j), j] = 1.0
    return g


def gate_unitary(op: GateOp, n: int) -> np.ndarray:
    """Full 2^n x 2^n matrix for one op."""
    if op.kind == "Measure":
        raise OracleError("cannot take the unitary of a measurement")
    if op.kind == "Barrier":
        return np.eye(1 << n, dtype=complex)
    if len(op.qubits) == 1:
        return _embed_1q(gate_matrix_1q(op), op.qubits[0], n)
    if op.kind == "CNOT":
        c, t = (_bit(n, q) for q in op.qubits)
        return _permutation_matrix(n, lambda j: j ^ t if j & c else j)
    if op.kind == "SWAP":
        a, b = (_bit(n, q) for q in op.qubits)
        return _permutation_matrix(
            n, lambda j: j ^ a ^ b if bool(j & a) != bool(j & b) else j)
    if op.kind == "CCX":
        c1, c2, t = (_bit(n, q) for q in op.qubits)
        return _permutation_matrix(
            n, lambda j: j ^ t if (j & c1) and (j & c2) else j)
    if op.kind == "CZ":
        a, b = (_bit(n, q) for q in op.qubits)
        d = np.ones(1 << n, dtype=complex)
        for j in range(1 << n):
            if (j & a) and (j & b):
                d[j] = -1
        return np.diag(d)
    if op.kind == "CU1":
        a, b = (_bit(n, q) for q in op.qubits)
        d = np.ones(1 << n, dtype=complex)
        ph = np.exp(1j * op.params[0])
        for j in range(1 << n):
            if (j & a) and (j & b):
                d[j] = ph
        return np.diag(d)
    raise OracleError(f"no dense matrix rule for {op.kind}")


def circuit_unitary(circuit: GateCircuit) -> np.ndarray:
    """Left-multiplied gate product in circuit order (earliest op rightmost)."""
    if circuit.n_qubits > MAX_UNITARY_QUBITS:
        raise OracleError(
            f"{circuit.n_qubits} qubits exceeds the oracle cap of {MAX_UNITARY_QUBITS}")
    u = np.eye(1 << circuit.n_qubits, dtype=complex)
    for op in circuit.ops:
        if op.kind == "Measure":
            raise OracleError("circuit_unitary does not accept measurements")
        if op.kind == "Barrier":
            continue
        u = gate_unitary(op, circuit.n_qubits) @ u
    return u


def pauli_matrix(p: PauliString) -> np.ndarray:
    if p.n > MAX_UNITARY_QUBITS:
        raise OracleError(f"{p.n} qubits exceeds the oracle cap")
    m = np.array([[1]], dtype=complex)
    for ch in p.with_sign(1).label():
        m = np.kron(m, _PAULI_MATS[ch])
    return p.sign * m


def rotation_matrix(p: PauliString, theta: float) -> np.ndarray:
    """exp(-i*theta/2 * P) for a signed Pauli string."""
    mat = pauli_matrix(p)
    dim = mat.shape[0]
    return math.cos(theta / 2) * np.eye(dim) - 1j * math.sin(theta / 2) * mat


def projective_fidelity(u: np.ndarray, v: np.ndarray) -> float:
    """|tr(U^dag V)| / dim; 1 iff equal up to global phase."""
    dim = u.shape[0]
    return float(abs(np.trace(u.conj().T @ v)) / dim)


def strip_measurements(circuit: GateCircuit) -> GateCircuit:
    ops = [op for op in circuit.ops if op.kind not in ("Measure", "Barrier")]
    return GateCircuit(circuit.n_qubits, 0, ops)


def pbc_unitary(pbc) -> np.ndarray:
    """Clifford trace times the rotation product, earliest rotation rightmost."""
    n = pbc.n
    if n > MAX_PBC_QUBITS:
        raise OracleError(f"{n} qubits exceeds the PBC oracle cap of {MAX_PBC_QUBITS}")
    b = np.eye(1 << n, dtype=complex)
    for op in pbc.clifford_trace.source_gates:
        if op.kind in ("Measure", "Barrier"):
            continue
        b = gate_unitary(op, n) @ b
    for part in pbc.clifford_trace.absorbed_parts:
        b = b @ rotation_matrix(part.pauli, part.angle.radians)
    for rot in reversed(pbc.rotations):
        b = b @ rotation_matrix(rot.pauli, rot.angle.radians)
    return b


def pbc_equivalence(circuit: GateCircuit, pbc) -> float:
    """Fidelity |tr(U_c^dag B)|/2^n between a circuit and its PBC form."""
    u = circuit_unitary(strip_measurements(circuit))
    return projective_fidelity(u, pbc_unitary(pbc))


# --- exhaustive modularity ---------------------------------------------------

def _set_partitions(n: int):
    """All partitions of range(n) via restricted growth strings, lexicographic."""
    if n == 0:
        yield []
        return
    rgs = [0] * n

    def rec(i: int, maximum: int):
        if i == n:
            groups: list[list[int]] = [[] for _ in range(maximum + 1)]
            for node, g in enumerate(rgs):
                groups[g].append(node)
            yield groups
            return
        for g in range(maximum + 2):
            rgs[i] = g
            yield from rec(i + 1, max(maximum, g))

    yield from rec(1, 0)


def _modularity_of_partition(graph, groups: list[list[int]]) -> float:
    """Eq.-style weighted modularity, computed directly from the edge map."""
    m = float(sum(graph.weights.values()))
    if m == 0:
        return 0.0
    comm = {}
    for ci, g in enumerate(groups):
        for node in g:
            comm[node] = ci
    degree = [0.0] * graph.n
    for (u, v), w in graph.weights.items():
        degree[u] += w
        degree[v] += w
    q = 0.0
    for ci, g in enumerate(groups):
        l_c = sum(w for (u, v), w in graph.weights.items()
                  if comm[u] == ci and comm[v] == ci)
        k_c = sum(degree[u] for u in g)
        q += l_c / m - (k_c / (2 * m)) ** 2
    return q


def exhaustive_modularity(graph) -> tuple[float, list[list[int]]]:
    """Maximum modularity over every set partition; lexicographic tie-break."""
    if graph.n > MAX_MODULARITY_NODES:
        raise OracleError(
            f"{graph.n} nodes exceeds the exhaustive cap of {MAX_MODULARITY_NODES}")
    best_q = -math.inf
    best = None
    for groups in _set_partitions(graph.n):
        q = _modularity_of_partition(graph, groups)
        if q > best_q + 1e-15:
            best_q, best = q, [list(g) for g in groups]
    return best_q, best
