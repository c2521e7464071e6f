"""Approximate single-qubit Rz -> Clifford+T synthesis (Solovay-Kitaev).

The recursion uses the Dawson-Nielsen balanced group commutator: at level
n the approximation is U_n = V W V^dag W^dag U_{n-1} where V and W are
equal-angle rotations whose commutator reproduces the residual
Delta = U U_{n-1}^dag.  Level 0 is a nearest-neighbor lookup in an
exhaustively enumerated word library.

Distances are projective: d(U,V) = sqrt(1 - |tr(U^dag V)|/2), so global
phase never matters; the per-gate fidelity is the worst-case entanglement
fidelity F = (|tr(U^dag V)|/2)^2 = (1 - d^2)^2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .circuit import CLIFFORD_RZ_KINDS, CLIFFORD_T_KINDS, GateCircuit, GateOp


class SynthesisError(ValueError):
    pass


_SQ2 = 1 / math.sqrt(2)
GENERATORS = ("H", "S", "Sdg", "T", "Tdg", "X", "Z")
_LETTER_MATS = {
    "H": np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    "S": np.diag([1, 1j]).astype(complex),
    "Sdg": np.diag([1, -1j]).astype(complex),
    "T": np.diag([1, np.exp(1j * math.pi / 4)]).astype(complex),
    "Tdg": np.diag([1, np.exp(-1j * math.pi / 4)]).astype(complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Z": np.diag([1, -1]).astype(complex),
}
_INVERSE_LETTER = {"H": "H", "S": "Sdg", "Sdg": "S", "T": "Tdg", "Tdg": "T",
                   "X": "X", "Z": "Z"}


def rz_matrix(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)]).astype(complex)


def rx_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def ry_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def check_unitary(u: np.ndarray, tol: float = 1e-10):
    if u.shape != (2, 2) or np.linalg.norm(u.conj().T @ u - np.eye(2)) >= tol:
        raise SynthesisError("input is not a 2x2 unitary")


def distance(u: np.ndarray, v: np.ndarray) -> float:
    """Projective trace distance sqrt(max(0, 1 - |tr(U^dag V)|/2)).

    Trace deficits below a few ulp are indistinguishable from zero in
    doubles and are clamped, so exact library hits report distance 0.
    """
    t = abs(np.trace(u.conj().T @ v)) / 2
    deficit = 1.0 - t
    if deficit < 5e-16:
        return 0.0
    return math.sqrt(deficit)


def fidelity_from_distance(d: float) -> float:
    """Worst-case entanglement fidelity of a distance-d approximation."""
    if not 0.0 <= d <= 1.0:
        raise SynthesisError(f"distance {d} outside [0, 1]")
    return (1.0 - d * d) ** 2


def word_matrix(letters: tuple[str, ...]) -> np.ndarray:
    """Letters are applied in sequence order: matrix = last @ ... @ first."""
    m = np.eye(2, dtype=complex)
    for letter in letters:
        m = _LETTER_MATS[letter] @ m
    return m


@dataclass(frozen=True)
class GateWord:
    letters: tuple[str, ...]
    matrix: np.ndarray = field(compare=False, repr=False, default=None)

    def __post_init__(self):
        if self.matrix is None:
            object.__setattr__(self, "matrix", word_matrix(self.letters))

    def inverse(self) -> "GateWord":
        letters = tuple(_INVERSE_LETTER[l] for l in reversed(self.letters))
        return GateWord(letters, self.matrix.conj().T.copy())

    def concat(self, other: "GateWord") -> "GateWord":
        """self followed by other (other's matrix applied after self's)."""
        return GateWord(self.letters + other.letters, other.matrix @ self.matrix)

    @property
    def t_count(self) -> int:
        return sum(1 for l in self.letters if l in ("T", "Tdg"))

    def __len__(self):
        return len(self.letters)


def _su2(u: np.ndarray) -> np.ndarray:
    return u / np.sqrt(np.linalg.det(u))


def _canonical_key(u: np.ndarray, digits: int = 8) -> tuple:
    """Projective dedup key: SU(2)-normalize, fix the phase, round entries.

    The phase reference is the first entry whose magnitude is within 1e-9
    of the maximum; a plain argmax is unstable when magnitudes tie (which
    happens constantly for Clifford+T words) and would let phase-equal
    words slip past deduplication.
    """
    m = _su2(u)
    flat = m.reshape(-1)
    mags = np.abs(flat)
    k = int(np.argmax(mags > mags.max() - 1e-9))
    phase = flat[k] / mags[k]
    m = m / phase
    return tuple(np.round(m.reshape(-1).view(float), digits))


class BaseLibrary:
    """All distinct words of length <= max_length over GENERATORS.

    Built breadth-first with projective deduplication, so each unitary is
    represented by a shortest word.  Contains the empty (identity) word.
    """

    def __init__(self, max_length: int = 10):
        if max_length < 1:
            raise SynthesisError("base library length must be >= 1")
        self.max_length = max_length
        self.words: list[GateWord] = []
        self.sizes_by_length: list[int] = []
        self._build()
        self._mats = np.stack([w.matrix for w in self.words])

    def _build(self):
        seen: dict[tuple, int] = {}
        identity = GateWord(())
        self.words.append(identity)
        seen[_canonical_key(identity.matrix)] = 0
        frontier = [identity]
        self.sizes_by_length.append(1)
        for _ in range(self.max_length):
            new_frontier = []
            for word in frontier:
                for letter in GENERATORS:
                    cand = GateWord(word.letters + (letter,),
                                    _LETTER_MATS[letter] @ word.matrix)
                    key = _canonical_key(cand.matrix)
                    if key not in seen:
                        seen[key] = len(self.words)
                        self.words.append(cand)
                        new_frontier.append(cand)
            frontier = new_frontier
            self.sizes_by_length.append(len(self.words))
        self.index = seen

    def __len__(self):
        return len(self.words)

    def nearest(self, u: np.ndarray) -> tuple[GateWord, float]:
        """Closest library word to u in projective distance (exact scan)."""
        traces = np.abs(np.einsum("nij,ij->n", self._mats.conj(), u))
        k = int(np.argmax(traces))
        deficit = 1.0 - traces[k] / 2
        d = 0.0 if deficit < 5e-16 else math.sqrt(deficit)
        return self.words[k], d


_LIBRARY_CACHE: dict[int, BaseLibrary] = {}


def get_library(max_length: int = 10) -> BaseLibrary:
    if max_length not in _LIBRARY_CACHE:
        _LIBRARY_CACHE[max_length] = BaseLibrary(max_length)
    return _LIBRARY_CACHE[max_length]


def _bloch_angle(u_su2: np.ndarray) -> float:
    """Rotation angle theta in [0, pi] of an SU(2) element with tr >= 0."""
    c = float(np.real(np.trace(u_su2))) / 2
    return 2 * math.acos(min(1.0, max(-1.0, c)))


def _bloch_axis(u_su2: np.ndarray) -> np.ndarray:
    """Unit rotation axis of an SU(2) element u = cos(t/2) I - i sin(t/2) n.sigma."""
    nx = -np.imag(u_su2[0, 1] + u_su2[1, 0]) / 2
    ny = np.real(u_su2[1, 0] - u_su2[0, 1]) / 2
    nz = -np.imag(u_su2[0, 0] - u_su2[1, 1]) / 2
    n = np.array([nx, ny, nz])
    norm = np.linalg.norm(n)
    if norm == 0:
        return np.array([0.0, 0.0, 1.0])
    return n / norm


def _axis_rotation(theta: float, axis: np.ndarray) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    nx, ny, nz = axis
    return np.array(
        [[c - 1j * s * nz, -s * (ny + 1j * nx)],
         [s * (ny - 1j * nx), c + 1j * s * nz]], dtype=complex)


def _align_axes(src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """SU(2) element S with S (src.sigma) S^dag = dst.sigma."""
    cross = np.cross(src, dst)
    dot = float(np.dot(src, dst))
    norm = float(np.linalg.norm(cross))
    if norm < 1e-14:
        if dot > 0:
            return np.eye(2, dtype=complex)
        # antiparallel: rotate by pi about any axis perpendicular to src
        perp = np.cross(src, [1.0, 0.0, 0.0])
        if np.linalg.norm(perp) < 1e-8:
            perp = np.cross(src, [0.0, 1.0, 0.0])
        return _axis_rotation(math.pi, perp / np.linalg.norm(perp))
    alpha = math.atan2(norm, dot)
    return _axis_rotation(alpha, cross / norm)


def group_commutator(delta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Balanced V, W with V W V^dag W^dag == delta (projectively).

    Both factors are rotations by the same angle phi, the Dawson-Nielsen
    balanced choice phi = 2*arcsin(sqrt(sin(theta/4))) for a delta that
    rotates by theta.  Requires delta to be close to the identity.
    """
    check_unitary(delta)
    d0 = distance(delta, np.eye(2))
    if d0 >= 0.5:
        raise SynthesisError(f"residual too far from identity (d={d0:.3f})")
    m = _su2(delta)
    if np.real(np.trace(m)) < 0:
        m = -m
    theta = _bloch_angle(m)
    if theta < 1e-12:
        return np.eye(2, dtype=complex), np.eye(2, dtype=complex)
    phi = 2 * math.asin(math.sqrt(math.sin(theta / 4)))
    v = rx_matrix(phi)
    w = ry_matrix(phi)
    comm = v @ w @ v.conj().T @ w.conj().T
    # rotate the commutator's axis onto delta's
    s = _align_axes(_bloch_axis(_su2(comm)), _bloch_axis(m))
    v_hat = s @ v @ s.conj().T
    w_hat = s @ w @ s.conj().T
    return v_hat, w_hat


def solovay_kitaev(u: np.ndarray, degree: int,
                   library: BaseLibrary | None = None,
                   fallbacks: list | None = None) -> GateWord:
    """Recursive approximation of a single-qubit unitary by a gate word."""
    if degree < 0:
        raise SynthesisError("recursion degree must be >= 0")
    check_unitary(u)
    lib = library if library is not None else get_library()
    return _sk(u, degree, lib, fallbacks)


def _sk(u: np.ndarray, degree: int, lib: BaseLibrary,
        fallbacks: list | None = None) -> GateWord:
    if degree == 0:
        word, _ = lib.nearest(u)
        return word
    prev = _sk(u, degree - 1, lib, fallbacks)
    if distance(u, prev.matrix) < 1e-12:
        return prev  # already exact; the commutator correction is I
    delta = u @ prev.matrix.conj().T
    try:
        v, w = group_commutator(delta)
    except SynthesisError:
        if fallbacks is not None:
            fallbacks.append(degree)  # residual out of range: keep lower level
        return prev
    v_word = _sk(v, degree - 1, lib, fallbacks)
    w_word = _sk(w, degree - 1, lib, fallbacks)
    # time order: U_{n-1}, then W^dag, V^dag, W, V (matrix product V W V* W* U)
    out = prev
    out = out.concat(w_word.inverse())
    out = out.concat(v_word.inverse())
    out = out.concat(w_word)
    out = out.concat(v_word)
    return out


@dataclass
class SynthesisReport:
    """Per-Rz synthesis accounting for a whole circuit."""

    distances: list[float] = field(default_factory=list)
    fidelities: list[float] = field(default_factory=list)
    t_counts: list[int] = field(default_factory=list)
    word_lengths: list[int] = field(default_factory=list)
    fallback_count: int = 0

    @property
    def fidelity_product(self) -> float:
        prod = 1.0
        for f in self.fidelities:
            prod *= f
        return prod

    @property
    def total_t_count(self) -> int:
        return sum(self.t_counts)

    def add(self, d: float, word: GateWord):
        self.distances.append(d)
        self.fidelities.append(fidelity_from_distance(d))
        self.t_counts.append(word.t_count)
        self.word_lengths.append(len(word))

    def to_json(self) -> dict:
        return {
            "per_gate_distance": self.distances,
            "per_gate_fidelity": self.fidelities,
            "fidelity_product": self.fidelity_product,
            "t_count": self.total_t_count,
            "fallback_count": self.fallback_count,
        }


@dataclass(frozen=True)
class SynthesisConfig:
    recursion_degree: int = 1
    base_length: int = 10


def synthesize_circuit(circuit: GateCircuit,
                       cfg: SynthesisConfig = SynthesisConfig()
                       ) -> tuple[GateCircuit, SynthesisReport]:
    """Replace every Rz with its Solovay-Kitaev word; other gates pass through."""
    bad = circuit.gate_kinds() - CLIFFORD_RZ_KINDS
    if bad:
        raise SynthesisError(
            f"circuit is not normalized to Clifford+Rz; offending gates: {sorted(bad)}")
    lib = get_library(cfg.base_length)
    report = SynthesisReport()
    cache: dict[float, tuple[GateWord, float, int]] = {}
    ops: list[GateOp] = []
    for op in circuit.ops:
        if op.kind != "Rz":
            ops.append(op)
            continue
        theta = op.params[0]
        hit = cache.get(theta)
        if hit is None:
            target = rz_matrix(theta)
            fallbacks: list = []
            word = _sk(target, cfg.recursion_degree, lib, fallbacks)
            hit = (word, distance(target, word.matrix), len(fallbacks))
            cache[theta] = hit
        word, d, n_fallbacks = hit
        report.fallback_count += n_fallbacks
        q = op.qubits[0]
        ops.extend(GateOp(letter, (q,)) for letter in word.letters)
        report.add(d, word)
    out = GateCircuit(circuit.n_qubits, circuit.n_clbits, ops)
    out.metadata.update(circuit.metadata)
    return out, report


def ingest_external_ct(circuit: GateCircuit) -> GateCircuit:
    """Validate an externally synthesized Clifford+T circuit, pass through."""
    bad = circuit.gate_kinds() - CLIFFORD_T_KINDS
    if bad:
        raise SynthesisError(
            f"not a Clifford+T circuit; offending gates: {sorted(bad)}")
    return circuit
