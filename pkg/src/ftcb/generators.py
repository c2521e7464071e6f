"""Built-in benchmark circuit families.

QFT (textbook H + controlled-phase + final swaps), Cuccaro ripple-carry
adder, and first-order Trotterized Ising / Heisenberg / Fermi-Hubbard
circuits.  Spin operators are S = sigma/2, so two-site couplings carry a
1/4 and single-site fields a 1/2 inside the emitted coefficients.

Default model parameters: Ising J=1, h=0.5; Heisenberg Jx=Jy=Jz=1
(antiferromagnetic); Fermi-Hubbard t=1, U=0; Trotter steps=20, dt=0.05.
1D chains are periodic unless told otherwise.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .circuit import GateCircuit, GateOp
from .pauli import PauliString, multiply


class GeneratorError(ValueError):
    pass


# --- QFT -----------------------------------------------------------------------

def gen_qft(n: int) -> GateCircuit:
    """n-qubit QFT: per target, H then controlled phases from each lower
    qubit; final floor(n/2) swaps.  Gate count n + n(n-1)/2 + floor(n/2)."""
    if n < 1:
        raise GeneratorError("qft needs at least one qubit")
    ops: list[GateOp] = []
    for j in range(n):
        ops.append(GateOp("H", (j,)))
        for k in range(j + 1, n):
            angle = math.pi / (2 ** (k - j))
            ops.append(GateOp("CU1", (k, j), (angle,)))
    for i in range(n // 2):
        ops.append(GateOp("SWAP", (i, n - 1 - i)))
    return GateCircuit(n, 0, ops)


# --- ripple-carry adder ----------------------------------------------------------

def _maj(c: int, b: int, a: int) -> list[GateOp]:
    return [GateOp("CNOT", (a, b)), GateOp("CNOT", (a, c)), GateOp("CCX", (c, b, a))]


def _uma(c: int, b: int, a: int) -> list[GateOp]:
    return [GateOp("CCX", (c, b, a)), GateOp("CNOT", (a, c)), GateOp("CNOT", (c, b))]


def adder_layout(bits: int) -> dict:
    """Qubit roles: carry-in, interleaved (b_i, a_i) pairs, carry-out."""
    cin = 0
    b = [1 + 2 * i for i in range(bits)]
    a = [2 + 2 * i for i in range(bits)]
    cout = 2 * bits + 1
    return {"cin": cin, "a": a, "b": b, "cout": cout, "width": 2 * bits + 2}


def gen_adder(bits: int) -> GateCircuit:
    """Cuccaro ripple-carry adder on 2*bits+2 qubits.

    Computes b <- a + b with a restored and the carry-out on the last
    qubit; one Toffoli per MAJ/UMA block (2*bits total).
    """
    if bits < 1:
        raise GeneratorError("adder needs at least one bit")
    lay = adder_layout(bits)
    ops: list[GateOp] = []
    carry = lay["cin"]
    for i in range(bits):
        ops.extend(_maj(carry, lay["b"][i], lay["a"][i]))
        carry = lay["a"][i]
    ops.append(GateOp("CNOT", (lay["a"][bits - 1], lay["cout"])))
    for i in range(bits - 1, -1, -1):
        carry = lay["cin"] if i == 0 else lay["a"][i - 1]
        ops.extend(_uma(carry, lay["b"][i], lay["a"][i]))
    return GateCircuit(lay["width"], 0, ops)


# --- Hamiltonian term lists --------------------------------------------------------

@dataclass
class HamiltonianTermList:
    n: int
    terms: list[tuple[PauliString, float]] = field(default_factory=list)

    def add(self, pauli: PauliString, coeff: float):
        if pauli.n != self.n:
            raise GeneratorError("term length mismatch")
        if coeff == 0 or not math.isfinite(coeff):
            raise GeneratorError(f"bad coefficient {coeff}")
        self.terms.append((pauli, coeff))


@dataclass(frozen=True)
class TrotterConfig:
    steps: int = 20
    dt: float = 0.05

    def __post_init__(self):
        if self.steps < 1 or self.dt <= 0:
            raise GeneratorError("Trotter steps and dt must be positive")


@dataclass(frozen=True)
class LatticeSpec:
    extents: tuple[int, ...]
    periodic: bool = True

    @property
    def dimension(self) -> int:
        return len(self.extents)

    @property
    def sites(self) -> int:
        out = 1
        for e in self.extents:
            out *= e
        return out

    def edges(self) -> list[tuple[int, int]]:
        """Nearest-neighbor site pairs, deterministic order."""
        if self.dimension == 1:
            (length,) = self.extents
            out = [(i, i + 1) for i in range(length - 1)]
            if self.periodic and length > 2:
                out.append((0, length - 1))
            return out
        if self.dimension == 2:
            rows, cols = self.extents
            out = []

            def site(r, c):
                return r * cols + c

            for r in range(rows):
                for c in range(cols):
                    if c + 1 < cols:
                        out.append((site(r, c), site(r, c + 1)))
                    elif self.periodic and cols > 2:
                        out.append((site(r, 0), site(r, c)))
                    if r + 1 < rows:
                        out.append((site(r, c), site(r + 1, c)))
                    elif self.periodic and rows > 2:
                        out.append((site(0, c), site(r, c)))
            return sorted(set(tuple(sorted(e)) for e in out))
        raise GeneratorError("only 1D and 2D lattices are supported")


def _two_site(n: int, kind: str, i: int, j: int) -> PauliString:
    p = PauliString.single(n, i, kind)
    q = PauliString.single(n, j, kind)
    return multiply(p, q).to_pauli()


def ising_terms(lattice: LatticeSpec, j_z: float = 1.0, h: float = 0.5
                ) -> HamiltonianTermList:
    """H = J_z sum S^z_i S^z_j - h sum S^z_i with S = Z/2."""
    n = lattice.sites
    out = HamiltonianTermList(n)
    for (i, j) in lattice.edges():
        out.add(_two_site(n, "Z", i, j), j_z / 4)
    if h != 0:
        for i in range(n):
            out.add(PauliString.single(n, i, "Z"), -h / 2)
    return out


def heisenberg_terms(lattice: LatticeSpec, j_x: float = 1.0, j_y: float = 1.0,
                     j_z: float = 1.0) -> HamiltonianTermList:
    """H = sum_edges (Jx XX + Jy YY + Jz ZZ)/4."""
    n = lattice.sites
    out = HamiltonianTermList(n)
    for (i, j) in lattice.edges():
        for kind, coeff in (("X", j_x), ("Y", j_y), ("Z", j_z)):
            if coeff != 0:
                out.add(_two_site(n, kind, i, j), coeff / 4)
    return out


def jordan_wigner_hopping(p: int, q: int, n_modes: int) -> list[PauliString]:
    """c^dag_p c_q + c^dag_q c_p -> (X Z..Z X + Y Z..Z Y)/2; returns the two
    Pauli strings (each carries an implicit 1/2)."""
    if not (0 <= p < q < n_modes):
        raise GeneratorError("need mode indices p < q < n_modes")
    tail_x = tail_z = 0
    for k in range(p + 1, q):
        tail_z |= 1 << k
    xs = PauliString(n_modes, (1 << p) | (1 << q), tail_z)
    ys = PauliString(n_modes, (1 << p) | (1 << q),
                     tail_z | (1 << p) | (1 << q))
    return [xs, ys]


def jordan_wigner_number(p: int, n_modes: int) -> list[tuple[PauliString, float]]:
    """n_p = (I - Z_p)/2; the constant part is dropped (global phase)."""
    return [(PauliString.single(n_modes, p, "Z"), -0.5)]


def fermi_hubbard_terms(lattice: LatticeSpec, t: float = 1.0, u: float = 0.0
                        ) -> HamiltonianTermList:
    """1D Fermi-Hubbard under Jordan-Wigner.

    Qubit layout: spin-up modes 0..L-1, then spin-down modes L..2L-1.
    Hopping -t (c^dag c + h.c.) per edge per spin; on-site U n_up n_down.
    """
    sites = lattice.sites
    n = 2 * sites
    out = HamiltonianTermList(n)
    for (i, j) in lattice.edges():
        for spin_base in (0, sites):
            p, q = spin_base + i, spin_base + j
            for pauli in jordan_wigner_hopping(p, q, n):
                out.add(pauli, -t / 2)
    if u != 0:
        for i in range(sites):
            up, down = i, sites + i
            # U n_up n_down = U/4 (I - Z_up - Z_down + Z_up Z_down), I dropped
            out.add(PauliString.single(n, up, "Z"), -u / 4)
            out.add(PauliString.single(n, down, "Z"), -u / 4)
            out.add(_two_site(n, "Z", up, down), u / 4)
    return out


# --- Trotterization -----------------------------------------------------------------

def _basis_change(p: PauliString) -> tuple[list[GateOp], list[GateOp]]:
    """Pre/post single-qubit ops turning each X/Y factor into Z."""
    pre: list[GateOp] = []
    post: list[GateOp] = []
    for q in p.support():
        xb = (p.x >> q) & 1
        zb = (p.z >> q) & 1
        if xb and not zb:  # X: conjugate by H
            pre.append(GateOp("H", (q,)))
            post.append(GateOp("H", (q,)))
        elif xb and zb:  # Y: conjugate by S*H, since (S H) Z (S H)^dag = Y
            pre.extend([GateOp("Sdg", (q,)), GateOp("H", (q,))])
            post.extend([GateOp("H", (q,)), GateOp("S", (q,))])
    return pre, post


def term_circuit_ops(pauli: PauliString, theta: float) -> list[GateOp]:
    """Ops realizing exp(-i*theta/2 * P): basis changes, CNOT ladder onto
    the last support qubit, Rz(theta), mirrored unladder."""
    sup = pauli.support()
    if not sup:
        return []
    if pauli.sign < 0:
        theta = -theta
    pre, post = _basis_change(pauli)
    ladder = [GateOp("CNOT", (sup[k], sup[k + 1])) for k in range(len(sup) - 1)]
    ops = list(pre)
    ops.extend(ladder)
    ops.append(GateOp("Rz", (sup[-1],), (theta,)))
    ops.extend(reversed(ladder))
    ops.extend(post)  # already in application order per qubit
    return ops


def trotterize(terms: HamiltonianTermList, cfg: TrotterConfig = TrotterConfig()
               ) -> GateCircuit:
    """First-order product formula: per step, exp(-i c dt P) per term in
    list order, repeated cfg.steps times."""
    ops: list[GateOp] = []
    for _ in range(cfg.steps):
        for pauli, coeff in terms.terms:
            ops.extend(term_circuit_ops(pauli, 2 * coeff * cfg.dt))
    return GateCircuit(terms.n, 0, ops)


# --- registry used by the CLI ---------------------------------------------------------

MODELS = ("ising_1d", "heisenberg_1d", "heisenberg_2d", "fermi_hubbard_1d")


def pauli_terms(model: str, lattice: LatticeSpec, **params) -> HamiltonianTermList:
    if model == "ising_1d":
        return ising_terms(lattice, params.get("j", 1.0), params.get("h", 0.5))
    if model in ("heisenberg_1d", "heisenberg_2d"):
        return heisenberg_terms(lattice, params.get("jx", 1.0),
                                params.get("jy", 1.0), params.get("jz", 1.0))
    if model == "fermi_hubbard_1d":
        return fermi_hubbard_terms(lattice, params.get("t", 1.0),
                                   params.get("u", 0.0))
    raise GeneratorError(f"unknown model {model!r}")
