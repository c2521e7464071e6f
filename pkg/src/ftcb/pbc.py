"""Clifford+T to Pauli-based-computation transpilation and optimization.

Compilation contract (for a source circuit with Clifford product C_total
and T gates at positions k with prefix Cliffords C_<k):

    U_circuit == C_total * R_m * ... * R_1        (R_1 earliest, rightmost)
    R_k == rotation(C_<k^dag Z_q C_<k, +-pi/4)
    measurement row j == C_total^dag Z_j C_total

The implementation walks the circuit forward, composing the pullback
images of Z_q and X_q through the accumulated Clifford prefix (a
symplectic tableau).  This yields exactly the same rotations and rows as
the textbook reverse pass that conjugates every accumulated rotation per
encountered gate, but in O(gates * n/64) instead of O(gates * rotations).

The optimizer repeatedly partitions rotations into mutually commuting
layers (earliest-fit), merges identical axes within each layer via the
net-quarter-turn table, and absorbs the Clifford-level remnants into all
later layers and the measurement rows.  Absorbed remnants are retained on
the Clifford trace so the dense oracle can verify exact equivalence after
optimization.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .circuit import GateCircuit, GateOp
from .pauli import (AngleClass, PauliError, PauliRotation, PauliString,
                    angle_from_text, angle_to_text, conjugate_by_pi,
                    conjugate_by_quarter, make_rotation)

PBC_GATE_KINDS = frozenset(
    {"CNOT", "H", "S", "Sdg", "T", "Tdg", "X", "Y", "Z", "Measure", "Barrier"})


class PBCError(ValueError):
    pass


@dataclass
class CliffordTrace:
    """Verification-only record: source Cliffords plus absorbed remnants."""

    source_gates: list[GateOp] = field(default_factory=list)
    absorbed_parts: list[PauliRotation] = field(default_factory=list)


@dataclass
class MeasurementTableau:
    """One signed Pauli row per measured qubit, indexed by classical target."""

    rows: dict[int, PauliString] = field(default_factory=dict)

    def items(self):
        return sorted(self.rows.items())

    def paulis(self):
        return [p for _, p in self.items()]


@dataclass
class PBCStats:
    raw_rotation_count: int = 0
    optimized_rotation_count: int = 0
    optimization_passes: int = 0
    layer_count: int = 0
    raw_weight_mean: float = 0.0
    raw_weight_std: float = 0.0
    optimized_weight_mean: float = 0.0
    optimized_weight_std: float = 0.0


@dataclass
class PBCCircuit:
    n: int
    rotations: list[PauliRotation] = field(default_factory=list)
    measurements: MeasurementTableau = field(default_factory=MeasurementTableau)
    clifford_trace: CliffordTrace = field(default_factory=CliffordTrace)

    def rotation_count(self) -> int:
        return len(self.rotations)


# --- forward tableau ----------------------------------------------------------

class _InverseTableau:
    """img_Z[q] = C^dag Z_q C and img_X[q] = C^dag X_q C for the accumulated
    Clifford prefix C; rows are (x_mask, z_mask, i_power) with the sign
    encoded as i_power in {0, 2}."""

    def __init__(self, n: int):
        self.n = n
        self.img_z = [(0, 1 << q, 0) for q in range(n)]
        self.img_x = [(1 << q, 0, 0) for q in range(n)]

    @staticmethod
    def _mul(a: tuple, b: tuple, extra_i: int = 0) -> tuple:
        """i^extra_i * a * b; result must be Hermitian (i_power even)."""
        ax, az, ak = a
        bx, bz, bk = b
        rx, rz = ax ^ bx, az ^ bz
        k = (ak + bk + extra_i
             + (ax & az).bit_count() + (bx & bz).bit_count()
             + 2 * (az & bx).bit_count() - (rx & rz).bit_count()) % 4
        if k & 1:
            raise AssertionError("non-Hermitian tableau row")
        return (rx, rz, k)

    def apply_gate(self, op: GateOp):
        """Extend the prefix with one Clifford gate (pullback composition)."""
        kind = op.kind
        if kind == "H":
            q = op.qubits[0]
            self.img_z[q], self.img_x[q] = self.img_x[q], self.img_z[q]
        elif kind in ("S", "Sdg"):
            # pullback S: X -> -Y = -i*X*Z;  pullback Sdg: X -> +Y = i*X*Z
            q = op.qubits[0]
            extra = 3 if kind == "S" else 1
            self.img_x[q] = self._mul(self.img_x[q], self.img_z[q], extra)
        elif kind in ("X", "Y", "Z"):
            q = op.qubits[0]
            if kind in ("X", "Y"):
                x, z, k = self.img_z[q]
                self.img_z[q] = (x, z, (k + 2) % 4)
            if kind in ("Z", "Y"):
                x, z, k = self.img_x[q]
                self.img_x[q] = (x, z, (k + 2) % 4)
        elif kind == "CNOT":
            c, t = op.qubits
            self.img_z[t] = self._mul(self.img_z[c], self.img_z[t])
            self.img_x[c] = self._mul(self.img_x[c], self.img_x[t])
        else:
            raise PBCError(f"not a Clifford gate: {kind}")

    def z_image(self, q: int) -> PauliString:
        x, z, k = self.img_z[q]
        return PauliString(self.n, x, z, 1 if k == 0 else -1)


def compile_to_pbc(circuit: GateCircuit) -> PBCCircuit:
    """Transpile a Clifford+T circuit into rotations plus measurement rows."""
    bad = circuit.gate_kinds() - PBC_GATE_KINDS
    if bad:
        raise PBCError(
            f"gates outside the Clifford+T set: {sorted(bad)}; "
            "synthesize the circuit to Clifford+T first")
    n = circuit.n_qubits
    tableau = _InverseTableau(n)
    rotations: list[PauliRotation] = []
    trace = CliffordTrace()
    measured: dict[int, int] = {}  # clbit -> qubit
    done: set[int] = set()
    for op in circuit.ops:
        if op.kind == "Barrier":
            continue
        if op.kind == "Measure":
            q = op.qubits[0]
            measured[op.clbit] = q
            done.add(q)
            continue
        if any(q in done for q in op.qubits):
            raise PBCError("gate after measurement on the same qubit is unsupported")
        if op.kind in ("T", "Tdg"):
            q = op.qubits[0]
            angle = (AngleClass.PLUS_QUARTER if op.kind == "T"
                     else AngleClass.MINUS_QUARTER)
            rotations.append(make_rotation(tableau.z_image(q), angle))
            continue
        tableau.apply_gate(op)
        trace.source_gates.append(op)
    rows = MeasurementTableau()
    if measured:
        for clbit, q in sorted(measured.items()):
            rows.rows[clbit] = tableau.z_image(q)
    else:
        for q in range(n):
            rows.rows[q] = tableau.z_image(q)
    return PBCCircuit(n, rotations, rows, trace)


# --- layering -------------------------------------------------------------------

class _SymplecticSpan:
    """GF(2) span of (x, z) vectors with a symplectic-form membership probe.

    The form is linear, so some member of a set anticommutes with p iff
    some REDUCED BASIS vector does; testing against the basis (at most 2n
    vectors) replaces scanning every member of a layer.
    """

    __slots__ = ("basis",)

    def __init__(self):
        self.basis: dict[int, tuple[int, int]] = {}  # leading bit -> (x, z)

    def add(self, x: int, z: int, n: int):
        v = (x << n) | z
        while v:
            lead = v.bit_length() - 1
            hit = self.basis.get(lead)
            if hit is None:
                self.basis[lead] = ((v >> n), v & ((1 << n) - 1))
                return
            v ^= (hit[0] << n) | hit[1]

    def anticommutes_with_any(self, x: int, z: int) -> bool:
        for bx, bz in self.basis.values():
            if (((x & bz).bit_count() + (z & bx).bit_count()) & 1):
                return True
        return False


def layer_rotations(rotations: list[PauliRotation]) -> list[list[int]]:
    """Earliest-fit partition into mutually commuting layers.

    Scanning in execution order, each rotation lands one layer after the
    highest existing layer containing an anticommuting Pauli (layer 0 if
    none).  Returns layers as index lists into the input; concatenating
    them in order is a commutation-legal reordering.
    """
    n = rotations[0].pauli.n if rotations else 0
    layers: list[list[int]] = []
    layer_x: list[int] = []  # per-layer OR of supports, cheap disjointness test
    layer_z: list[int] = []
    spans: list[_SymplecticSpan] = []
    for idx, rot in enumerate(rotations):
        p = rot.pauli
        target = 0
        for j in range(len(layers) - 1, -1, -1):
            if not ((p.x & layer_z[j]) or (p.z & layer_x[j])):
                continue  # no symplectic overlap with any member: commutes
            if spans[j].anticommutes_with_any(p.x, p.z):
                target = j + 1
                break
        if target == len(layers):
            layers.append([])
            layer_x.append(0)
            layer_z.append(0)
            spans.append(_SymplecticSpan())
        layers[target].append(idx)
        layer_x[target] |= p.x
        layer_z[target] |= p.z
        spans[target].add(p.x, p.z, n)
    return layers


# --- merging ---------------------------------------------------------------------

# net quarter-turn count (mod 8) -> (residual quarter sign or 0, Clifford parts)
MERGE_TABLE: dict[int, tuple[int, tuple[AngleClass, ...]]] = {
    0: (0, ()),
    1: (+1, ()),
    2: (0, (AngleClass.PLUS_HALF,)),
    3: (+1, (AngleClass.PLUS_HALF,)),
    4: (0, (AngleClass.PI,)),
    5: (-1, (AngleClass.PLUS_HALF, AngleClass.PI)),
    6: (0, (AngleClass.MINUS_HALF,)),
    7: (-1, ()),
}


def merge_layer(layer_rots: list[PauliRotation], anchors: list[int] | None = None
                ) -> tuple[list[PauliRotation], list[PauliRotation]]:
    """Merge identical axes within one mutually commuting layer.

    Returns (residual quarter rotations, Clifford-level parts to absorb).
    Grouping keys on the sign-canonical axis, so rotation(-P, pi/4) merges
    with rotation(P, -pi/4); `anchors` (original indices) pin a stable
    output order.
    """
    if anchors is None:
        anchors = list(range(len(layer_rots)))
    groups: dict[tuple[int, int], list[int]] = {}
    for pos, rot in enumerate(layer_rots):
        if rot.angle.is_clifford:
            raise PBCError(f"non-quarter angle {rot.angle} in merge layer")
        groups.setdefault((rot.pauli.x, rot.pauli.z), []).append(pos)
    residuals: list[tuple[int, PauliRotation]] = []
    parts: list[tuple[int, PauliRotation]] = []
    for members in groups.values():
        net = sum(1 if layer_rots[p].angle is AngleClass.PLUS_QUARTER else -1
                  for p in members)
        axis = layer_rots[members[0]].pauli
        residual_sign, clifford_angles = MERGE_TABLE[net % 8]
        anchor = anchors[members[0]]
        if residual_sign:
            angle = (AngleClass.PLUS_QUARTER if residual_sign > 0
                     else AngleClass.MINUS_QUARTER)
            residuals.append((anchor, PauliRotation(axis, angle)))
        for ang in clifford_angles:
            parts.append((anchor, PauliRotation(axis, ang)))
    residuals.sort(key=lambda t: t[0])
    parts.sort(key=lambda t: t[0])
    return [r for _, r in residuals], [p for _, p in parts]


def absorb_clifford_rotation(part: PauliRotation,
                             later: list[PauliRotation],
                             measurements: MeasurementTableau,
                             trace: CliffordTrace) -> list[PauliRotation]:
    """Move one Clifford-level rotation past everything applied after it.

    Every rotation in strictly later layers and every measurement row is
    conjugated; the part itself lands on the Clifford trace (the PBC
    circuit proper keeps only +-pi/4 rotations).
    """
    axis = part.pauli
    if part.angle is AngleClass.PI:
        def conj(p):
            return conjugate_by_pi(axis, p)
    else:
        sign = 1 if part.angle is AngleClass.PLUS_HALF else -1

        def conj(p):
            return conjugate_by_quarter(axis, p, sign, "pushforward")
    out = [make_rotation(conj(rot.pauli), rot.angle) for rot in later]
    for clbit in list(measurements.rows):
        measurements.rows[clbit] = conj(measurements.rows[clbit])
    trace.absorbed_parts.append(part)
    return out


# --- optimization loop --------------------------------------------------------------

class _CliffordMap:
    """Composed conjugation p -> V^dag p V for a sequence of absorbed parts
    V = v_1 v_2 ... v_k, tracked as images of the 2n basis Paulis.

    Absorbing thousands of parts one sweep at a time is quadratic; mapping
    each rotation once through the composed tableau is linear.
    """

    __slots__ = ("n", "identity", "img_x", "img_z")

    def __init__(self, n: int):
        self.n = n
        self.identity = True
        self.img_x = [(1 << q, 0, 0) for q in range(n)]  # (x, z, i_power)
        self.img_z = [(0, 1 << q, 0) for q in range(n)]

    @staticmethod
    def _mul(a: tuple, b: tuple, extra_i: int = 0) -> tuple:
        ax, az, ak = a
        bx, bz, bk = b
        rx, rz = ax ^ bx, az ^ bz
        k = (ak + bk + extra_i
             + (ax & az).bit_count() + (bx & bz).bit_count()
             + 2 * (az & bx).bit_count() - (rx & rz).bit_count()) % 4
        return (rx, rz, k)

    def absorb(self, part: PauliRotation):
        """Extend the map with one more part: p -> part^dag p part."""
        cx, cz = part.pauli.x, part.pauli.z
        if part.angle is AngleClass.PI:
            def conj(row):
                x, z, k = row
                if ((x & cz).bit_count() + (z & cx).bit_count()) & 1:
                    return (x, z, (k + 2) % 4)
                return row
        else:
            sign = 1 if part.angle is AngleClass.PLUS_HALF else -1
            extra = (3 * sign) % 4  # -i*s phase of the anticommuting product
            axis_row = (cx, cz, 0)

            def conj(row):
                x, z, k = row
                if ((x & cz).bit_count() + (z & cx).bit_count()) & 1:
                    return self._mul((x, z, k), axis_row, extra)
                return row
        self.img_x = [conj(row) for row in self.img_x]
        self.img_z = [conj(row) for row in self.img_z]
        self.identity = False

    def apply(self, p: PauliString) -> PauliString:
        """Image of an arbitrary signed Pauli under the composed map."""
        if self.identity:
            return p
        out = (0, 0, 0 if p.sign > 0 else 2)
        bits = p.x | p.z
        q = 0
        while bits:
            if bits & 1:
                xb = (p.x >> q) & 1
                zb = (p.z >> q) & 1
                if xb and zb:  # Y = i * X * Z
                    out = self._mul(out, self._mul(self.img_x[q],
                                                   self.img_z[q], 1))
                elif xb:
                    out = self._mul(out, self.img_x[q])
                else:
                    out = self._mul(out, self.img_z[q])
            bits >>= 1
            q += 1
        x, z, k = out
        if k & 1:
            raise AssertionError("non-Hermitian image of a Hermitian Pauli")
        return PauliString(self.n, x, z, 1 if k == 0 else -1)


def _weight_stats(rotations: list[PauliRotation]) -> tuple[float, float]:
    if not rotations:
        return 0.0, 0.0
    weights = [r.pauli.weight for r in rotations]
    mean = sum(weights) / len(weights)
    var = sum((w - mean) ** 2 for w in weights) / len(weights)
    return mean, var ** 0.5


def optimize_pbc(pbc: PBCCircuit) -> tuple[PBCCircuit, PBCStats]:
    """Iterate layer/merge/absorb until a full pass removes nothing.

    The input circuit is left untouched; the returned circuit carries the
    conjugated measurement rows and the extended Clifford trace.
    """
    stats = PBCStats()
    stats.raw_rotation_count = len(pbc.rotations)
    stats.raw_weight_mean, stats.raw_weight_std = _weight_stats(pbc.rotations)
    current = PBCCircuit(
        pbc.n, list(pbc.rotations),
        MeasurementTableau(dict(pbc.measurements.rows)),
        CliffordTrace(list(pbc.clifford_trace.source_gates),
                      list(pbc.clifford_trace.absorbed_parts)))
    passes = 0
    while True:
        passes += 1
        before = len(current.rotations)
        current, layer_count = _optimize_pass(current)
        stats.layer_count = layer_count
        if len(current.rotations) >= before:
            break
    stats.optimization_passes = passes
    stats.optimized_rotation_count = len(current.rotations)
    stats.optimized_weight_mean, stats.optimized_weight_std = _weight_stats(
        current.rotations)
    return current, stats


def _optimize_pass(pbc: PBCCircuit) -> tuple[PBCCircuit, int]:
    """One layer/merge/absorb sweep.

    Equivalent to conjugating every later layer eagerly per absorbed part
    (the absorb_clifford_rotation contract), but parts are composed into a
    single Clifford map applied to each layer once on arrival.
    """
    layers = layer_rotations(pbc.rotations)
    cmap = _CliffordMap(pbc.n)
    kept: list[list[PauliRotation]] = []
    for layer in layers:
        members = [pbc.rotations[i] for i in layer]
        if not cmap.identity:
            members = [make_rotation(cmap.apply(r.pauli), r.angle)
                       for r in members]
        residuals, parts = merge_layer(members, layer)
        for part in parts:
            pbc.clifford_trace.absorbed_parts.append(part)
            cmap.absorb(part)
        kept.append(residuals)
    if not cmap.identity:
        for clbit in list(pbc.measurements.rows):
            pbc.measurements.rows[clbit] = cmap.apply(
                pbc.measurements.rows[clbit])
    out_rotations = [rot for layer in kept for rot in layer]
    out = PBCCircuit(pbc.n, out_rotations, pbc.measurements, pbc.clifford_trace)
    return out, len(layers)


def pbc_reduction_stats(stats: PBCStats) -> dict[str, float]:
    """Percentage reductions; raw == 0 reports 0 by convention."""
    if stats.raw_rotation_count == 0:
        rot_red = 0.0
    else:
        rot_red = 100.0 * (stats.raw_rotation_count - stats.optimized_rotation_count) \
            / stats.raw_rotation_count
    if stats.raw_weight_mean == 0:
        w_red = 0.0
    else:
        w_red = 100.0 * (stats.raw_weight_mean - stats.optimized_weight_mean) \
            / stats.raw_weight_mean
    return {"rotation_reduction_pct": rot_red, "weight_reduction_pct": w_red}


# --- text format -----------------------------------------------------------------------

def serialize_pbc(pbc: PBCCircuit) -> str:
    lines = ["pbc v1", f"n {pbc.n}"]
    for rot in pbc.rotations:
        lines.append(f"rot {_signed_label(rot.pauli)} {angle_to_text(rot.angle)}")
    for clbit, row in pbc.measurements.items():
        lines.append(f"meas {_signed_label(row)} -> c{clbit}")
    return "\n".join(lines) + "\n"


def _signed_label(p: PauliString) -> str:
    return ("+" if p.sign > 0 else "-") + p.with_sign(1).label()


def parse_pbc(text: str) -> PBCCircuit:
    """Strict parser for the PBC text format; '#' starts a comment line."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0] != "pbc v1":
        raise PBCError("missing 'pbc v1' header")
    if len(lines) < 2 or not lines[1].startswith("n "):
        raise PBCError("missing qubit count line")
    try:
        n = int(lines[1][2:])
    except ValueError:
        raise PBCError(f"bad qubit count {lines[1]!r}") from None
    pbc = PBCCircuit(n)
    for ln in lines[2:]:
        fields = ln.split()
        if fields[0] == "rot":
            if len(fields) != 3:
                raise PBCError(f"malformed rotation line {ln!r}")
            pauli = _parse_signed(fields[1], n)
            try:
                angle = angle_from_text(fields[2])
            except PauliError as exc:
                raise PBCError(str(exc)) from None
            if angle not in (AngleClass.PLUS_QUARTER, AngleClass.MINUS_QUARTER):
                raise PBCError(f"rotation angle must be +-pi/4, got {fields[2]!r}")
            pbc.rotations.append(make_rotation(pauli, angle))
        elif fields[0] == "meas":
            if len(fields) != 4 or fields[2] != "->" or not fields[3].startswith("c"):
                raise PBCError(f"malformed measurement line {ln!r}")
            pauli = _parse_signed(fields[1], n)
            try:
                clbit = int(fields[3][1:])
            except ValueError:
                raise PBCError(f"bad classical target {fields[3]!r}") from None
            pbc.measurements.rows[clbit] = pauli
        else:
            raise PBCError(f"unknown line {ln!r}")
    return pbc


def _parse_signed(token: str, n: int) -> PauliString:
    if token[:1] not in "+-":
        raise PBCError(f"Pauli token {token!r} must carry an explicit sign")
    try:
        return PauliString.from_label(token, n)
    except PauliError as exc:
        raise PBCError(str(exc)) from None
