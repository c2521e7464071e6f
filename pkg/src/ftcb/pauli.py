"""Symplectic Pauli-string algebra.

An n-qubit Pauli operator is stored as two n-bit masks plus a sign:

    bit i of x set  ->  X component on qubit i
    bit i of z set  ->  Z component on qubit i
    (x=0,z=0)=I  (1,0)=X  (0,1)=Z  (1,1)=Y

Masks are plain Python integers, so every bitwise operation is a
word-packed sweep regardless of qubit count.  Signs are restricted to
{+1,-1}; the only place a factor of i can appear is the result of a
product, which is returned as a PhasedPauli carrying an explicit
i^k phase (k mod 4).

Rotation angle convention throughout the package:

    rotation(P, theta) == exp(-i * theta/2 * P)

so the T gate is the theta=+pi/4 rotation about Z.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable

_PAULI_CHARS = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
_CHAR_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}


class PauliError(ValueError):
    """Raised for malformed Pauli operands (length mismatch, bad index...)."""


@dataclass(frozen=True)
class PauliString:
    """Signed n-qubit Pauli operator in symplectic bitmask form."""

    n: int
    x: int
    z: int
    sign: int = 1

    def __post_init__(self):
        if self.n <= 0:
            raise PauliError(f"qubit count must be positive, got {self.n}")
        mask = (1 << self.n) - 1
        if self.x & ~mask or self.z & ~mask:
            raise PauliError("x/z bits outside the declared qubit range")
        if self.sign not in (1, -1):
            raise PauliError(f"sign must be +1 or -1, got {self.sign}")

    @classmethod
    def from_label(cls, label: str, n: int | None = None) -> "PauliString":
        """Parse a textual Pauli such as "-XZIY" (qubit 0 leftmost)."""
        sign = 1
        body = label.strip()
        if body[:1] in "+-":
            if body[0] == "-":
                sign = -1
            body = body[1:]
        if not body:
            raise PauliError(f"empty Pauli label: {label!r}")
        if n is None:
            n = len(body)
        elif n != len(body):
            raise PauliError(f"label {label!r} has {len(body)} qubits, expected {n}")
        x = z = 0
        for i, ch in enumerate(body):
            try:
                xb, zb = _CHAR_BITS[ch]
            except KeyError:
                raise PauliError(f"invalid Pauli character {ch!r} in {label!r}") from None
            x |= xb << i
            z |= zb << i
        return cls(n, x, z, sign)

    @classmethod
    def single(cls, n: int, qubit: int, kind: str, sign: int = 1) -> "PauliString":
        """A weight-1 operator: `kind` on `qubit`, identity elsewhere."""
        if not 0 <= qubit < n:
            raise PauliError(f"qubit {qubit} out of range for n={n}")
        xb, zb = _CHAR_BITS[kind]
        return cls(n, xb << qubit, zb << qubit, sign)

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n, 0, 0, 1)

    @property
    def weight(self) -> int:
        """Number of non-identity tensor factors."""
        return (self.x | self.z).bit_count()

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def support(self) -> list[int]:
        """Qubit indices carrying a non-identity factor, ascending."""
        bits = self.x | self.z
        out = []
        i = 0
        while bits:
            if bits & 1:
                out.append(i)
            bits >>= 1
            i += 1
        return out

    def negate(self) -> "PauliString":
        return PauliString(self.n, self.x, self.z, -self.sign)

    def with_sign(self, sign: int) -> "PauliString":
        return PauliString(self.n, self.x, self.z, sign)

    def label(self) -> str:
        """Textual rendering, qubit 0 leftmost, explicit sign only if negative."""
        chars = []
        for i in range(self.n):
            chars.append(_PAULI_CHARS[((self.x >> i) & 1, (self.z >> i) & 1)])
        return ("-" if self.sign < 0 else "") + "".join(chars)

    def __str__(self) -> str:
        return self.label()


@dataclass(frozen=True)
class PhasedPauli:
    """Product result: a sign-free PauliString together with an i^k phase.

    Only ever produced by `multiply`; never stored in circuits.
    """

    pauli: PauliString
    i_power: int

    def __post_init__(self):
        if self.i_power not in (0, 1, 2, 3):
            raise PauliError(f"i_power must be in 0..3, got {self.i_power}")
        if self.pauli.sign != 1:
            raise PauliError("PhasedPauli carries its phase in i_power, sign must be +1")

    def to_pauli(self) -> PauliString:
        """Collapse to a signed PauliString; requires a Hermitian phase (i^0 or i^2)."""
        if self.i_power == 0:
            return self.pauli
        if self.i_power == 2:
            return self.pauli.negate()
        raise PauliError(f"phase i^{self.i_power} is not +/-1")


class AngleClass(Enum):
    """Quantized rotation angles; value is the angle as a fraction of pi."""

    PLUS_QUARTER = Fraction(1, 4)    # T
    MINUS_QUARTER = Fraction(-1, 4)  # T dagger
    PLUS_HALF = Fraction(1, 2)       # S-level Clifford
    MINUS_HALF = Fraction(-1, 2)
    PI = Fraction(1, 1)              # Pauli flip

    @property
    def radians(self) -> float:
        import math
        return math.pi * float(self.value)

    @property
    def is_clifford(self) -> bool:
        return self in (AngleClass.PLUS_HALF, AngleClass.MINUS_HALF, AngleClass.PI)

    def negated(self) -> "AngleClass":
        if self is AngleClass.PI:
            return AngleClass.PI  # R_P(-pi) == R_P(pi) up to global phase
        return AngleClass(-self.value)


_ANGLE_TEXT = {
    AngleClass.PLUS_QUARTER: "pi/4",
    AngleClass.MINUS_QUARTER: "-pi/4",
    AngleClass.PLUS_HALF: "pi/2",
    AngleClass.MINUS_HALF: "-pi/2",
    AngleClass.PI: "pi",
}
_TEXT_ANGLE = {v: k for k, v in _ANGLE_TEXT.items()}


def angle_to_text(angle: AngleClass) -> str:
    return _ANGLE_TEXT[angle]


def angle_from_text(text: str) -> AngleClass:
    try:
        return _TEXT_ANGLE[text]
    except KeyError:
        raise PauliError(f"unknown rotation angle token {text!r}") from None


@dataclass(frozen=True)
class PauliRotation:
    """rotation(P, theta) with the Pauli sign canonicalized to +1.

    A negative-sign axis folds into the angle: rotation(-P, theta) ==
    rotation(P, -theta), and rotation(P, pi) == rotation(-P, pi) up to
    global phase.
    """

    pauli: PauliString
    angle: AngleClass

    def __post_init__(self):
        if self.pauli.sign != 1:
            raise PauliError("PauliRotation axis must be sign-canonicalized; use make_rotation")

    def __str__(self) -> str:
        return f"rot {self.pauli.label()} {angle_to_text(self.angle)}"


def make_rotation(pauli: PauliString, angle: AngleClass) -> PauliRotation:
    """Canonicalize the axis sign into the angle and build a PauliRotation."""
    if pauli.sign < 0:
        return PauliRotation(pauli.with_sign(1), angle.negated())
    return PauliRotation(pauli, angle)


def multiply(p: PauliString, q: PauliString) -> PhasedPauli:
    """Matrix product p*q, exact up to the reported i^k phase.

    Writing each factor as i^(x.z) X^x Z^z per qubit, the product phase is

        i^( w(px & pz) + w(qx & qz) + 2*w(pz & qx) - w(rx & rz) )  mod 4

    where r is the componentwise XOR result and w() is a popcount.
    """
    if p.n != q.n:
        raise PauliError(f"length mismatch: {p.n} vs {q.n}")
    rx = p.x ^ q.x
    rz = p.z ^ q.z
    k = (
        (p.x & p.z).bit_count()
        + (q.x & q.z).bit_count()
        + 2 * (p.z & q.x).bit_count()
        - (rx & rz).bit_count()
    )
    if p.sign * q.sign < 0:
        k += 2
    return PhasedPauli(PauliString(p.n, rx, rz, 1), k % 4)


def commutes(p: PauliString, q: PauliString) -> bool:
    """True iff the symplectic form <p,q> = w(p.x & q.z) + w(p.z & q.x) is even."""
    if p.n != q.n:
        raise PauliError(f"length mismatch: {p.n} vs {q.n}")
    return (((p.x & q.z).bit_count() + (p.z & q.x).bit_count()) & 1) == 0


# --- Clifford gate conjugation --------------------------------------------
#
# Single-qubit rules below are the pushforward g P g^dag images; the
# pullback direction reuses them with S and Sdg swapped (H, X, Y, Z and
# CNOT are self-inverse).  Every sign in this table is locked by the dense
# matrix oracle in the test suite rather than trusted as transcribed.

CLIFFORD_GATES = ("H", "S", "Sdg", "X", "Y", "Z", "CNOT")


def _conj_h(p: PauliString, q: int) -> PauliString:
    bit = 1 << q
    xb = p.x & bit
    zb = p.z & bit
    sign = -p.sign if (xb and zb) else p.sign  # Y -> -Y
    x = (p.x & ~bit) | (bit if zb else 0)
    z = (p.z & ~bit) | (bit if xb else 0)
    return PauliString(p.n, x, z, sign)


def _conj_s(p: PauliString, q: int, dagger: bool) -> PauliString:
    # S: X -> Y, Y -> -X, Z -> Z.  Sdg: X -> -Y, Y -> X.
    bit = 1 << q
    if not p.x & bit:
        return p
    sign = p.sign
    if dagger:
        if not p.z & bit:
            sign = -sign  # X -> -Y
    else:
        if p.z & bit:
            sign = -sign  # Y -> -X
    return PauliString(p.n, p.x, p.z ^ bit, sign)


def _conj_pauli(p: PauliString, q: int, kind: str) -> PauliString:
    bit = 1 << q
    xb = bool(p.x & bit)
    zb = bool(p.z & bit)
    if kind == "X":
        flip = zb
    elif kind == "Z":
        flip = xb
    else:  # Y
        flip = xb != zb
    return p.negate() if flip else p


def _conj_cnot(p: PauliString, c: int, t: int) -> PauliString:
    # X_c -> X_c X_t, Z_t -> Z_c Z_t; sign flips iff x_c & z_t & ~(x_t ^ z_c).
    cbit = 1 << c
    tbit = 1 << t
    x = p.x
    z = p.z
    sign = p.sign
    xc = bool(x & cbit)
    zt = bool(z & tbit)
    xt = bool(x & tbit)
    zc = bool(z & cbit)
    if xc and zt and (xt == zc):
        sign = -sign
    if xc:
        x ^= tbit
    if zt:
        z ^= cbit
    return PauliString(p.n, x, z, sign)


def conjugate_by_gate(p: PauliString, gate: str, qubits: Iterable[int],
                      direction: str = "pushforward") -> PauliString:
    """Return g^dag P g ("pullback") or g P g^dag ("pushforward").

    `gate` is one of CLIFFORD_GATES; `qubits` holds one index, or
    (control, target) for CNOT.
    """
    qs = tuple(qubits)
    for q in qs:
        if not 0 <= q < p.n:
            raise PauliError(f"qubit index {q} out of range for n={p.n}")
    if direction not in ("pullback", "pushforward"):
        raise PauliError(f"unknown direction {direction!r}")
    pull = direction == "pullback"
    if gate == "H":
        return _conj_h(p, qs[0])
    if gate == "S":
        return _conj_s(p, qs[0], dagger=pull)
    if gate == "Sdg":
        return _conj_s(p, qs[0], dagger=not pull)
    if gate in ("X", "Y", "Z"):
        return _conj_pauli(p, qs[0], gate)
    if gate == "CNOT":
        if len(qs) != 2 or qs[0] == qs[1]:
            raise PauliError("CNOT needs two distinct qubit indices")
        return _conj_cnot(p, qs[0], qs[1])
    raise PauliError(f"unsupported Clifford gate {gate!r}")


def conjugate_by_quarter(axis: PauliString, p: PauliString, rotation_sign: int = 1,
                         direction: str = "pushforward") -> PauliString:
    """Conjugate p by the Clifford rotation V = rotation(axis, rotation_sign*pi/2).

    "pushforward" moves V from before p to after it (the absorption
    direction), giving V^dag p V; "pullback" is V p V^dag.  Commuting
    operators pass through unchanged; anticommuting ones become
    -+ i * sign * p * axis, which is Hermitian, so the result is a plain
    signed PauliString.
    """
    if axis.n != p.n:
        raise PauliError(f"length mismatch: {axis.n} vs {p.n}")
    if rotation_sign not in (1, -1):
        raise PauliError("rotation_sign must be +1 or -1")
    if commutes(axis, p):
        return p
    prod = multiply(p, axis)
    # V^dag p V = -i*s * (p @ axis);  V p V^dag = +i*s * (p @ axis)
    if direction == "pushforward":
        k = (prod.i_power + 3 * rotation_sign) % 4
    elif direction == "pullback":
        k = (prod.i_power + rotation_sign) % 4
    else:
        raise PauliError(f"unknown direction {direction!r}")
    return PhasedPauli(prod.pauli, k).to_pauli()


def conjugate_by_pi(axis: PauliString, p: PauliString) -> PauliString:
    """Conjugate p by rotation(axis, pi): sign flip iff the operators anticommute."""
    if axis.n != p.n:
        raise PauliError(f"length mismatch: {axis.n} vs {p.n}")
    return p if commutes(axis, p) else p.negate()


def controlled_pauli_rotations(p1: PauliString, p2: PauliString) -> list[PauliRotation]:
    """+-pi/2 rotations whose product is the controlled-(p1,p2) gate.

    C(P1,P2) == R(P1, pi/2) * R(P2, pi/2) * R(P1@P2, -pi/2) up to global
    phase; the three factors commute pairwise, so any ordering works.
    Inputs must be non-identity and act on disjoint qubit sets of the
    same register.
    """
    if p1.n != p2.n:
        raise PauliError(f"length mismatch: {p1.n} vs {p2.n}")
    if p1.is_identity() or p2.is_identity():
        raise PauliError("controlled-Pauli factors must be non-identity")
    if (p1.x | p1.z) & (p2.x | p2.z):
        raise PauliError("controlled-Pauli factors must have disjoint supports")
    joint = multiply(p1, p2).to_pauli()  # disjoint supports: plain tensor product
    seq = [
        (p1, AngleClass.PLUS_HALF),
        (p2, AngleClass.PLUS_HALF),
        (joint, AngleClass.MINUS_HALF),
    ]
    return [make_rotation(pa, ang) for pa, ang in seq]
