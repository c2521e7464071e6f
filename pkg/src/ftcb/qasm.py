"""OpenQASM 2.0 subset: parsing and serialization.

Supported statements: the version header, `include "qelib1.inc";`,
qreg/creg declarations, applications of the gates listed in _GATE_NAMES,
measure, and barrier.  Multiple quantum registers are flattened into one
index space in declaration order.  Custom gate definitions, opaque gates,
and `if` statements are rejected loudly.

Angle expressions understand pi, numeric literals, + - * /, unary minus,
and parentheses.
"""
from __future__ import annotations

import math
import re

from .circuit import CircuitError, GateCircuit, GateOp

_GATE_NAMES = {
    "x": "X", "y": "Y", "z": "Z", "h": "H",
    "s": "S", "sdg": "Sdg", "t": "T", "tdg": "Tdg",
    "cx": "CNOT", "cz": "CZ", "swap": "SWAP", "ccx": "CCX",
    "rz": "Rz", "rx": "Rx", "ry": "Ry",
    "u1": "U1", "u2": "U2", "u3": "U3",
    "cu1": "CU1",
    "id": None,  # accepted, contributes no op
}
_QASM_NAMES = {v: k for k, v in _GATE_NAMES.items() if v is not None}

_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<comment>//[^\n]*)
      | (?P<number>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)
      | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<string>"[^"\n]*")
      | (?P<sym>->|==|[()\[\]{},;+\-*/=])
    """,
    re.VERBOSE,
)


class QasmError(CircuitError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        if line is not None:
            message = f"line {line}, col {col}: {message}"
        super().__init__(message)
        self.line = line
        self.col = col


class _Token:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind, text, line, col):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise QasmError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(_Token(kind, chunk, line, col))
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0
        self.qregs: list[tuple[str, int, int]] = []  # (name, size, base offset)
        self.cregs: list[tuple[str, int, int]] = []
        self.ops: list[GateOp] = []

    # token plumbing ------------------------------------------------------
    def peek(self) -> _Token | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self) -> _Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            raise QasmError("unexpected end of input",
                            last.line if last else 1, last.col if last else 1)
        self.i += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.next()
        if tok.text != text:
            raise QasmError(f"expected {text!r}, found {tok.text!r}", tok.line, tok.col)
        return tok

    # expression grammar ---------------------------------------------------
    def parse_expr(self) -> float:
        value = self.parse_term()
        while self.peek() and self.peek().text in "+-":
            op = self.next().text
            rhs = self.parse_term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def parse_term(self) -> float:
        value = self.parse_factor()
        while self.peek() and self.peek().text in "*/":
            op = self.next().text
            rhs = self.parse_factor()
            if op == "*":
                value *= rhs
            else:
                value /= rhs
        return value

    def parse_factor(self) -> float:
        tok = self.next()
        if tok.text == "-":
            return -self.parse_factor()
        if tok.text == "+":
            return self.parse_factor()
        if tok.text == "(":
            value = self.parse_expr()
            self.expect(")")
            return value
        if tok.kind == "number":
            return float(tok.text)
        if tok.kind == "name":
            if tok.text == "pi":
                return math.pi
            raise QasmError(f"unknown identifier {tok.text!r} in expression",
                            tok.line, tok.col)
        raise QasmError(f"unexpected token {tok.text!r} in expression",
                        tok.line, tok.col)

    # register lookups -----------------------------------------------------
    def _find(self, regs, name: str, tok: _Token):
        for rname, size, base in regs:
            if rname == name:
                return size, base
        raise QasmError(f"undeclared register {name!r}", tok.line, tok.col)

    def parse_operand(self, regs) -> list[int]:
        """A register reference: `name` (whole register) or `name[k]`."""
        tok = self.next()
        if tok.kind != "name":
            raise QasmError(f"expected register name, found {tok.text!r}",
                            tok.line, tok.col)
        size, base = self._find(regs, tok.text, tok)
        if self.peek() and self.peek().text == "[":
            self.next()
            idx_tok = self.next()
            if idx_tok.kind != "number" or "." in idx_tok.text:
                raise QasmError("register index must be an integer",
                                idx_tok.line, idx_tok.col)
            idx = int(idx_tok.text)
            self.expect("]")
            if idx >= size:
                raise QasmError(
                    f"index {idx} out of range for {tok.text}[{size}]",
                    tok.line, tok.col)
            return [base + idx]
        return [base + k for k in range(size)]

    # statements -----------------------------------------------------------
    def parse_header(self):
        tok = self.next()
        if tok.text != "OPENQASM":
            raise QasmError("file must start with an OPENQASM 2.0 header",
                            tok.line, tok.col)
        ver = self.next()
        if ver.text != "2.0":
            raise QasmError(f"unsupported OpenQASM version {ver.text}",
                            ver.line, ver.col)
        self.expect(";")

    def parse_statement(self):
        tok = self.next()
        if tok.text == "include":
            fname = self.next()
            if fname.text != '"qelib1.inc"':
                raise QasmError(f"unsupported include {fname.text}",
                                fname.line, fname.col)
            self.expect(";")
            return
        if tok.text in ("qreg", "creg"):
            name_tok = self.next()
            self.expect("[")
            size_tok = self.next()
            self.expect("]")
            self.expect(";")
            if size_tok.kind != "number" or "." in size_tok.text:
                raise QasmError("register size must be an integer",
                                size_tok.line, size_tok.col)
            size = int(size_tok.text)
            if size <= 0:
                raise QasmError("register size must be positive",
                                size_tok.line, size_tok.col)
            regs = self.qregs if tok.text == "qreg" else self.cregs
            if any(r[0] == name_tok.text for r in self.qregs + self.cregs):
                raise QasmError(f"duplicate register name {name_tok.text!r}",
                                name_tok.line, name_tok.col)
            base = sum(r[1] for r in regs)
            regs.append((name_tok.text, size, base))
            return
        if tok.text == "measure":
            src = self.parse_operand(self.qregs)
            self.expect("->")
            dst = self.parse_operand(self.cregs)
            self.expect(";")
            if len(src) != len(dst):
                raise QasmError("measure operand sizes differ", tok.line, tok.col)
            for q, c in zip(src, dst):
                self.ops.append(GateOp("Measure", (q,), (), c))
            return
        if tok.text == "barrier":
            qubits: list[int] = []
            while True:
                qubits.extend(self.parse_operand(self.qregs))
                if self.peek() and self.peek().text == ",":
                    self.next()
                    continue
                break
            self.expect(";")
            self.ops.append(GateOp("Barrier", tuple(qubits)))
            return
        if tok.text in ("gate", "opaque", "if"):
            raise QasmError(f"unsupported construct {tok.text!r}", tok.line, tok.col)
        if tok.kind == "name":
            self.parse_gate(tok)
            return
        raise QasmError(f"unexpected token {tok.text!r}", tok.line, tok.col)

    def parse_gate(self, tok: _Token):
        if tok.text not in _GATE_NAMES:
            raise QasmError(f"unsupported gate {tok.text!r}", tok.line, tok.col)
        kind = _GATE_NAMES[tok.text]
        params: list[float] = []
        if self.peek() and self.peek().text == "(":
            self.next()
            if self.peek() and self.peek().text != ")":
                params.append(self.parse_expr())
                while self.peek() and self.peek().text == ",":
                    self.next()
                    params.append(self.parse_expr())
            self.expect(")")
        operands: list[list[int]] = [self.parse_operand(self.qregs)]
        while self.peek() and self.peek().text == ",":
            self.next()
            operands.append(self.parse_operand(self.qregs))
        self.expect(";")
        if kind is None:  # id gate
            return
        try:
            if all(len(o) == 1 for o in operands):
                self.ops.append(GateOp(kind, tuple(o[0] for o in operands),
                                       tuple(params)))
            elif len(operands) == 1:
                # whole-register broadcast of a one-qubit gate
                for q in operands[0]:
                    self.ops.append(GateOp(kind, (q,), tuple(params)))
            else:
                raise QasmError("register broadcast only supported for "
                                "single-qubit gates", tok.line, tok.col)
        except CircuitError as exc:
            raise QasmError(str(exc), tok.line, tok.col) from None

    def run(self) -> GateCircuit:
        self.parse_header()
        while self.peek() is not None:
            self.parse_statement()
        n_qubits = sum(r[1] for r in self.qregs)
        n_clbits = sum(r[1] for r in self.cregs)
        if n_qubits == 0:
            raise QasmError("no quantum register declared")
        mapping = {}
        for name, size, base in self.qregs:
            for k in range(size):
                mapping[base + k] = f"{name}[{k}]"
        circuit = GateCircuit(n_qubits, n_clbits, self.ops)
        circuit.metadata["register_map"] = mapping
        return circuit


def parse_qasm(text: str) -> GateCircuit:
    return _Parser(text).run()


def _fmt_angle(value: float) -> str:
    return f"{value:.17g}"


def serialize_qasm(circuit: GateCircuit, header_comments: list[str] | None = None) -> str:
    lines = []
    for comment in header_comments or []:
        lines.append(f"// {comment}")
    mapping = circuit.metadata.get("register_map")
    reg_names = {v.split("[")[0] for v in mapping.values()} if mapping else set()
    if len(reg_names) > 1:  # document flattening only for multi-register sources
        for k in sorted(mapping):
            lines.append(f"// q[{k}] = {mapping[k]}")
    lines.append("OPENQASM 2.0;")
    lines.append('include "qelib1.inc";')
    lines.append(f"qreg q[{circuit.n_qubits}];")
    if circuit.n_clbits:
        lines.append(f"creg c[{circuit.n_clbits}];")
    for op in circuit.ops:
        if op.kind == "Measure":
            lines.append(f"measure q[{op.qubits[0]}] -> c[{op.clbit}];")
            continue
        if op.kind == "Barrier":
            qs = ",".join(f"q[{q}]" for q in op.qubits)
            lines.append(f"barrier {qs};")
            continue
        name = _QASM_NAMES[op.kind]
        params = ""
        if op.params:
            params = "(" + ",".join(_fmt_angle(p) for p in op.params) + ")"
        qs = ",".join(f"q[{q}]" for q in op.qubits)
        lines.append(f"{name}{params} {qs};")
    return "\n".join(lines) + "\n"
