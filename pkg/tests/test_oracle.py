"""The dense oracle's own invariants: endianness, composition, homomorphism."""
import itertools
import random

import numpy as np
import pytest

from ftcb import oracle
from ftcb.circuit import GateCircuit, GateOp
from ftcb.metrics import InteractionGraph
from ftcb.pauli import PauliString, multiply


def g(kind, *qs, params=()):
    return GateOp(kind, tuple(qs), tuple(params))


class TestEndianness:
    def test_qubit_zero_is_most_significant(self):
        # X on qubit 0 of 2 flips the high bit: |00> -> |10> (index 0 -> 2)
        u = oracle.circuit_unitary(GateCircuit(2, 0, [g("X", 0)]))
        state = u[:, 0]
        assert state[2] == pytest.approx(1.0)
        u = oracle.circuit_unitary(GateCircuit(2, 0, [g("X", 1)]))
        assert u[:, 0][1] == pytest.approx(1.0)

    def test_pauli_matrix_order(self):
        zi = oracle.pauli_matrix(PauliString.from_label("ZI"))
        assert np.allclose(zi, np.diag([1, 1, -1, -1]))


class TestCircuitUnitary:
    def test_empty_is_identity(self):
        assert np.allclose(oracle.circuit_unitary(GateCircuit(2)), np.eye(4))

    def test_x_is_sigma_x(self):
        u = oracle.circuit_unitary(GateCircuit(1, 0, [g("X", 0)]))
        assert np.allclose(u, np.array([[0, 1], [1, 0]]))

    def test_bell_columns(self):
        u = oracle.circuit_unitary(GateCircuit(2, 0, [g("H", 0), g("CNOT", 0, 1)]))
        s = 1 / np.sqrt(2)
        expect = np.array([[s, 0, s, 0], [0, s, 0, s],
                           [0, s, 0, -s], [s, 0, -s, 0]])
        assert np.allclose(u, expect)

    def test_composition(self):
        rng = random.Random(6)
        kinds = ["H", "S", "T", "X", "CNOT"]
        for _ in range(10):
            n = rng.randint(2, 3)
            ops = []
            for _ in range(rng.randint(2, 12)):
                k = rng.choice(kinds)
                if k == "CNOT":
                    ops.append(g("CNOT", *rng.sample(range(n), 2)))
                else:
                    ops.append(g(k, rng.randrange(n)))
            cut = rng.randint(0, len(ops))
            u_full = oracle.circuit_unitary(GateCircuit(n, 0, ops))
            u1 = oracle.circuit_unitary(GateCircuit(n, 0, ops[:cut]))
            u2 = oracle.circuit_unitary(GateCircuit(n, 0, ops[cut:]))
            assert np.allclose(u_full, u2 @ u1)

    def test_rejects_measure_and_size(self):
        with pytest.raises(oracle.OracleError):
            oracle.circuit_unitary(
                GateCircuit(1, 1, [GateOp("Measure", (0,), (), 0)]))
        with pytest.raises(oracle.OracleError):
            oracle.circuit_unitary(GateCircuit(11))


class TestPauliMatrix:
    def test_z(self):
        assert np.allclose(oracle.pauli_matrix(PauliString.from_label("Z")),
                           np.diag([1, -1]))

    def test_negative_y(self):
        y = np.array([[0, -1j], [1j, 0]])
        got = oracle.pauli_matrix(PauliString.from_label("Y").negate())
        assert np.allclose(got, -y)

    def test_homomorphism_with_multiply(self):
        labels = ["".join(t) for t in itertools.product("IXYZ", repeat=2)]
        for a in labels:
            for b in labels:
                p, q = PauliString.from_label(a), PauliString.from_label(b)
                r = multiply(p, q)
                assert np.allclose(
                    oracle.pauli_matrix(p) @ oracle.pauli_matrix(q),
                    (1j ** r.i_power) * oracle.pauli_matrix(r.pauli))


class TestExhaustiveModularity:
    def test_single_edge(self):
        graph = InteractionGraph(2)
        graph.add(0, 1)
        q_max, best = oracle.exhaustive_modularity(graph)
        assert q_max == pytest.approx(0.0)
        assert best == [[0, 1]]

    def test_two_triangles(self):
        graph = InteractionGraph(6)
        for (a, b) in [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]:
            graph.add(a, b)
        q_max, best = oracle.exhaustive_modularity(graph)
        assert q_max == pytest.approx(5 / 14, abs=1e-12)
        assert sorted(map(sorted, best)) == [[0, 1, 2], [3, 4, 5]]

    def test_uniform_k5(self):
        k5 = InteractionGraph(5)
        for a in range(5):
            for b in range(a + 1, 5):
                k5.add(a, b)
        q_max, best = oracle.exhaustive_modularity(k5)
        assert q_max == pytest.approx(0.0, abs=1e-12)
        assert len(best) == 1

    def test_partition_count_six_nodes(self):
        from ftcb.oracle import _set_partitions
        assert sum(1 for _ in _set_partitions(6)) == 203  # Bell number B(6)

    def test_size_cap(self):
        with pytest.raises(oracle.OracleError):
            oracle.exhaustive_modularity(InteractionGraph(11))
