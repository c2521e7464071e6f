"""PBC compilation, layering, merging, absorption, optimization, text format."""
import random

import pytest

from ftcb import oracle
from ftcb.circuit import GateCircuit, GateOp
from ftcb.pauli import AngleClass, PauliString, commutes, make_rotation
from ftcb.pbc import (MERGE_TABLE, CliffordTrace, MeasurementTableau, PBCCircuit,
                      PBCError, absorb_clifford_rotation, compile_to_pbc,
                      layer_rotations, merge_layer, optimize_pbc, parse_pbc,
                      pbc_reduction_stats, serialize_pbc)


def g(kind, *qs, clbit=None):
    return GateOp(kind, tuple(qs), (), clbit)


def rot(label, plus=True):
    return make_rotation(PauliString.from_label(label),
                         AngleClass.PLUS_QUARTER if plus
                         else AngleClass.MINUS_QUARTER)


def random_ct_circuit(rng, max_n=5, max_gates=40):
    n = rng.randint(1, max_n)
    ops = []
    for _ in range(rng.randint(1, max_gates)):
        kind = rng.choice(["CNOT", "H", "S", "T", "Tdg"])
        if kind == "CNOT":
            if n < 2:
                continue
            a, b = rng.sample(range(n), 2)
            ops.append(g("CNOT", a, b))
        else:
            ops.append(g(kind, rng.randrange(n)))
    return GateCircuit(n, 0, ops)


class TestCompile:
    def test_single_t(self):
        pbc = compile_to_pbc(GateCircuit(1, 0, [g("T", 0)]))
        assert [str(r) for r in pbc.rotations] == ["rot Z pi/4"]
        assert [p.label() for p in pbc.measurements.paulis()] == ["Z"]

    def test_hadamard_rotates_axis(self):
        c = GateCircuit(1, 0, [g("H", 0), g("T", 0)])
        pbc = compile_to_pbc(c)
        assert [str(r) for r in pbc.rotations] == ["rot X pi/4"]
        assert [p.label() for p in pbc.measurements.paulis()] == ["X"]
        assert oracle.pbc_equivalence(c, pbc) > 1 - 1e-12

    def test_cnot_pullback_of_rows(self):
        c = GateCircuit(2, 0, [g("T", 0), g("CNOT", 0, 1)])
        pbc = compile_to_pbc(c)
        assert [str(r) for r in pbc.rotations] == ["rot ZI pi/4"]
        assert [p.label() for p in pbc.measurements.paulis()] == ["ZI", "ZZ"]
        assert oracle.pbc_equivalence(c, pbc) > 1 - 1e-12

    def test_t_count_conservation(self):
        rng = random.Random(11)
        for _ in range(30):
            c = random_ct_circuit(rng)
            t_count = sum(1 for op in c.ops if op.kind in ("T", "Tdg"))
            assert len(compile_to_pbc(c).rotations) == t_count

    def test_rejects_non_ct_gate(self):
        c = GateCircuit(1, 0, [GateOp("Rz", (0,), (0.1,))])
        with pytest.raises(PBCError, match="synthesize"):
            compile_to_pbc(c)

    def test_measured_qubits_define_rows(self):
        c = GateCircuit(2, 2, [g("H", 0), g("Measure", 0, clbit=1)])
        pbc = compile_to_pbc(c)
        assert [clbit for clbit, _ in pbc.measurements.items()] == [1]
        assert pbc.measurements.rows[1].label() == "XI"

    def test_gate_after_measure_rejected(self):
        c = GateCircuit(1, 1, [g("Measure", 0, clbit=0), g("H", 0)])
        with pytest.raises(PBCError, match="after measurement"):
            compile_to_pbc(c)

    def test_rows_match_clifford_image(self):
        # row_j == C_total^dag Z_j C_total, checked as matrices
        rng = random.Random(3)
        for _ in range(10):
            n = rng.randint(1, 4)
            ops = []
            for _ in range(rng.randint(1, 15)):
                kind = rng.choice(["CNOT", "H", "S", "Sdg", "X", "Y", "Z"])
                if kind == "CNOT":
                    if n < 2:
                        continue
                    ops.append(g("CNOT", *rng.sample(range(n), 2)))
                else:
                    ops.append(g(kind, rng.randrange(n)))
            c = GateCircuit(n, 0, ops)
            pbc = compile_to_pbc(c)
            u = oracle.circuit_unitary(c)
            import numpy as np
            for q in range(n):
                zq = oracle.pauli_matrix(PauliString.single(n, q, "Z"))
                expect = u.conj().T @ zq @ u
                got = oracle.pauli_matrix(pbc.measurements.rows[q])
                assert np.allclose(expect, got, atol=1e-10)


class TestLayering:
    def test_anticommuting_chain(self):
        rots = [rot("Z"), rot("X"), rot("Z")]
        assert layer_rotations(rots) == [[0], [1], [2]]

    def test_disjoint_single_layer(self):
        rots = [rot("ZI"), rot("IZ")]
        assert layer_rotations(rots) == [[0, 1]]

    def test_mixed_example(self):
        rots = [rot("ZI"), rot("IX"), rot("XX")]
        assert layer_rotations(rots) == [[0, 1], [2]]

    def test_layers_mutually_commute_and_order_legal(self):
        rng = random.Random(17)
        for _ in range(20):
            c = random_ct_circuit(rng)
            rots = compile_to_pbc(c).rotations
            layers = layer_rotations(rots)
            flat = [i for layer in layers for i in layer]
            assert sorted(flat) == list(range(len(rots)))
            for layer in layers:
                for a in range(len(layer)):
                    for b in range(a + 1, len(layer)):
                        assert commutes(rots[layer[a]].pauli,
                                        rots[layer[b]].pauli)
            # no rotation moved past an anticommuting predecessor
            position = {}
            for li, layer in enumerate(layers):
                for idx in layer:
                    position[idx] = li
            for i in range(len(rots)):
                for j in range(i + 1, len(rots)):
                    if not commutes(rots[i].pauli, rots[j].pauli):
                        assert position[i] < position[j]


class TestMergeTable:
    def test_two_plus_quarters_become_half(self):
        residuals, parts = merge_layer([rot("Z"), rot("Z")])
        assert residuals == []
        assert [p.angle for p in parts] == [AngleClass.PLUS_HALF]

    def test_quarter_pair_cancels(self):
        residuals, parts = merge_layer([rot("Z"), rot("Z", plus=False)])
        assert residuals == [] and parts == []

    def test_three_quarters(self):
        residuals, parts = merge_layer([rot("Z")] * 3)
        assert [r.angle for r in residuals] == [AngleClass.PLUS_QUARTER]
        assert [p.angle for p in parts] == [AngleClass.PLUS_HALF]

    def test_opposite_signs_on_negated_axis_merge(self):
        minus_axis = PauliString.from_label("Z").negate()
        a = make_rotation(minus_axis, AngleClass.PLUS_QUARTER)
        b = rot("Z")  # +pi/4 on +Z; a is -pi/4 on +Z after canonicalization
        residuals, parts = merge_layer([a, b])
        assert residuals == [] and parts == []

    def test_rejects_clifford_angle(self):
        bad = make_rotation(PauliString.from_label("Z"), AngleClass.PI)
        with pytest.raises(PBCError):
            merge_layer([bad])

    def test_table_shape(self):
        assert set(MERGE_TABLE) == set(range(8))
        for net, (residual, parts) in MERGE_TABLE.items():
            quarters = residual + sum(
                {AngleClass.PLUS_HALF: 2, AngleClass.MINUS_HALF: -2,
                 AngleClass.PI: 4}[p] for p in parts)
            assert quarters % 8 == net


class TestOptimize:
    @pytest.mark.parametrize("k", range(0, 9))
    def test_consecutive_t_gates(self, k):
        c = GateCircuit(1, 0, [g("T", 0)] * k)
        opt, stats = optimize_pbc(compile_to_pbc(c))
        expected = 1 if k % 2 else 0
        assert stats.optimized_rotation_count == expected
        assert oracle.pbc_equivalence(c, opt) > 1 - 1e-12

    def test_t_tdg_cancel(self):
        c = GateCircuit(1, 0, [g("T", 0), g("Tdg", 0)])
        opt, stats = optimize_pbc(compile_to_pbc(c))
        assert stats.optimized_rotation_count == 0
        assert opt.measurements.rows[0].label() == "Z"

    def test_t_h_t_does_not_merge(self):
        c = GateCircuit(1, 0, [g("T", 0), g("H", 0), g("T", 0)])
        opt, stats = optimize_pbc(compile_to_pbc(c))
        assert stats.optimized_rotation_count == 2
        assert stats.layer_count == 2

    def test_input_circuit_unchanged(self):
        c = GateCircuit(2, 0, [g("T", 0), g("H", 0), g("CNOT", 0, 1),
                               g("T", 0), g("T", 0)])
        pbc = compile_to_pbc(c)
        rows_before = dict(pbc.measurements.rows)
        rots_before = [str(r) for r in pbc.rotations]
        optimize_pbc(pbc)
        assert dict(pbc.measurements.rows) == rows_before
        assert [str(r) for r in pbc.rotations] == rots_before
        assert pbc.clifford_trace.absorbed_parts == []
        assert oracle.pbc_equivalence(c, pbc) > 1 - 1e-12

    def test_never_increases_and_idempotent(self):
        rng = random.Random(23)
        for _ in range(25):
            c = random_ct_circuit(rng)
            pbc = compile_to_pbc(c)
            opt, stats = optimize_pbc(pbc)
            assert stats.optimized_rotation_count <= stats.raw_rotation_count
            opt2, stats2 = optimize_pbc(opt)
            assert [str(r) for r in opt2.rotations] == [str(r) for r in opt.rotations]

    def test_rows_commute_after_optimization(self):
        rng = random.Random(29)
        for _ in range(15):
            c = random_ct_circuit(rng)
            opt, _ = optimize_pbc(compile_to_pbc(c))
            rows = opt.measurements.paulis()
            for i in range(len(rows)):
                for j in range(i + 1, len(rows)):
                    assert commutes(rows[i], rows[j])

    def test_semantic_equivalence_random_sweep(self):
        rng = random.Random(31)
        for _ in range(40):
            c = random_ct_circuit(rng)
            pbc = compile_to_pbc(c)
            assert oracle.pbc_equivalence(c, pbc) > 1 - 1e-9
            opt, _ = optimize_pbc(pbc)
            assert oracle.pbc_equivalence(c, opt) > 1 - 1e-9

    @staticmethod
    def _eager_pass(pbc):
        """Reference sweep: one absorb_clifford_rotation call per part."""
        layers = layer_rotations(pbc.rotations)
        pending = [[pbc.rotations[i] for i in layer] for layer in layers]
        kept = []
        for j in range(len(pending)):
            residuals, parts = merge_layer(pending[j], layers[j])
            for part in parts:
                flat = [rot for layer in pending[j + 1:] for rot in layer]
                conj = absorb_clifford_rotation(part, flat, pbc.measurements,
                                                pbc.clifford_trace)
                pos = 0
                for k in range(j + 1, len(pending)):
                    width = len(pending[k])
                    pending[k] = conj[pos:pos + width]
                    pos += width
            kept.append(residuals)
        rotations = [rot for layer in kept for rot in layer]
        return PBCCircuit(pbc.n, rotations, pbc.measurements, pbc.clifford_trace)

    def test_composed_map_matches_eager_absorption(self):
        rng = random.Random(53)
        for _ in range(20):
            c = random_ct_circuit(rng, max_n=4, max_gates=30)
            base = compile_to_pbc(c)
            eager = PBCCircuit(base.n, list(base.rotations),
                               MeasurementTableau(dict(base.measurements.rows)),
                               CliffordTrace(list(base.clifford_trace.source_gates)))
            current = eager
            while True:
                before = len(current.rotations)
                current = self._eager_pass(current)
                if len(current.rotations) >= before:
                    break
            fast, _ = optimize_pbc(base)
            assert [str(r) for r in fast.rotations] == \
                [str(r) for r in current.rotations]
            assert fast.measurements.rows == current.measurements.rows
            assert [str(p) for p in fast.clifford_trace.absorbed_parts] == \
                [str(p) for p in current.clifford_trace.absorbed_parts]

    def test_rows_track_absorbed_cliffords(self):
        # after optimization, row_j == (C_total v_1 ... v_k)^dag Z_j (...)
        import numpy as np
        rng = random.Random(37)
        for _ in range(12):
            c = random_ct_circuit(rng, max_n=4, max_gates=25)
            opt, _ = optimize_pbc(compile_to_pbc(c))
            n = opt.n
            trace = np.eye(2 ** n, dtype=complex)
            for op in opt.clifford_trace.source_gates:
                trace = oracle.gate_unitary(op, n) @ trace
            for part in opt.clifford_trace.absorbed_parts:
                trace = trace @ oracle.rotation_matrix(part.pauli,
                                                       part.angle.radians)
            for q, row in opt.measurements.items():
                zq = oracle.pauli_matrix(PauliString.single(n, q, "Z"))
                expect = trace.conj().T @ zq @ trace
                assert np.allclose(expect, oracle.pauli_matrix(row), atol=1e-9)

    def test_corrupted_rotation_detected(self):
        c = GateCircuit(2, 0, [g("T", 0), g("H", 1), g("CNOT", 1, 0), g("T", 1)])
        pbc = compile_to_pbc(c)
        bad = pbc.rotations[0]
        pbc.rotations[0] = make_rotation(bad.pauli, bad.angle.negated())
        assert oracle.pbc_equivalence(c, pbc) < 1 - 1e-6


class TestReductionStats:
    def test_adder_numbers(self):
        from ftcb.pbc import PBCStats
        stats = PBCStats(raw_rotation_count=392, optimized_rotation_count=224)
        red = pbc_reduction_stats(stats)
        assert red["rotation_reduction_pct"] == pytest.approx(42.857142857, abs=1e-6)

    def test_zero_raw_convention(self):
        from ftcb.pbc import PBCStats
        stats = PBCStats()
        red = pbc_reduction_stats(stats)
        assert red["rotation_reduction_pct"] == 0.0

    def test_weight_increase_is_negative(self):
        from ftcb.pbc import PBCStats
        stats = PBCStats(raw_rotation_count=100, optimized_rotation_count=100,
                         raw_weight_mean=4.33, optimized_weight_mean=5.60)
        red = pbc_reduction_stats(stats)
        assert red["weight_reduction_pct"] == pytest.approx(-29.33, abs=0.2)


class TestTextFormat:
    def test_round_trip(self):
        c = GateCircuit(3, 0, [g("T", 0), g("CNOT", 0, 2), g("H", 1), g("T", 1)])
        pbc = compile_to_pbc(c)
        text = serialize_pbc(pbc)
        assert text.startswith("pbc v1\nn 3\n")
        back = parse_pbc(text)
        assert [str(r) for r in back.rotations] == [str(r) for r in pbc.rotations]
        assert back.measurements.rows == pbc.measurements.rows

    def test_example_line(self):
        pbc = compile_to_pbc(GateCircuit(3, 0, [g("T", 0)]))
        assert "rot +ZII pi/4" in serialize_pbc(pbc)

    def test_comments_ignored(self):
        text = "# comment\npbc v1\nn 1\nrot +Z pi/4\n# more\nmeas +Z -> c0\n"
        pbc = parse_pbc(text)
        assert len(pbc.rotations) == 1

    def test_unknown_angle_rejected(self):
        with pytest.raises(PBCError, match="angle"):
            parse_pbc("pbc v1\nn 1\nrot +Z pi/3\n")

    def test_missing_header_rejected(self):
        with pytest.raises(PBCError, match="header"):
            parse_pbc("n 1\nrot +Z pi/4\n")

    def test_unsigned_pauli_rejected(self):
        with pytest.raises(PBCError, match="sign"):
            parse_pbc("pbc v1\nn 1\nrot Z pi/4\n")
