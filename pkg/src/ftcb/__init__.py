"""ftcb: fault-tolerant compilation toolkit.

Transpiles gate-level circuits into Clifford+T and Pauli-based-computation
(PBC) forms, optimizes PBC rotation sequences, and computes structural and
statistical circuit metrics, with a dense-matrix oracle for desk-scale
verification.
"""
from .analysis import AnalysisConfig, AnalysisResult, analyze_circuit
from .circuit import GateCircuit, GateOp, circuit_depth
from .generators import (HamiltonianTermList, LatticeSpec, TrotterConfig,
                         gen_adder, gen_qft, pauli_terms, trotterize)
from .metrics import (CommunityResult, InteractionGraph, build_ct_graph,
                      build_pbc_graph, ct_stats, degree_stats, graph_density,
                      louvain, pauli_weight_stats, pbc_ops_per_qubit,
                      t_density, t_timing)
from .normalize import normalize_to_clifford_rz
from .pauli import (AngleClass, PauliRotation, PauliString, commutes,
                    conjugate_by_gate, conjugate_by_quarter,
                    controlled_pauli_rotations, make_rotation, multiply)
from .pbc import (PBCCircuit, PBCStats, compile_to_pbc, layer_rotations,
                  merge_layer, optimize_pbc, parse_pbc, pbc_reduction_stats,
                  serialize_pbc)
from .qasm import parse_qasm, serialize_qasm
from .synth import (BaseLibrary, SynthesisConfig, SynthesisReport,
                    fidelity_from_distance, get_library, ingest_external_ct,
                    solovay_kitaev, synthesize_circuit)

__version__ = "0.1.0"
