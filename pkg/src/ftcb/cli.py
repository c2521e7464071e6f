"""Command-line surface: analyze, bench, generate, convert (+hidden verify).

All outputs are deterministic for fixed inputs, flags, and seed: stats
documents carry no timestamps, files are written atomically, and batch
results are ordered independently of worker scheduling.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from multiprocessing import Pool
from pathlib import Path

from .analysis import AnalysisConfig, AnalysisResult, analyze_circuit
from .circuit import CircuitError, GateCircuit
from .generators import (GeneratorError, LatticeSpec, TrotterConfig, gen_adder,
                         gen_qft, pauli_terms, trotterize)
from .pbc import PBCError, compile_to_pbc, serialize_pbc
from .qasm import QasmError, parse_qasm, serialize_qasm
from .schema import validate_stats
from .synth import SynthesisError

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_UNSUPPORTED_GATE = 2

FAMILIES = ("qft", "adder", "ising_1d", "heisenberg_1d", "heisenberg_2d",
            "fermi_hubbard_1d")


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_FAIL):
        super().__init__(message)
        self.code = code


def _atomic_write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def _workers() -> int:
    env = os.environ.get("FTCB_THREADS")
    if env:
        return max(1, int(env))
    return max(1, (os.cpu_count() or 2) - 1)


def _read_circuit(path: Path) -> GateCircuit:
    try:
        return parse_qasm(path.read_text())
    except FileNotFoundError:
        raise CliError(f"cannot read {path}")
    except QasmError as exc:
        raise CliError(f"{path}: {exc}")


def _estimate_pbc_bytes(circuit: GateCircuit) -> int:
    t_count = sum(1 for op in circuit.ops if op.kind in ("T", "Tdg"))
    per_rotation = 160 + 2 * max(1, circuit.n_qubits // 8)
    return t_count * per_rotation


def _analysis_config(args) -> AnalysisConfig:
    return AnalysisConfig(
        synth=args.synth,
        sk_depth=args.sk_depth,
        sk_base_length=args.sk_base_length,
        pbc_opt=not args.no_pbc_opt,
        include_measurements=args.include_measurements,
        weight_scope=args.weight_scope,
        bins=args.bins,
        seed=args.seed,
    )


def _run_analysis(path: Path, cfg: AnalysisConfig, external: Path | None,
                  max_ram_gb: float) -> AnalysisResult:
    circuit = _read_circuit(path)
    ext_circuit = _read_circuit(external) if external else None
    if cfg.synth == "external" and ext_circuit is None:
        raise CliError("--synth external requires --external FILE")
    try:
        from .analysis import to_clifford_t
        ct, _ = to_clifford_t(circuit, cfg, ext_circuit)
    except SynthesisError as exc:
        raise CliError(str(exc), EXIT_UNSUPPORTED_GATE)
    estimate = _estimate_pbc_bytes(ct)
    if estimate > max_ram_gb * 1e9:
        raise CliError(
            f"estimated PBC memory {estimate/1e9:.1f} GB exceeds --max-ram "
            f"{max_ram_gb} GB; refusing to start", EXIT_FAIL)
    try:
        return analyze_circuit(circuit, cfg, ext_circuit, source_name=path.name)
    except (SynthesisError, PBCError) as exc:
        raise CliError(str(exc), EXIT_UNSUPPORTED_GATE)
    except CircuitError as exc:
        raise CliError(str(exc))


def _write_artifacts(result: AnalysisResult, out_dir: Path):
    stats = result.stats
    validate_stats(stats)
    _atomic_write(out_dir / "stats.json", result.stats_json())
    _atomic_write(out_dir / "clifford_t.qasm", result.clifford_t_qasm())
    _atomic_write(out_dir / "circuit.pbc", result.pbc_text())
    _atomic_write(out_dir / "t_density.csv", result.t_grid.to_csv())
    _atomic_write(out_dir / "pbc_density.csv", result.pbc_grid.to_csv())


def cmd_analyze(args) -> int:
    cfg = _analysis_config(args)
    path = Path(args.file)
    result = _run_analysis(path, cfg, Path(args.external) if args.external else None,
                           args.max_ram)
    out_dir = Path(args.out) / path.stem
    _write_artifacts(result, out_dir)
    print(f"analyzed {path} -> {out_dir}/stats.json "
          f"(t_count={result.stats['t_count']}, "
          f"pbc_t_operators={result.stats['pbc_t_operators']})")
    return EXIT_OK


# --- bench ----------------------------------------------------------------------

_SUMMARY_COLUMNS = [
    "circuit", "pipeline", "total_gates", "depth", "clifford_gates", "t_count",
    "graph_density", "degree_mean_unweighted", "degree_std_unweighted",
    "modularity", "num_communities",
    "raw_rotations", "optimized_rotations", "rotation_reduction_pct",
    "raw_weight_mean", "raw_weight_std",
    "optimized_weight_mean", "optimized_weight_std", "weight_reduction_pct",
    "pbc_degree_mean", "pbc_degree_std", "pbc_modularity", "pbc_num_communities",
]


def _pipeline_config(pipeline: str, args) -> AnalysisConfig:
    if pipeline == "none":
        return AnalysisConfig(
            synth="none", pbc_opt=not args.no_pbc_opt,
            include_measurements=args.include_measurements,
            weight_scope=args.weight_scope, bins=args.bins, seed=args.seed)
    if pipeline.startswith("sk-"):
        try:
            depth = int(pipeline[3:])
        except ValueError:
            raise CliError(f"bad pipeline label {pipeline!r}")
        return AnalysisConfig(
            synth="sk", sk_depth=depth, sk_base_length=args.sk_base_length,
            pbc_opt=not args.no_pbc_opt,
            include_measurements=args.include_measurements,
            weight_scope=args.weight_scope, bins=args.bins, seed=args.seed,
            label=pipeline)
    if pipeline.startswith("gs-"):
        raise CliError(
            f"pipeline {pipeline!r} needs an external synthesizer; run "
            "`ftcb analyze --synth external --external FILE` per circuit")
    raise CliError(f"unknown pipeline {pipeline!r}")


def _bench_one(job) -> dict:
    path_str, pipeline, args_dict, out_root = job
    args = argparse.Namespace(**args_dict)
    path = Path(path_str)
    out_dir = Path(out_root) / path.stem / pipeline
    entry = {
        "input": str(path),
        "pipeline": pipeline,
        "status": "ok",
        # relative to the manifest's own directory
        "stats_file": f"{path.stem}/{pipeline}/stats.json",
        "wall_time_s": None,
        "error": None,
    }
    start = time.monotonic()
    try:
        cfg = _pipeline_config(pipeline, args)
        result = _run_analysis(path, cfg, None, args.max_ram)
        _write_artifacts(result, out_dir)
        row = _summary_row(path.stem, pipeline, result.stats)
    except Exception as exc:  # isolate per-circuit failures
        entry["status"] = "error"
        entry["error"] = str(exc)
        entry["stats_file"] = None
        row = None
    entry["wall_time_s"] = round(time.monotonic() - start, 3)
    return {"entry": entry, "row": row}


def _summary_row(circuit: str, pipeline: str, stats: dict) -> dict:
    pbc = stats["pbc"]
    graph = pbc["interaction_graph"]
    return {
        "circuit": circuit,
        "pipeline": pipeline,
        "total_gates": stats["total_gates"],
        "depth": stats["depth"],
        "clifford_gates": stats["clifford_gates"],
        "t_count": stats["t_count"],
        "graph_density": stats["graph_density"],
        "degree_mean_unweighted": stats["degree_mean_unweighted"],
        "degree_std_unweighted": stats["degree_std_unweighted"],
        "modularity": stats["modularity"],
        "num_communities": stats["num_communities"],
        "raw_rotations": pbc["raw_rotations"],
        "optimized_rotations": pbc["optimized_rotations"],
        "rotation_reduction_pct": pbc["rotation_reduction_pct"],
        "raw_weight_mean": pbc["raw_weight"]["mean"],
        "raw_weight_std": pbc["raw_weight"]["std"],
        "optimized_weight_mean": pbc["optimized_weight"]["mean"],
        "optimized_weight_std": pbc["optimized_weight"]["std"],
        "weight_reduction_pct": pbc["weight_reduction_pct"],
        "pbc_degree_mean": graph["degree_mean_unweighted"],
        "pbc_degree_std": graph["degree_std_unweighted"],
        "pbc_modularity": graph["modularity"],
        "pbc_num_communities": graph["num_communities"],
    }


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def cmd_bench(args) -> int:
    suite = Path(args.dir)
    files = sorted(suite.glob("*.qasm"))
    if not files:
        print(f"no .qasm files found in {suite}", file=sys.stderr)
        return EXIT_FAIL
    pipelines = [p.strip() for p in args.pipelines.split(",") if p.strip()]
    if not pipelines:
        print("no pipelines requested", file=sys.stderr)
        return EXIT_FAIL
    for p in pipelines:  # fail fast on bad labels before spawning workers
        _pipeline_config(p, args)
    args_dict = vars(args).copy()
    del args_dict["func"]
    jobs = [(str(f), p, args_dict, args.out) for f in files for p in pipelines]
    workers = min(_workers(), len(jobs))
    if workers > 1:
        with Pool(workers) as pool:
            outcomes = pool.map(_bench_one, jobs)
    else:
        outcomes = [_bench_one(j) for j in jobs]
    outcomes.sort(key=lambda o: (o["entry"]["input"], o["entry"]["pipeline"]))
    manifest = {
        "suite": str(suite),
        "pipelines": pipelines,
        "entries": [o["entry"] for o in outcomes],
    }
    out_root = Path(args.out)
    _atomic_write(out_root / "manifest.json",
                  json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    rows = [o["row"] for o in outcomes if o["row"]]
    lines = [",".join(_SUMMARY_COLUMNS)]
    for row in rows:
        lines.append(",".join(_csv_cell(row[c]) for c in _SUMMARY_COLUMNS))
    _atomic_write(out_root / "summary.csv", "\n".join(lines) + "\n")
    n_err = sum(1 for o in outcomes if o["entry"]["status"] == "error")
    print(f"bench: {len(outcomes)} runs, {n_err} failures -> {out_root}")
    return EXIT_OK


# --- generate ----------------------------------------------------------------------

def _build_family(args) -> tuple[GateCircuit, list[str]]:
    family = args.family
    if family == "qft":
        circuit = gen_qft(args.qubits)
        prov = [f"family=qft qubits={args.qubits}"]
    elif family == "adder":
        circuit = gen_adder(args.bits)
        prov = [f"family=adder bits={args.bits} design=ripple-carry"]
    else:
        periodic = not args.open
        if family == "heisenberg_2d":
            lattice = LatticeSpec((args.rows, args.cols), periodic)
            sites_desc = f"rows={args.rows} cols={args.cols}"
        else:
            lattice = LatticeSpec((args.sites,), periodic)
            sites_desc = f"sites={args.sites}"
        params = {}
        if family == "ising_1d":
            params = {"j": args.j, "h": args.field}
            pdesc = f"J={args.j} h={args.field}"
        elif family in ("heisenberg_1d", "heisenberg_2d"):
            params = {"jx": args.jx, "jy": args.jy, "jz": args.jz}
            pdesc = f"Jx={args.jx} Jy={args.jy} Jz={args.jz}"
        else:
            params = {"t": args.hopping, "u": args.u}
            pdesc = f"t={args.hopping} U={args.u}"
        terms = pauli_terms(family, lattice, **params)
        circuit = trotterize(terms, TrotterConfig(args.steps, args.dt))
        prov = [
            f"family={family} {sites_desc} periodic={periodic} {pdesc}",
            f"trotter steps={args.steps} dt={args.dt} order=1",
        ]
    return circuit, prov


def cmd_generate(args) -> int:
    try:
        circuit, prov = _build_family(args)
    except GeneratorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if args.out:
        out = Path(args.out)
    else:
        out = Path(f"{_default_name(args)}.qasm")
    _atomic_write(out, serialize_qasm(circuit, header_comments=prov))
    print(f"wrote {out} ({circuit.n_qubits} qubits, {len(circuit.ops)} ops)")
    return EXIT_OK


def _default_name(args) -> str:
    if args.family == "qft":
        return f"qft_{args.qubits}q"
    if args.family == "adder":
        return f"adder_{2*args.bits+2}q"
    if args.family == "heisenberg_2d":
        return f"heisenberg_2d_{args.rows}x{args.cols}"
    n = args.sites * (2 if args.family == "fermi_hubbard_1d" else 1)
    return f"{args.family}_{n}q"


# --- convert ------------------------------------------------------------------------

def cmd_convert(args) -> int:
    path = Path(args.file)
    if args.to == "qasm":
        print("error: PBC -> QASM is a lossy direction (Clifford structure "
              "was absorbed into the measurements); refusing", file=sys.stderr)
        return EXIT_FAIL
    circuit = _read_circuit(path)
    try:
        pbc = compile_to_pbc(circuit)
    except PBCError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED_GATE
    out = Path(args.out) if args.out else path.with_suffix(".pbc")
    _atomic_write(out, serialize_pbc(pbc))
    print(f"wrote {out} ({len(pbc.rotations)} rotations)")
    return EXIT_OK


def cmd_verify(args) -> int:
    from . import oracle
    from .pbc import optimize_pbc
    circuit = _read_circuit(Path(args.file))
    try:
        pbc = compile_to_pbc(circuit)
        f_raw = oracle.pbc_equivalence(circuit, pbc)
        opt, _ = optimize_pbc(pbc)
        f_opt = oracle.pbc_equivalence(circuit, opt)
    except PBCError as exc:
        raise CliError(str(exc), EXIT_UNSUPPORTED_GATE)
    except oracle.OracleError as exc:
        raise CliError(str(exc))
    print(f"raw fidelity:       {f_raw:.15f}")
    print(f"optimized fidelity: {f_opt:.15f}")
    return EXIT_OK if min(f_raw, f_opt) > 1 - 1e-9 else EXIT_FAIL


# --- argument wiring ----------------------------------------------------------------------

def _add_analysis_flags(p: argparse.ArgumentParser):
    p.add_argument("--synth", choices=("sk", "none", "external"), default="none")
    p.add_argument("--sk-depth", type=int, default=1, dest="sk_depth")
    p.add_argument("--sk-base-length", type=int, default=10, dest="sk_base_length")
    p.add_argument("--no-pbc-opt", action="store_true", dest="no_pbc_opt")
    p.add_argument("--include-measurements", action="store_true",
                   dest="include_measurements")
    p.add_argument("--weight-scope", choices=("rotations", "measurements", "both"),
                   default="rotations", dest="weight_scope")
    p.add_argument("--bins", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-ram", type=float, default=4.0, dest="max_ram",
                   help="refuse analyses whose PBC form would exceed this many GB")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ftcb",
        description="Fault-tolerant compilation toolkit: Clifford+T and "
                    "Pauli-based-computation transpilation and analytics")
    sub = parser.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="analyze one QASM circuit end to end")
    pa.add_argument("file")
    _add_analysis_flags(pa)
    pa.add_argument("--external", default=None,
                    help="externally synthesized Clifford+T QASM file")
    pa.add_argument("--out", default="ftcb_out")
    pa.set_defaults(func=cmd_analyze)

    pb = sub.add_parser("bench", help="batch-analyze a directory of QASM files")
    pb.add_argument("dir")
    pb.add_argument("--pipelines", default="sk-1,sk-2")
    _add_analysis_flags(pb)
    pb.add_argument("--out", default="ftcb_bench")
    pb.set_defaults(func=cmd_bench)

    pg = sub.add_parser("generate", help="generate a benchmark circuit family")
    pg.add_argument("family", choices=FAMILIES)
    pg.add_argument("--qubits", type=int, default=3)
    pg.add_argument("--bits", type=int, default=2)
    pg.add_argument("--sites", type=int, default=4)
    pg.add_argument("--rows", type=int, default=2)
    pg.add_argument("--cols", type=int, default=2)
    pg.add_argument("--steps", type=int, default=20)
    pg.add_argument("--dt", type=float, default=0.05)
    pg.add_argument("--j", type=float, default=1.0)
    pg.add_argument("--h", type=float, default=0.5, dest="field")
    pg.add_argument("--jx", type=float, default=1.0)
    pg.add_argument("--jy", type=float, default=1.0)
    pg.add_argument("--jz", type=float, default=1.0)
    pg.add_argument("--t", type=float, default=1.0, dest="hopping")
    pg.add_argument("--u", type=float, default=0.0)
    pg.add_argument("--open", action="store_true",
                    help="open boundary conditions (default periodic)")
    pg.add_argument("--out", default=None)
    pg.set_defaults(func=cmd_generate)

    pc = sub.add_parser("convert", help="convert between circuit formats")
    pc.add_argument("file")
    pc.add_argument("--to", choices=("pbc-text", "qasm"), required=True)
    pc.add_argument("--out", default=None)
    pc.set_defaults(func=cmd_convert)

    pv = sub.add_parser("verify")  # hidden-ish: oracle equivalence debugging
    pv.add_argument("file")
    pv.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
