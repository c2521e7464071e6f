"""CLI surface: analyze, bench, generate, convert; exit codes; determinism."""
import json
import os

import pytest

from ftcb.cli import main
from ftcb.corpus import corpus_path
from ftcb.schema import SchemaError, validate_stats

T_ONLY = 'OPENQASM 2.0;\nqreg q[2];\nt q[0];\n'
WITH_RZ = 'OPENQASM 2.0;\nqreg q[1];\nrz(0.1) q[0];\n'


def write(path, text):
    path.write_text(text)
    return str(path)


class TestAnalyze:
    def test_t_only_with_synth_none(self, tmp_path):
        f = write(tmp_path / "tonly.qasm", T_ONLY)
        assert main(["analyze", f, "--synth", "none",
                     "--out", str(tmp_path / "out")]) == 0
        stats = json.loads((tmp_path / "out/tonly/stats.json").read_text())
        assert stats["t_count"] == 1
        assert stats["pbc_t_operators"] == 1
        validate_stats(stats)

    def test_rz_with_synth_none_exits_2(self, tmp_path, capsys):
        f = write(tmp_path / "rz.qasm", WITH_RZ)
        assert main(["analyze", f, "--synth", "none",
                     "--out", str(tmp_path / "out")]) == 2
        assert "Rz" in capsys.readouterr().err

    def test_parse_failure_exits_1(self, tmp_path):
        f = write(tmp_path / "bad.qasm", "OPENQASM 2.0;\nqreg q[1];\nnope q[0];\n")
        assert main(["analyze", f, "--out", str(tmp_path / "out")]) == 1

    def test_sk_pipeline(self, tmp_path):
        f = write(tmp_path / "rz.qasm", WITH_RZ)
        assert main(["analyze", f, "--synth", "sk", "--sk-depth", "1",
                     "--out", str(tmp_path / "out")]) == 0
        stats = json.loads((tmp_path / "out/rz/stats.json").read_text())
        assert stats["pipeline"]["label"] == "sk-1"
        assert stats["clifford_t"]["synthesis"]["fidelity_product"] <= 1.0

    def test_external_mode(self, tmp_path):
        src = write(tmp_path / "orig.qasm", WITH_RZ)
        ext = write(tmp_path / "ext.qasm", 'OPENQASM 2.0;\nqreg q[1];\nt q[0];\n')
        assert main(["analyze", src, "--synth", "external", "--external", ext,
                     "--out", str(tmp_path / "out")]) == 0
        stats = json.loads((tmp_path / "out/orig/stats.json").read_text())
        assert stats["t_count"] == 1

    def test_artifacts_present(self, tmp_path):
        f = write(tmp_path / "tonly.qasm", T_ONLY)
        main(["analyze", f, "--synth", "none", "--out", str(tmp_path / "out")])
        base = tmp_path / "out/tonly"
        for name in ("stats.json", "clifford_t.qasm", "circuit.pbc",
                     "t_density.csv", "pbc_density.csv"):
            assert (base / name).exists()

    def test_adder_corpus_numbers(self, tmp_path):
        assert main(["analyze", str(corpus_path("adder_64q.qasm")),
                     "--synth", "none", "--out", str(tmp_path / "out")]) == 0
        stats = json.loads((tmp_path / "out/adder_64q/stats.json").read_text())
        assert stats["t_count"] == 392
        assert stats["total_gates"] == 988
        assert stats["depth"] == 369
        assert stats["clifford_gates"] == 596
        assert 176 <= stats["pbc_t_operators"] <= 264
        assert stats["weight_reduction_pct"] <= 0

    def test_no_pbc_opt_flag(self, tmp_path):
        f = write(tmp_path / "tt.qasm",
                  'OPENQASM 2.0;\nqreg q[1];\nt q[0];\nt q[0];\n')
        main(["analyze", f, "--synth", "none", "--no-pbc-opt",
              "--out", str(tmp_path / "raw")])
        main(["analyze", f, "--synth", "none", "--out", str(tmp_path / "opt")])
        raw = json.loads((tmp_path / "raw/tt/stats.json").read_text())
        opt = json.loads((tmp_path / "opt/tt/stats.json").read_text())
        assert raw["pbc_t_operators"] == 2 and raw["rotation_reduction_pct"] == 0
        assert opt["pbc_t_operators"] == 0


class TestBench:
    def _suite(self, tmp_path):
        suite = tmp_path / "suite"
        suite.mkdir()
        write(suite / "a.qasm", T_ONLY)
        write(suite / "b.qasm", 'OPENQASM 2.0;\nqreg q[2];\nh q[0];\n'
                                'cx q[0],q[1];\nt q[1];\n')
        return suite

    def test_two_files_two_pipelines(self, tmp_path):
        suite = self._suite(tmp_path)
        out = tmp_path / "bench"
        assert main(["bench", str(suite), "--pipelines", "sk-1,sk-2",
                     "--out", str(out)]) == 0
        manifest = json.loads((out / "manifest.json").read_text())
        assert len(manifest["entries"]) == 4
        assert all(e["status"] == "ok" for e in manifest["entries"])
        summary = (out / "summary.csv").read_text().strip().split("\n")
        assert len(summary) == 5  # header + 4 rows

    def test_malformed_file_isolated(self, tmp_path):
        suite = self._suite(tmp_path)
        write(suite / "zz_bad.qasm", "OPENQASM 9;\n")
        out = tmp_path / "bench"
        assert main(["bench", str(suite), "--pipelines", "none",
                     "--out", str(out)]) == 0
        manifest = json.loads((out / "manifest.json").read_text())
        statuses = {e["input"].split("/")[-1]: e["status"]
                    for e in manifest["entries"]}
        assert statuses["zz_bad.qasm"] == "error"
        assert statuses["a.qasm"] == "ok"

    def test_empty_suite_fails(self, tmp_path):
        empty = tmp_path / "empty"
        empty.mkdir()
        assert main(["bench", str(empty), "--out", str(tmp_path / "o")]) == 1

    def test_gs_pipeline_rejected(self, tmp_path):
        suite = self._suite(tmp_path)
        assert main(["bench", str(suite), "--pipelines", "gs-8",
                     "--out", str(tmp_path / "o")]) == 1

    def test_rerun_byte_identical(self, tmp_path):
        suite = self._suite(tmp_path)
        outs = []
        for name in ("b1", "b2"):
            out = tmp_path / name
            assert main(["bench", str(suite), "--pipelines", "sk-1,none",
                         "--seed", "7", "--out", str(out)]) == 0
            blobs = {}
            for stats in sorted(out.rglob("stats.json")):
                blobs[stats.relative_to(out)] = stats.read_bytes()
            blobs["summary"] = (out / "summary.csv").read_bytes()
            outs.append(blobs)
        assert outs[0] == outs[1]

    def test_worker_count_env_does_not_change_bytes(self, tmp_path, monkeypatch):
        suite = self._suite(tmp_path)
        blobs = []
        for threads, name in (("1", "s1"), ("3", "s3")):
            monkeypatch.setenv("FTCB_THREADS", threads)
            out = tmp_path / name
            main(["bench", str(suite), "--pipelines", "sk-1", "--out", str(out)])
            blobs.append({p.relative_to(out): p.read_bytes()
                          for p in sorted(out.rglob("stats.json"))})
        assert blobs[0] == blobs[1]


class TestGenerate:
    def test_qft(self, tmp_path):
        out = tmp_path / "qft3.qasm"
        assert main(["generate", "qft", "--qubits", "3", "--out", str(out)]) == 0
        from ftcb.qasm import parse_qasm
        circuit = parse_qasm(out.read_text())
        assert len(circuit.ops) == 7

    def test_adder_width_naming(self, tmp_path):
        out = tmp_path / "a.qasm"
        assert main(["generate", "adder", "--bits", "31", "--out", str(out)]) == 0
        from ftcb.qasm import parse_qasm
        assert parse_qasm(out.read_text()).n_qubits == 64

    def test_provenance_comments(self, tmp_path):
        out = tmp_path / "i.qasm"
        main(["generate", "ising_1d", "--sites", "5", "--steps", "2",
              "--out", str(out)])
        head = out.read_text().splitlines()[0]
        assert head.startswith("//") and "ising_1d" in head

    def test_invalid_params(self, tmp_path):
        assert main(["generate", "qft", "--qubits", "0",
                     "--out", str(tmp_path / "x.qasm")]) == 1

    def test_deterministic_bytes(self, tmp_path):
        a, b = tmp_path / "a.qasm", tmp_path / "b.qasm"
        for out in (a, b):
            main(["generate", "heisenberg_1d", "--sites", "6", "--steps", "2",
                  "--out", str(out)])
        assert a.read_bytes() == b.read_bytes()


class TestConvert:
    def test_qasm_to_pbc_text(self, tmp_path):
        f = write(tmp_path / "t.qasm", 'OPENQASM 2.0;\nqreg q[1];\nt q[0];\n')
        out = tmp_path / "t.pbc"
        assert main(["convert", f, "--to", "pbc-text", "--out", str(out)]) == 0
        text = out.read_text()
        assert "rot +Z pi/4" in text

    def test_pbc_to_qasm_refused(self, tmp_path):
        f = write(tmp_path / "t.pbc", "pbc v1\nn 1\nrot +Z pi/4\n")
        assert main(["convert", f, "--to", "qasm"]) == 1

    def test_round_trip_reparses(self, tmp_path):
        f = write(tmp_path / "t.qasm", T_ONLY)
        out = tmp_path / "t.pbc"
        main(["convert", f, "--to", "pbc-text", "--out", str(out)])
        from ftcb.pbc import parse_pbc
        assert len(parse_pbc(out.read_text()).rotations) == 1

    def test_non_ct_rejected(self, tmp_path):
        f = write(tmp_path / "rz.qasm", WITH_RZ)
        assert main(["convert", f, "--to", "pbc-text",
                     "--out", str(tmp_path / "x.pbc")]) == 2


class TestVerifyAndGuards:
    def test_verify_subcommand(self, tmp_path):
        f = write(tmp_path / "c.qasm",
                  'OPENQASM 2.0;\nqreg q[2];\nt q[0];\nh q[1];\ncx q[0],q[1];\n'
                  't q[1];\n')
        assert main(["verify", f]) == 0

    def test_max_ram_guard_refuses(self, tmp_path, capsys):
        f = write(tmp_path / "t.qasm", T_ONLY)
        assert main(["analyze", f, "--synth", "none", "--max-ram", "1e-9",
                     "--out", str(tmp_path / "out")]) == 1
        assert "max-ram" in capsys.readouterr().err

    def test_default_fermi_hubbard_naming(self, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        assert main(["generate", "fermi_hubbard_1d", "--sites", "36",
                     "--steps", "1"]) == 0
        assert (tmp_path / "fermi_hubbard_1d_72q.qasm").exists()


class TestSchema:
    def test_missing_key_detected(self, tmp_path):
        f = write(tmp_path / "tonly.qasm", T_ONLY)
        main(["analyze", f, "--synth", "none", "--out", str(tmp_path / "out")])
        stats = json.loads((tmp_path / "out/tonly/stats.json").read_text())
        del stats["t_count"]
        with pytest.raises(SchemaError, match="t_count"):
            validate_stats(stats)

    def test_appendix_keys_always_present(self, tmp_path):
        f = write(tmp_path / "tonly.qasm", T_ONLY)
        main(["analyze", f, "--synth", "none", "--out", str(tmp_path / "out")])
        stats = json.loads((tmp_path / "out/tonly/stats.json").read_text())
        for key in ("t_count", "qubit_interaction_degree", "pbc_t_operators",
                    "pbc_avg_pauli_weight"):
            assert key in stats
