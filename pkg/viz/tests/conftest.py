"""Shared fixtures: stats bundles produced through the ftcb CLI."""
import shutil
import subprocess
import sys
from pathlib import Path

import pytest


def run_ftcb(*args, cwd=None):
    proc = subprocess.run([sys.executable, "-m", "ftcb.cli", *args],
                          capture_output=True, text=True, cwd=cwd)
    if proc.returncode != 0:
        raise RuntimeError(f"ftcb {' '.join(args)} failed: {proc.stderr}")
    return proc


def adder_corpus_file() -> Path:
    out = subprocess.run(
        [sys.executable, "-c",
         "from ftcb.corpus import corpus_path; print(corpus_path('adder_64q.qasm'))"],
        capture_output=True, text=True, check=True)
    return Path(out.stdout.strip())


@pytest.fixture(scope="session")
def adder_bench_dir(tmp_path_factory) -> Path:
    """Bench tree for the vendored 64-qubit adder: manifest + stats bundle."""
    root = tmp_path_factory.mktemp("adder_bench")
    suite = root / "suite"
    suite.mkdir()
    shutil.copy(adder_corpus_file(), suite / "adder_64q.qasm")
    out = root / "bench"
    run_ftcb("bench", str(suite), "--pipelines", "none", "--out", str(out))
    return out


@pytest.fixture(scope="session")
def small_bench_dir(tmp_path_factory) -> Path:
    """Two tiny circuits across two pipelines, for summary figures."""
    root = tmp_path_factory.mktemp("small_bench")
    suite = root / "suite"
    suite.mkdir()
    (suite / "tiny.qasm").write_text(
        "OPENQASM 2.0;\nqreg q[2];\nt q[0];\nt q[0];\nh q[1];\ncx q[0],q[1];\n")
    run_ftcb("generate", "qft", "--qubits", "4",
             "--out", str(suite / "qft_4q.qasm"))
    out = root / "bench"
    run_ftcb("bench", str(suite), "--pipelines", "sk-1,sk-2", "--out", str(out))
    return out
