"""Vendored benchmark circuits shipped with the package."""
from importlib import resources
from pathlib import Path


def corpus_path(name: str) -> Path:
    """Filesystem path of a vendored corpus file (e.g. "adder_64q.qasm")."""
    return Path(str(resources.files("ftcb").joinpath("corpus", name)))


def adder_64q() -> str:
    return resources.files("ftcb").joinpath("corpus", "adder_64q.qasm").read_text()
