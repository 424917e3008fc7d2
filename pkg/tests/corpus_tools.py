"""Render corpus documents through the CLI entry point, for golden comparison."""

import contextlib
import os
import pathlib
import tempfile

from cwcycles.cli import main

TESTS = pathlib.Path(__file__).resolve().parent
CORPUS = TESTS / "corpus"
GOLDEN = TESTS / "golden"


def corpus_names():
    return sorted(p.stem for p in CORPUS.glob("*.json"))


@contextlib.contextmanager
def _cwd(path):
    old = os.getcwd()
    os.chdir(path)
    try:
        yield
    finally:
        os.chdir(old)


def render(name):
    """(exit code, report bytes) for one corpus document, paths relative to tests/."""
    with tempfile.TemporaryDirectory() as tmp:
        out = pathlib.Path(tmp) / "report.json"
        with _cwd(TESTS):
            code = main(["run", "--input", f"corpus/{name}.json", "--omit-timing", "--output", str(out)])
        return code, out.read_bytes()


def golden_path(name):
    return GOLDEN / f"{name}.json"


def update_golden():
    for name in corpus_names():
        golden_path(name).write_bytes(render(name)[1])
