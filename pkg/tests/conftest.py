"""
Fixtures communes: corpus et pipeline partiel
"""

from pathlib import Path

import pytest

from core.analysis import ParallelismAnalyzer, VariableAnalyzer
from frontend.diagnostics import has_errors
from frontend.legality import LegalityChecker
from frontend.parser import parse
from frontend.renamer import rename_apart

CORPUS_DIR = Path(__file__).parent / "corpus"


def corpus_paths():
    return sorted(CORPUS_DIR.glob("*.sf"))


def corpus_ids():
    return [path.stem for path in corpus_paths()]


def parse_ok(source: str):
    program, diagnostics = parse(source)
    assert diagnostics == [], [d.message for d in diagnostics]
    return program


def prepare(source: str):
    """Parse + légalité + renommage + analyses"""
    program = parse_ok(source)
    legality = LegalityChecker.check_legal(program)
    assert not has_errors(legality), [d.message for d in legality]
    program = rename_apart(program)
    return program, VariableAnalyzer.proc_summaries(program), ParallelismAnalyzer.par_map(program)


@pytest.fixture
def corpus_source():
    def load(name: str) -> str:
        return (CORPUS_DIR / f"{name}.sf").read_text(encoding="utf-8")
    return load


@pytest.fixture(params=corpus_paths(), ids=corpus_ids())
def corpus_file(request) -> Path:
    return request.param


@pytest.fixture
def write_source(tmp_path):
    def write(text: str, name: str = "prog.sf") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path
    return write
