from pathlib import Path

import pytest

from sleec.engine import Checker
from sleec.sema import analyze

CORPUS_DIR = Path(__file__).resolve().parents[1] / "corpus"


@pytest.fixture(scope="session")
def corpus_source() -> str:
    return (CORPUS_DIR / "assistive.sleec").read_text()


@pytest.fixture(scope="session")
def verbatim_source() -> str:
    return (CORPUS_DIR / "assistive_verbatim.sleec").read_text()


@pytest.fixture(scope="session")
def corpus(corpus_source):
    analysis = analyze(corpus_source)
    assert analysis.ok, [d.message for d in analysis.diagnostics]
    return analysis


@pytest.fixture(scope="session")
def checker(corpus) -> Checker:
    return Checker(corpus.document, corpus.table)
