from __future__ import annotations

from pathlib import Path

import pytest

from tfsparse.fmt import load_grammar

ROOT = Path(__file__).resolve().parent.parent
GRAMMARS = ROOT / "grammars"
GOLDEN = Path(__file__).resolve().parent / "golden"
FIXTURES = Path(__file__).resolve().parent / "fixtures"


@pytest.fixture(scope="session")
def english():
    return load_grammar(GRAMMARS / "english.tfs")


@pytest.fixture(scope="session")
def divergent():
    return load_grammar(GRAMMARS / "divergent.tfs")
