import json
import random
import sys
from pathlib import Path

import pytest

from dualcx import builders
from dualcx.io import parse_document

from oracles import cell_total, random_simplices

CORPUS = Path(__file__).resolve().parents[1] / "corpus"


def corpus_files(valid_only=True):
    out = sorted(CORPUS.glob("*.json"))
    if valid_only:
        out = [p for p in out if p.name != "dangling_facet.json"]
    return out


def corpus_doc(name):
    return parse_document(json.loads((CORPUS / name).read_text()))


def random_complex(seed, max_cells=30, max_dim=3):
    """Seeded random simplicial complex with at most ``max_cells`` cells.

    Returns the Delta-complex and the generating simplices (isolated
    vertices included) for the oracles.
    """
    rng = random.Random(seed)
    while True:
        n, sims = random_simplices(rng, max_dim=max_dim)
        sims = sims + [(v,) for v in range(n)]
        if cell_total(n, sims) <= max_cells:
            return builders.from_simplices([str(i) for i in range(n)], sims), sims


@pytest.fixture
def corpus():
    return CORPUS


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.RESULTS:
        terminalreporter.write_line(line)
