"""Shared fixtures. Saturation and graph construction for the bundled
corpus run once per test session; everything downstream reuses them."""

from __future__ import annotations

from pathlib import Path

import pytest

from geotutor.corpus import load_corpus
from geotutor.dsl import parse_rules
from geotutor.engine import saturate
from geotutor.graph import build_graph

PACKS_DIR = Path(__file__).resolve().parent.parent / "packs"
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


@pytest.fixture(scope="session")
def packs_dir() -> Path:
    return PACKS_DIR


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return GOLDEN_DIR


@pytest.fixture(scope="session")
def corpus():
    return load_corpus(str(PACKS_DIR))


@pytest.fixture(scope="session")
def bisector_base():
    """The bisector pack parsed on its own, for tier slicing."""
    return parse_rules((PACKS_DIR / "bisector_isle.qr").read_text())


@pytest.fixture(scope="session")
def derived(corpus):
    """Map of problem id to (record, graph) under the full merged rulebase."""
    out = {}
    for pid, problem in corpus.problems.items():
        record = saturate(problem, corpus.base)
        out[pid] = (record, build_graph(record, problem.conclusion, corpus.base))
    return out
