# File: tests/conftest.py

import os

import pytest

from src.confgraph.engine import build_graph
from src.golay.engine import build_golay
from src.laminated.sections import section
from src.leech.engine import minimal_vectors

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")
DAT_FILE = os.path.join(DATA_DIR, "H24S1.DAT")


@pytest.fixture(scope="session")
def code():
    return build_golay()


@pytest.fixture(scope="session")
def M():
    return minimal_vectors()


@pytest.fixture(scope="session")
def M_n():
    """section(n) for any n; M_n objects are cached."""
    return section


@pytest.fixture(scope="session")
def graph_of():
    cache = {}

    def build(n, mode="explicit"):
        if (n, mode) not in cache:
            cache[n, mode] = build_graph(section(n), mode=mode)
        return cache[n, mode]

    return build


@pytest.fixture(scope="session")
def dat_bytes():
    if not os.path.exists(DAT_FILE):
        pytest.skip("H24S1.DAT not available")
    with open(DAT_FILE, "rb") as f:
        return f.read()
