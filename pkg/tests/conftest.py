from __future__ import annotations

import os

import pytest

from ekscan import coeffs, offsets

# one shared cache dir per test session keeps table builds one-time
os.environ.setdefault("EKSCAN_CACHE_DIR", os.path.expanduser("~/.cache/ekscan-tests"))


@pytest.fixture(scope="session")
def table128():
    return coeffs.get_table(128)


@pytest.fixture(scope="session")
def table_wide():
    """128-bit table with indices up to 516 for the k<=500 inequality checks."""
    return coeffs.get_table(128, max_index=516)


@pytest.fixture(scope="session")
def greedy2089():
    return offsets.default_offsets()
