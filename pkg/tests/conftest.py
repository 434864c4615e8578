"""
Shared fixtures for the test suite.

Library packages live under scripts/ and import each other as top-level
packages, so scripts/ goes on sys.path the same way the CLI entry script does.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent / 'scripts'))

from graph import Clustering, Graph  # noqa: E402


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: Monte-Carlo suites that sample many graphs')


def clique_edges(vertices):
    vertices = list(vertices)
    return [(u, v) for i, u in enumerate(vertices) for v in vertices[i + 1:]]


@pytest.fixture
def two_cliques():
    """K4 on 0..3 and K4 on 4..7, with the matching ground truth."""
    edges = clique_edges(range(4)) + clique_edges(range(4, 8))
    u, v = zip(*edges)
    return Graph.from_edges(8, u, v), Clustering([0, 0, 0, 0, 1, 1, 1, 1], 2)


@pytest.fixture
def triangle():
    return Graph.from_edges(3, [0, 1, 0], [1, 2, 2])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
