import itertools

import numpy as np
import pytest

from horograph.connection import preset
from horograph.graphgen import Graph, generate
from horograph.pointset import france_model, load_cities


def complete(n):
    return Graph(n, list(itertools.combinations(range(n), 2)))


def cycle(n):
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def star(leaves):
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def random_connected(rng, n, density=None):
    """Random spanning tree plus independent extra edges."""
    perm = rng.permutation(n)
    edges = {tuple(sorted((int(perm[i]), int(perm[rng.integers(0, i)])))) for i in range(1, n)}
    p = rng.uniform(0.05, 0.8) if density is None else density
    for i, j in itertools.combinations(range(n), 2):
        if rng.random() < p:
            edges.add((i, j))
    return Graph(n, sorted(edges))


def random_graph(rng, n, p):
    return Graph(n, [(i, j) for i, j in itertools.combinations(range(n), 2) if rng.random() < p])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def france_points():
    cities, _ = load_cities()
    return france_model(cities, seed=2024)


@pytest.fixture(scope="session")
def france_I(france_points):
    return generate(france_points, preset("I"), 1).top()


def reference_uniform(seed, *keys):
    """Straight-line splitmix fold, kept apart from horograph.rng."""
    s = seed % 2**64
    for k in keys:
        z = ((s ^ k) + 0x9E3779B97F4A7C15) % 2**64
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) % 2**64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) % 2**64
        s = z ^ (z >> 31)
    return (s >> 11) / 2**53


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = list(getattr(mod, "RESULTS", {}).values())
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
