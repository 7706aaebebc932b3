import itertools
import math

import numpy as np
import pytest
from conftest import complete, path, random_connected, reference_uniform

from horograph.connection import ConnectionFunction, preset, threshold
from horograph.graphgen import (
    Graph,
    annulus_pairs,
    check_layers,
    degree,
    generate,
    is_connected,
    read_edges,
    volume,
    write_edges,
)
from horograph.pointset import PointSet, sample_uniform
from horograph.rng import TAG_EDGE


def brute_pairs(ps, lo, hi):
    out = []
    c = ps.coords
    for i, j in itertools.combinations(range(len(ps)), 2):
        dx, dy = c[i] - c[j]
        d = math.sqrt(dx * dx + dy * dy)
        if lo < d <= hi:
            out.append((i, j))
    return out


def line3():
    return PointSet([[0, 0], [1, 0], [2, 0]], (2, 1))


def test_graph_rejects_loops_and_duplicates():
    with pytest.raises(ValueError):
        Graph(3, [(0, 0)])
    with pytest.raises(ValueError):
        Graph(3, [(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        Graph(3, [(0, 3)])


def test_adjacency_consistent(rng):
    g = random_connected(rng, 25)
    for v in range(g.n):
        nb = g.neighbors(v)
        assert list(nb) == sorted(nb)
        assert g.degree(v) == len(nb)
        for w in nb:
            assert (min(v, w), max(v, w)) in g.edge_set()


def test_annulus_examples():
    ps = line3()
    assert annulus_pairs(ps, 0.5, 1.5).tolist() == [[0, 1], [1, 2]]
    assert annulus_pairs(ps, 1.5, 2.5).tolist() == [[0, 2]]
    with pytest.raises(ValueError):
        annulus_pairs(ps, 1.0, 1.0)


@pytest.mark.parametrize("lo,hi", [(0, 0.5), (0.3, 1.1), (1.0, 3.0), (2.5, 6.0), (0, 12.0)])
@pytest.mark.parametrize("backend", ["compiled", "pure"])
def test_annulus_matches_brute_force(lo, hi, backend):
    ps = sample_uniform(200, 8, 8, 17)
    got = annulus_pairs(ps, lo, hi, backend=backend)
    assert [tuple(p) for p in got.tolist()] == brute_pairs(ps, lo, hi)


def test_complete_graph_when_p_is_one():
    ps = sample_uniform(30, 8, 8, 2)
    g = generate(ps, threshold(20.0), seed=5).top()
    assert g == complete(30)


def test_zero_probability_band_adds_nothing():
    ps = sample_uniform(80, 8, 8, 3)
    cf = ConnectionFunction((1.0, 2.0, 4.0), (0.5, 0.0, 0.3))
    lg = generate(ps, cf, 9)
    assert lg.layer(2) == lg.layer(1)
    assert not np.any(lg.bands == 2)


def test_keyed_draws_reference():
    ps = PointSet([[0, 0], [0.4, 0.1], [0.9, 0.9], [0.2, 0.7]], (1, 1))
    cf = ConnectionFunction((2.0,), (0.5,))
    seed = 424242
    lg = generate(ps, cf, seed)
    want = {(i, j) for i, j in itertools.combinations(range(4), 2)
            if reference_uniform(seed, TAG_EDGE, i, j, 1) < 0.5}
    assert {tuple(e) for e in lg.edges.tolist()} == want
    for s in range(20):
        lg = generate(ps, cf, s)
        want = {(i, j) for i, j in itertools.combinations(range(4), 2)
                if reference_uniform(s, TAG_EDGE, i, j, 1) < 0.5}
        assert {tuple(e) for e in lg.edges.tolist()} == want


def test_layer_nesting_and_bands():
    ps = sample_uniform(200, 8, 8, 21)
    for seed in range(5):
        lg = generate(ps, preset("U"), seed)
        check_layers(lg)
        prev = set()
        for k in range(1, lg.num_layers + 1):
            cur = lg.layer(k).edge_set()
            assert prev <= cur
            prev = cur
        assert lg.layer(lg.num_layers).edge_count >= lg.layer(1).edge_count


def test_band_annulus_exhaustive():
    ps = sample_uniform(150, 8, 8, 8)
    cf = preset("S")
    lg = generate(ps, cf, 3)
    lo = (0.0,) + cf.radii
    for (i, j), b in zip(lg.edges.tolist(), lg.bands.tolist()):
        dx, dy = ps.coords[i] - ps.coords[j]
        d = math.sqrt(dx * dx + dy * dy)
        assert d <= cf.radii[b - 1]
        assert d > lo[b - 1] or b == 1


def test_layer_index_errors():
    lg = generate(line3(), preset("U"), 0)
    with pytest.raises(IndexError):
        lg.layer(0)
    with pytest.raises(IndexError):
        lg.layer(6)


def test_determinism_and_backend_independence():
    ps = sample_uniform(400, 8, 8, 5)
    a = generate(ps, preset("U"), 77, backend="compiled")
    b = generate(ps, preset("U"), 77, backend="pure")
    c = generate(ps, preset("U"), 77)
    assert np.array_equal(a.edges, b.edges) and np.array_equal(a.bands, b.bands)
    assert np.array_equal(a.edges, c.edges)
    d = generate(ps, preset("U"), 78)
    assert not np.array_equal(a.edges, d.edges)


def test_binomial_edge_counts():
    ps = sample_uniform(600, 8, 8, 13)
    cf = ConnectionFunction((0.5, 2.0, 6.0), (0.3, 0.1, 0.02))
    lg = generate(ps, cf, 31)
    for k, (lo, hi, p) in enumerate(cf.bands(), start=1):
        M = len(annulus_pairs(ps, lo, hi))
        assert M >= 1000
        got = int(np.sum(lg.bands == k))
        sd = math.sqrt(M * p * (1 - p))
        assert abs(got - M * p) <= 5 * sd


def test_coincident_points_connect():
    ps = PointSet([[1, 1], [1, 1], [3, 3]], (4, 4))
    g = generate(ps, ConnectionFunction((0.5,), (1.0,)), 0).top()
    assert g.edge_set() == {(0, 1)}


def test_is_connected():
    assert is_connected(path(3))
    assert not is_connected(Graph(2))
    assert is_connected(Graph(1))


def test_france_I_connected_and_seed_free(france_points, france_I):
    assert is_connected(france_I)
    other = generate(france_points, preset("I"), 999).top()
    assert other == france_I


def test_degree_volume(rng):
    K4 = complete(4)
    assert [degree(K4, v) for v in range(4)] == [3, 3, 3, 3]
    assert volume(K4) == 12
    assert volume(Graph(2, [(0, 1)])) == 2
    with pytest.raises(IndexError):
        degree(K4, 4)
    lg = generate(sample_uniform(100, 8, 8, 1), preset("U"), 4)
    for k in range(1, 6):
        g = lg.layer(k)
        assert volume(g) == 2 * g.edge_count


def test_edge_csv_roundtrip(tmp_path):
    ps = sample_uniform(120, 8, 8, 6)
    lg = generate(ps, preset("C"), 2)
    p = tmp_path / "edges.csv"
    write_edges(lg, p)
    assert p.read_text().splitlines()[0] == "u,v,band"
    back = read_edges(p, ps, preset("C"))
    assert np.array_equal(back.edges, lg.edges) and np.array_equal(back.bands, lg.bands)


def test_edge_csv_validation(tmp_path):
    ps = line3()
    p = tmp_path / "bad.csv"
    p.write_text("u,v,band\n0,0,1\n")
    with pytest.raises(ValueError):
        read_edges(p, ps, ConnectionFunction((1.5,), (1.0,)))
    p.write_text("u,v,band\n0,2,1\n")  # distance 2 lies outside band 1
    with pytest.raises(ValueError):
        read_edges(p, ps, ConnectionFunction((1.5, 3.0), (1.0, 1.0)))
