import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from horograph.connection import (
    ConnectionFunction,
    discretize,
    dump,
    load,
    preset,
    resolve,
    uniform_square_functions,
)


def test_preset_U_examples():
    U = preset("U")
    assert U(0.1) == 1
    assert U(5) == 0.01
    assert U(11) == 0


@pytest.mark.parametrize("name,d,p", [
    ("I", 0.25, 1.0), ("C", 2, 0.002), ("S", 0.2, 0.1),
    ("U", 0.15, 1.0), ("U", 0.3, 0.05), ("U", 1.0, 0.03), ("U", 3.0, 0.02), ("U", 10.0, 0.01),
    ("C", 0.5, 0.003), ("C", 7, 0.001), ("S", 2, 0.01), ("S", 4, 0.005), ("I", 0.31, 0.0),
])
def test_preset_values(name, d, p):
    assert preset(name)(d) == p


def test_preset_bands_exact():
    for name in "USC":
        assert preset(name).radii == (0.15, 0.3, 1.0, 3.0, 10.0)
    assert preset("U").probs == (1.0, 0.05, 0.03, 0.02, 0.01)
    assert preset("S").probs == (1.0, 0.1, 0.05, 0.01, 0.005)
    assert preset("C").probs == (1.0, 0.05, 0.003, 0.002, 0.001)
    assert preset("I").radii == (0.3,) and preset("I").probs == (1.0,)


def test_unknown_preset():
    with pytest.raises(ValueError):
        preset("X")


def test_eval_zero_and_negative():
    cf = ConnectionFunction((1, 2), (0.4, 0.2))
    assert cf(0) == 0.4
    assert cf(cf.r_max + 1) == 0
    with pytest.raises(ValueError):
        cf(-0.1)


@pytest.mark.parametrize("radii,probs", [((), ()), ((1, 1), (0.1, 0.2)), ((0, 1), (0.1, 0.2)),
                                         ((1,), (1.5,)), ((1, 2), (0.1,))])
def test_invalid_functions(radii, probs):
    with pytest.raises(ValueError):
        ConnectionFunction(radii, probs)


@given(st.floats(0, 50))
def test_eval_in_unit_interval(d):
    for name in "USCI":
        assert 0 <= preset(name)(d) <= 1


def test_discretize_constants():
    cf = discretize(lambda r: 0.5, 0.3, 3.0)
    assert len(cf) == 10
    assert max(abs(p - 0.5) for p in cf.probs) <= 1e-12
    one = discretize(lambda r: 1.0, 8 * math.sqrt(2) / 100, 8 * math.sqrt(2))
    assert len(one) == 100 and all(p == 1.0 for p in one.probs)
    with pytest.raises(ValueError):
        discretize(lambda r: 1.0, 0, 1)


def test_discretize_exponential_first_band():
    h = 8 * math.sqrt(2) / 100
    cf = discretize(lambda r: math.exp(-r), h, 8 * math.sqrt(2))
    exact = (1 - math.exp(-h)) / h
    # composite midpoint bound on the mean: h^2 / (24 * 64^2) * max|f''|
    bound = h * h / (24 * 64**2)
    assert abs(cf.probs[0] - exact) <= bound
    k = 37
    exact_k = (math.exp(-k * h) - math.exp(-(k + 1) * h)) / h
    assert abs(cf.probs[k] - exact_k) <= bound * math.exp(-k * h)


def test_uniform_square_functions():
    fns = uniform_square_functions()
    assert set(fns) == {"phi1", "phi2", "phi3", "phi4", "phi5"}
    diag = 8 * math.sqrt(2)
    for cf in fns.values():
        assert len(cf) == 100
        assert cf.r_max == pytest.approx(diag)
    # affine: value near 1 at the origin, decreasing
    assert fns["phi3"](0) == pytest.approx(1 - (diag / 200) / diag, abs=1e-12)
    assert np.all(np.diff(fns["phi3"].probs) < 0)
    assert np.all(np.diff(fns["phi4"].probs) < 0)
    # normal density peaks in the band containing sqrt(32)
    peak = int(np.argmax(fns["phi5"].probs))
    assert fns["phi5"].band(math.sqrt(32)) == peak
    assert fns["phi1"].probs == (0.5,) * 100


def test_phi3_intercept():
    f = lambda r: 1.0 - r / (8 * math.sqrt(2))
    assert f(0) == 1


def test_band_file_roundtrip(tmp_path):
    p = tmp_path / "phi.yaml"
    dump(preset("C"), p)
    back = load(p)
    assert back.radii == preset("C").radii and back.probs == preset("C").probs
    assert resolve(str(p)).probs == preset("C").probs
    assert resolve("u") == preset("U")
    assert len(resolve("uniform:phi4")) == 100
