"""Piecewise-constant connection functions (distance -> edge probability)."""

import bisect
import math
from dataclasses import dataclass

import numpy as np
import yaml

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class ConnectionFunction:
    """Band ``k`` covers distances ``(radii[k-1], radii[k]]`` with ``radii[-1] = 0``.

    Distance 0 falls in the first band. Beyond ``radii[-1]`` the probability is 0.
    """

    radii: tuple
    probs: tuple
    name: str = ""

    def __post_init__(self):
        radii = tuple(float(r) for r in self.radii)
        probs = tuple(float(p) for p in self.probs)
        if len(radii) == 0 or len(radii) != len(probs):
            raise ValueError("radii and probs must be nonempty and of equal length")
        if radii[0] <= 0 or any(b <= a for a, b in zip(radii, radii[1:])):
            raise ValueError("radii must be positive and strictly increasing")
        if any(not 0.0 <= p <= 1.0 for p in probs):
            raise ValueError("probabilities must lie in [0, 1]")
        object.__setattr__(self, "radii", radii)
        object.__setattr__(self, "probs", probs)

    def __len__(self):
        return len(self.radii)

    @property
    def r_max(self):
        return self.radii[-1]

    def band(self, d):
        """0-based band index of distance ``d``, or ``len(self)`` past the support."""
        if d < 0:
            raise ValueError("distance must be nonnegative")
        return bisect.bisect_left(self.radii, d)

    def __call__(self, d):
        k = self.band(d)
        return self.probs[k] if k < len(self.probs) else 0.0

    def bands(self):
        """``(r_lo, r_hi, p)`` triples, inner band first."""
        lo = (0.0,) + self.radii[:-1]
        return list(zip(lo, self.radii, self.probs))

    def to_pairs(self):
        return [[r, p] for r, p in zip(self.radii, self.probs)]


def evaluate(cf: ConnectionFunction, d) -> float:
    return cf(d)


PRESETS = {
    # unconfined
    "U": ((0.15, 1.0), (0.3, 0.05), (1.0, 0.03), (3.0, 0.02), (10.0, 0.01)),
    # all travel open at reduced capacity
    "S": ((0.15, 1.0), (0.3, 0.1), (1.0, 0.05), (3.0, 0.01), (10.0, 0.005)),
    # hard lockdown, long-distance travel mostly cancelled
    "C": ((0.15, 1.0), (0.3, 0.05), (1.0, 0.003), (3.0, 0.002), (10.0, 0.001)),
    # local movement only
    "I": ((0.3, 1.0),),
}


def preset(name) -> ConnectionFunction:
    try:
        bands = PRESETS[name.upper()]
    except KeyError:
        raise ValueError(f"unknown connection preset {name!r}; choose from {sorted(PRESETS)}") from None
    radii, probs = zip(*bands)
    return ConnectionFunction(radii, probs, name.upper())


def discretize(f, h, r_max, name="", subintervals=64) -> ConnectionFunction:
    """Step function whose value on ``[kh, (k+1)h)`` is the mean of ``f`` there.

    The mean is taken with a composite midpoint rule. Bands are reported with
    right ends ``(k+1)h`` up to ``r_max``.
    """
    if h <= 0:
        raise ValueError("step size must be positive")
    if r_max <= 0:
        raise ValueError("r_max must be positive")
    m = int(math.ceil(r_max / h - 1e-9))
    k = np.arange(m)[:, None]
    offs = (np.arange(subintervals) + 0.5) / subintervals
    t = (k + offs[None, :]) * h
    vals = np.vectorize(f, otypes=[float])(t)
    means = vals.mean(axis=1)
    probs = np.clip(means, 0.0, 1.0)
    radii = (np.arange(m) + 1) * h
    return ConnectionFunction(tuple(radii), tuple(probs), name)


def _normal_density(r):
    return math.exp(-((r - math.sqrt(32.0)) ** 2) / 16.0) / math.sqrt(16.0 * math.pi)


UNIFORM_FUNCTIONS = {
    "phi1": lambda r: 0.5,
    "phi2": lambda r: 1.0,
    "phi3": lambda r: 1.0 - r / (8.0 * SQRT2),
    "phi4": lambda r: math.exp(-r),
    "phi5": _normal_density,
}


def uniform_square_functions(side=8.0, levels=100) -> dict:
    """The five test functions on the ``side`` square, ``levels`` bands up to the diagonal."""
    diag = side * SQRT2
    h = diag / levels
    return {
        name: discretize(f, h, diag, name=name)
        for name, f in UNIFORM_FUNCTIONS.items()
    }


def threshold(r) -> ConnectionFunction:
    """Single band with probability 1 up to ``r``."""
    return ConnectionFunction((r,), (1.0,), f"r={r:g}")


def load(path) -> ConnectionFunction:
    """Read ``bands: [[r, p], ...]`` (or a bare list of pairs) from a YAML file."""
    with open(path) as fh:
        doc = yaml.safe_load(fh)
    if isinstance(doc, dict):
        pairs, name = doc["bands"], doc.get("name", "")
    else:
        pairs, name = doc, ""
    radii, probs = zip(*pairs)
    return ConnectionFunction(radii, probs, name)


def dump(cf: ConnectionFunction, path):
    with open(path, "w") as fh:
        yaml.safe_dump({"name": cf.name, "bands": cf.to_pairs()}, fh, sort_keys=False)


def resolve(spec) -> ConnectionFunction:
    """Preset name, ``uniform:phiK``, or a path to a band file."""
    if isinstance(spec, ConnectionFunction):
        return spec
    if isinstance(spec, str) and spec.upper() in PRESETS:
        return preset(spec)
    if isinstance(spec, str) and spec.startswith("uniform:"):
        return uniform_square_functions()[spec.split(":", 1)[1]]
    if isinstance(spec, (list, tuple)):
        radii, probs = zip(*spec)
        return ConnectionFunction(radii, probs)
    return load(spec)
