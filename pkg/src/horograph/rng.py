"""Counter-based random numbers.

Every draw is a pure function of ``(seed, *keys)``: a splitmix64-style
finalizer is folded over the key words. There is no stream state, so a
pair of vertices, a walker at a given step or an iteration index always
sees the same number no matter in which order things are evaluated.
"""

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_TO_UNIT = 2.0 ** -53

# key-domain tags, first key word of every draw
TAG_EDGE = 1
TAG_WALK = 2
TAG_START = 3
TAG_REPLICANT = 4
TAG_ITERATION = 5
TAG_LANCZOS = 6


def mix64(z):
    z &= MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def keyed_bits(seed, *keys):
    """64 random bits determined by ``seed`` and the integer ``keys``."""
    state = seed & MASK64
    for key in keys:
        state = mix64(((state ^ (key & MASK64)) + GOLDEN) & MASK64)
    return state


def keyed_uniform(seed, *keys):
    """Uniform float in [0, 1) determined by ``seed`` and ``keys``."""
    return (keyed_bits(seed, *keys) >> 11) * _TO_UNIT


def derive_seed(seed, *keys):
    """Child seed for an independent sub-experiment (63 bits, numpy friendly)."""
    return keyed_bits(seed, TAG_ITERATION, *keys) >> 1


def _mix64_array(z):
    z = z ^ (z >> np.uint64(30))
    z = z * np.uint64(_M1)
    z = z ^ (z >> np.uint64(27))
    z = z * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def keyed_bits_array(seed, *keys):
    """Vectorized :func:`keyed_bits`; each key may be a scalar or an array."""
    state = np.uint64(seed & MASK64)
    with np.errstate(over="ignore"):
        for key in keys:
            k = np.asarray(key).astype(np.uint64)
            state = _mix64_array((state ^ k) + np.uint64(GOLDEN))
    return np.asarray(state, dtype=np.uint64)


def keyed_uniform_array(seed, *keys):
    bits = keyed_bits_array(seed, *keys)
    return (bits >> np.uint64(11)).astype(np.float64) * _TO_UNIT
