"""Normalized-Laplacian spectra, conductance and the Cheeger inequality."""

import json
import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from . import _backend
from .graphgen import Graph, is_connected
from .rng import TAG_LANCZOS, derive_seed

DENSE_MAX = 512
BRUTE_MAX = 22
_START_SEED = 0x5EED


class DisconnectedGraphError(ValueError):
    pass


class ConvergenceError(RuntimeError):
    """Iteration cap reached; ``report`` holds the best estimate."""

    def __init__(self, message, report):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class SpectralReport:
    lambda1: float
    residual: float
    iterations: int
    method: str

    def to_json(self):
        return json.dumps(asdict(self), sort_keys=True)


@dataclass(frozen=True)
class CutWitness:
    subset: frozenset
    boundary_edges: int
    denominator: int
    conductance_value: float


@dataclass(frozen=True)
class CheegerReport:
    lambda1: float
    phi: float
    lower_ok: bool
    upper_ok: bool

    @property
    def ok(self):
        return self.lower_ok and self.upper_ok


def _require_no_isolated(g: Graph):
    if g.n == 0 or np.any(g.degrees == 0):
        raise DisconnectedGraphError("normalized Laplacian needs every degree >= 1")


def normalized_laplacian_apply(g: Graph, v, backend=None):
    """``(I - D^-1/2 A D^-1/2) v`` from the adjacency lists."""
    _require_no_isolated(g)
    v = np.ascontiguousarray(v, dtype=np.float64)
    if v.shape != (g.n,):
        raise ValueError(f"vector must have length {g.n}")
    k = _backend.get(backend) if backend else _backend.kernels
    s = 1.0 / np.sqrt(g.degrees.astype(np.float64))
    return k.normalized_laplacian_apply(g.indptr, g.indices, s, v)


def normalized_laplacian_dense(g: Graph):
    _require_no_isolated(g)
    s = 1.0 / np.sqrt(g.degrees.astype(np.float64))
    return np.eye(g.n) - s[:, None] * g.adjacency_dense() * s[None, :]


def dense_spectrum(g: Graph):
    """All eigenvalues of the normalized Laplacian, ascending."""
    if g.n > DENSE_MAX:
        raise ValueError(f"dense spectrum limited to n <= {DENSE_MAX}")
    return np.linalg.eigvalsh(normalized_laplacian_dense(g))


def combinatorial_laplacian_lambda1(g: Graph):
    """Second-smallest eigenvalue of ``D - A``."""
    if g.n > DENSE_MAX:
        raise ValueError(f"dense spectrum limited to n <= {DENSE_MAX}")
    L = np.diag(g.degrees.astype(np.float64)) - g.adjacency_dense()
    return float(np.linalg.eigvalsh(L)[1])


def kernel_vector(g: Graph):
    """Unit vector along ``D^1/2 1``."""
    w = np.sqrt(g.degrees.astype(np.float64))
    return w / np.linalg.norm(w)


def _orthonormalize(w, Q, k):
    # two passes of classical Gram-Schmidt against Q[:, :k]
    for _ in range(2):
        w -= Q[:, :k] @ (Q[:, :k].T @ w)
    return w


def lambda1(g: Graph, tol=1e-8, max_iter=None, return_vector=False, backend=None,
            check_every=10):
    """Smallest nonzero eigenvalue of the normalized Laplacian.

    Lanczos with full reorthogonalization on the complement of the known
    kernel vector. Converged when ``||Lx - lam x|| <= tol * max(1, lam)``.
    If the Krylov space becomes invariant, a fresh deterministic vector is
    orthogonalized in and the recurrence continues, so degenerate spectra
    (complete graphs, symmetric cycles) are handled.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not is_connected(g):
        raise DisconnectedGraphError("lambda1 requires a connected graph")
    n = g.n
    if n < 2:
        raise ValueError("lambda1 needs at least two vertices")
    if max_iter is None:
        max_iter = 10 * n
    kern = _backend.get(backend) if backend else _backend.kernels
    s = 1.0 / np.sqrt(g.degrees.astype(np.float64))

    def apply(x):
        return kern.normalized_laplacian_apply(g.indptr, g.indices, s, x)

    dim = n - 1  # size of the deflated space
    cap = min(max_iter, dim)
    # column 0 is the kernel direction, kept fixed for reorthogonalization
    Q = np.zeros((n, min(dim, 64) + 1))
    Q[:, 0] = kernel_vector(g)
    alphas, betas = [], []
    restarts = 0
    rng_stream = 0

    def fresh(k):
        nonlocal rng_stream
        while True:
            rng = np.random.default_rng(derive_seed(_START_SEED, TAG_LANCZOS, n, rng_stream))
            rng_stream += 1
            w = _orthonormalize(rng.standard_normal(n), Q, k)
            norm = np.linalg.norm(w)
            if norm > 1e-8:
                return w / norm

    q = fresh(1)
    k = 0  # Lanczos vectors stored in Q[:, 1:k+1]
    best = None
    iters = 0
    while True:
        if k + 2 > Q.shape[1]:
            Q = np.hstack([Q, np.zeros((n, min(Q.shape[1] - 1, dim - Q.shape[1] + 2)))])
        Q[:, k + 1] = q
        k += 1
        w = apply(q)
        iters += 1
        a = float(q @ w)
        w -= a * q
        if betas and betas[-1] > 0:
            w -= betas[-1] * Q[:, k - 1]
        w = _orthonormalize(w, Q, k + 1)
        b = float(np.linalg.norm(w))
        alphas.append(a)
        done_space = k >= dim
        breakdown = b <= 1e-10 * max(1.0, abs(a))
        if breakdown or done_space or k % check_every == 0 or iters >= cap:
            theta, svec = _ritz_min(alphas, betas)
            est = abs(b * svec[-1]) if not breakdown else 0.0
            limit = tol * max(1.0, abs(theta))
            if est <= limit or done_space or iters >= cap:
                x = Q[:, 1:k + 1] @ svec
                x /= np.linalg.norm(x)
                Lx = apply(x)
                # the spectrum lies in [0, 2]; clip rounding
                lam = min(max(float(x @ Lx), 0.0), 2.0)
                res = float(np.linalg.norm(Lx - lam * x))
                best = (lam, res, x)
                if res <= tol * max(1.0, abs(lam)):
                    report = SpectralReport(lam, res, iters, "lanczos-full-reorth")
                    return (report, x) if return_vector else report
                if done_space or iters >= cap:
                    report = SpectralReport(lam, res, iters, "lanczos-full-reorth")
                    raise ConvergenceError(
                        f"lambda1 did not reach residual {tol:g} in {iters} iterations", report)
        if breakdown:
            restarts += 1
            q = fresh(k + 1)
            betas.append(0.0)
        else:
            q = w / b
            betas.append(b)


def _ritz_min(alphas, betas):
    a = np.asarray(alphas)
    b = np.asarray(betas[:len(alphas) - 1])
    if len(a) == 1:
        return float(a[0]), np.ones(1)
    vals, vecs = eigh_tridiagonal(a, b, select="i", select_range=(0, 0))
    return float(vals[0]), vecs[:, 0]


# -- exhaustive combinatorics ----------------------------------------------

def _bitmask_adjacency(g: Graph):
    adj = np.zeros(g.n, dtype=np.uint64)
    for u, v in g.edges.tolist():
        adj[u] |= np.uint64(1 << v)
        adj[v] |= np.uint64(1 << u)
    return adj


def _mask_to_set(mask, n):
    return frozenset(i for i in range(n) if (mask >> i) & 1)


def conductance_bruteforce(g: Graph, backend=None) -> CutWitness:
    """Exact conductance; the witness always contains vertex 0."""
    if g.n > BRUTE_MAX:
        raise ValueError(f"exhaustive conductance limited to n <= {BRUTE_MAX}")
    if g.n < 2 or not is_connected(g):
        raise DisconnectedGraphError("conductance needs a connected graph with n >= 2")
    k = _backend.get(backend) if backend else _backend.kernels
    num, den, mask = k.cut_search(_bitmask_adjacency(g), g.degrees, 0)
    return CutWitness(_mask_to_set(int(mask), g.n), int(num), int(den), num / den)


def expansion_constant_bruteforce(g: Graph, backend=None):
    """``(h, witness)``; ``h`` is ``inf`` with no witness for ``n <= 1``."""
    if g.n <= 1:
        return math.inf, None
    if g.n > BRUTE_MAX:
        raise ValueError(f"exhaustive expansion limited to n <= {BRUTE_MAX}")
    k = _backend.get(backend) if backend else _backend.kernels
    num, den, mask = k.cut_search(_bitmask_adjacency(g), g.degrees, 1)
    return num / den, CutWitness(_mask_to_set(int(mask), g.n), int(num), int(den), num / den)


def cheeger_check(g: Graph, slack=1e-9) -> CheegerReport:
    lam = float(dense_spectrum(g)[1])
    phi = conductance_bruteforce(g).conductance_value
    return CheegerReport(
        lambda1=lam,
        phi=phi,
        lower_ok=lam / 2 <= phi + slack,
        upper_ok=phi <= math.sqrt(2 * max(lam, 0.0)) + slack,
    )


def layer_profile(lg, tol=1e-8, with_conductance=False):
    """``lambda1`` (and optionally conductance) of every layer.

    Disconnected layers report ``lambda1 = 0`` and ``phi = 0``. Decreases
    between consecutive layers are counted, not treated as errors: adding
    edges can lower the normalized-Laplacian gap.
    """
    from .graphgen import is_connected as _conn

    lam, phi = [], []
    for k in range(1, lg.num_layers + 1):
        g = lg.layer(k)
        ok = _conn(g) and g.n > 1
        lam.append(lambda1(g, tol).lambda1 if ok else 0.0)
        if with_conductance:
            phi.append(conductance_bruteforce(g).conductance_value if ok else 0.0)
    out = {"lambda1": lam, "lambda1_decreases": int(np.sum(np.diff(lam) < -tol))}
    if with_conductance:
        out["phi"] = phi
        out["phi_decreases"] = int(np.sum(np.diff(phi) < -1e-12))
    return out
