"""Clustering, sparsity and valency summaries."""

from dataclasses import asdict, dataclass

import numpy as np

from . import _backend
from .graphgen import Graph
from .spectral import lambda1

SUMMARY_FIELDS = ("lambda1", "sparsity", "max_valency", "avg_valency", "avg_clustering")


@dataclass(frozen=True)
class GraphSummary:
    lambda1: float
    sparsity: float
    max_valency: int
    avg_valency: float
    avg_clustering: float
    n: int
    edge_count: int

    def as_dict(self):
        return asdict(self)


def triangle_counts(g: Graph, backend=None):
    k = _backend.get(backend) if backend else _backend.kernels
    return np.asarray(k.triangle_counts(g.indptr, g.indices), dtype=np.int64)


def clustering_coefficients(g: Graph, backend=None):
    """Local clustering of every vertex; 0 where the degree is below 2."""
    tri = triangle_counts(g, backend).astype(np.float64)
    d = g.degrees.astype(np.float64)
    pairs = d * (d - 1) / 2
    out = np.zeros(g.n)
    np.divide(tri, pairs, out=out, where=pairs > 0)
    return out


def local_clustering(g: Graph, i) -> float:
    if not 0 <= i < g.n:
        raise IndexError(f"vertex {i} out of range")
    nb = g.neighbors(i)
    d = len(nb)
    if d < 2:
        return 0.0
    closed = sum(len(np.intersect1d(g.neighbors(j), nb[a + 1:], assume_unique=True))
                 for a, j in enumerate(nb))
    return closed / (d * (d - 1) / 2)


def average_clustering(g: Graph, backend=None) -> float:
    if g.n < 1:
        raise ValueError("empty graph")
    return float(clustering_coefficients(g, backend).mean())


def sparsity(g: Graph) -> float:
    """Edge density ``2|E| / (n(n-1))``."""
    if g.n < 2:
        raise ValueError("sparsity needs n >= 2")
    return 2.0 * g.edge_count / (g.n * (g.n - 1))


def valency_stats(g: Graph):
    return {"max": int(g.degrees.max()) if g.n else 0, "avg": 2.0 * g.edge_count / g.n}


def summarize(g: Graph, spectral_tol=1e-8) -> GraphSummary:
    val = valency_stats(g)
    return GraphSummary(
        lambda1=lambda1(g, spectral_tol).lambda1,
        sparsity=sparsity(g),
        max_valency=val["max"],
        avg_valency=val["avg"],
        avg_clustering=average_clustering(g),
        n=g.n,
        edge_count=g.edge_count,
    )
