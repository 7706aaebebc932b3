"""Layered (horospherical) random graphs over a point set."""

import csv
import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from . import _backend
from .connection import ConnectionFunction
from .pointset import PointSet


class Graph:
    """Immutable undirected simple graph stored as sorted CSR adjacency."""

    def __init__(self, n, edges=()):
        n = int(n)
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if len(e):
            if e.min() < 0 or e.max() >= n:
                raise ValueError("edge endpoint out of range")
            if np.any(e[:, 0] == e[:, 1]):
                raise ValueError("self-loops are not allowed")
            e = np.sort(e, axis=1)
            key = e[:, 0] * n + e[:, 1]
            if np.any(key[1:] <= key[:-1]):
                order = np.argsort(key, kind="stable")
                e, key = e[order], key[order]
                if np.any(key[1:] == key[:-1]):
                    raise ValueError("duplicate edges are not allowed")
        e = np.ascontiguousarray(e)
        e.setflags(write=False)
        self.n = n
        self._edges = e
        src = np.concatenate([e[:, 0], e[:, 1]])
        dst = np.concatenate([e[:, 1], e[:, 0]])
        order = np.argsort(src * n + dst)
        deg = np.bincount(src, minlength=n).astype(np.int64)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(deg, out=indptr[1:])
        indices = dst[order].astype(np.int32)
        for a in (deg, indptr, indices):
            a.setflags(write=False)
        self.degrees = deg
        self.indptr = indptr
        self.indices = indices

    @classmethod
    def from_edge_list(cls, n, pairs):
        return cls(n, list(pairs))

    @property
    def edges(self):
        """``(m, 2)`` array of edges ``(u, v)`` with ``u < v``, sorted."""
        return self._edges

    @property
    def edge_count(self):
        return len(self._edges)

    def edge_set(self):
        return {(int(u), int(v)) for u, v in self._edges}

    def neighbors(self, v):
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def has_edge(self, u, v):
        nb = self.neighbors(u)
        k = np.searchsorted(nb, v)
        return k < len(nb) and nb[k] == v

    def degree(self, v):
        if not 0 <= v < self.n:
            raise IndexError(f"vertex {v} out of range")
        return int(self.degrees[v])

    def volume(self, subset=None):
        if subset is None:
            return int(self.degrees.sum())
        return int(self.degrees[np.asarray(list(subset), dtype=np.int64)].sum())

    def adjacency_dense(self):
        A = np.zeros((self.n, self.n))
        if len(self._edges):
            A[self._edges[:, 0], self._edges[:, 1]] = 1.0
            A[self._edges[:, 1], self._edges[:, 0]] = 1.0
        return A

    def with_edge(self, u, v):
        return Graph(self.n, np.vstack([self._edges, [[u, v]]]))

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and np.array_equal(self._edges, other._edges)

    __hash__ = None

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.edge_count})"


def degree(g: Graph, v) -> int:
    return g.degree(v)


def volume(g: Graph) -> int:
    return g.volume()


def components(g: Graph):
    """Connected-component label per vertex (labels in order of first vertex)."""
    label = np.full(g.n, -1, dtype=np.int64)
    current = 0
    for s in range(g.n):
        if label[s] >= 0:
            continue
        label[s] = current
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for y in g.neighbors(x):
                if label[y] < 0:
                    label[y] = current
                    queue.append(y)
        current += 1
    return label


def is_connected(g: Graph) -> bool:
    if g.n <= 1:
        return True
    if g.edge_count < g.n - 1 or np.any(g.degrees == 0):
        return False
    return bool(components(g).max() == 0)


# -- spatial bucket grid -------------------------------------------------

@dataclass(frozen=True)
class CellGrid:
    order: np.ndarray       # vertex ids sorted by cell
    cell_start: np.ndarray  # CSR offsets into ``order``
    cell_of: np.ndarray     # cell id per vertex
    ncx: int
    ncy: int


def bucket_grid(points: PointSet, cell) -> CellGrid:
    """Square buckets of side ``cell``; a single bucket when ``cell`` spans the data."""
    xs, ys = points.xs, points.ys
    if len(points) == 0:
        e = np.zeros(0, dtype=np.int64)
        return CellGrid(e, np.zeros(2, dtype=np.int64), e, 1, 1)
    x0, y0 = xs.min(), ys.min()
    span = math.hypot(xs.max() - x0, ys.max() - y0)
    if cell >= span:
        ncx = ncy = 1
        cell_of = np.zeros(len(points), dtype=np.int64)
    else:
        ncx = int((xs.max() - x0) // cell) + 1
        ncy = int((ys.max() - y0) // cell) + 1
        cx = np.minimum(((xs - x0) // cell).astype(np.int64), ncx - 1)
        cy = np.minimum(((ys - y0) // cell).astype(np.int64), ncy - 1)
        cell_of = cy * ncx + cx
    order = np.argsort(cell_of, kind="stable").astype(np.int64)
    counts = np.bincount(cell_of, minlength=ncx * ncy)
    cell_start = np.zeros(ncx * ncy + 1, dtype=np.int64)
    np.cumsum(counts, out=cell_start[1:])
    return CellGrid(order, cell_start, cell_of, ncx, ncy)


def _sorted_pairs(u, v):
    idx = np.lexsort((v, u))
    return u[idx], v[idx], idx


def annulus_pairs(points: PointSet, r_lo, r_hi, backend=None):
    """All pairs ``(i, j)``, ``i < j``, with ``r_lo < d(i, j) <= r_hi``, sorted."""
    if not 0 <= r_lo < r_hi:
        raise ValueError("need 0 <= r_lo < r_hi")
    k = _backend.get(backend) if backend else _backend.kernels
    grid = bucket_grid(points, r_hi)
    u, v = k.annulus_pairs(
        np.ascontiguousarray(points.xs), np.ascontiguousarray(points.ys),
        grid.order, grid.cell_start, grid.cell_of, grid.ncx, grid.ncy,
        float(r_lo), float(r_hi),
    )
    u, v, _ = _sorted_pairs(u, v)
    return np.column_stack([u, v])


# -- layered graphs -----------------------------------------------------

class LayeredGraph:
    """Nested layers E_1 ⊆ E_2 ⊆ ... of one random draw.

    Each edge carries the 1-based band that added it; layer ``k`` is every
    edge with band ``<= k``.
    """

    def __init__(self, points: PointSet, cf: ConnectionFunction, edges, bands, seed):
        self.points = points
        self.cf = cf
        self.seed = seed
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        bands = np.asarray(bands, dtype=np.int64)
        edges.setflags(write=False)
        bands.setflags(write=False)
        self.edges = edges
        self.bands = bands
        self._layers = {}

    @property
    def num_layers(self):
        return len(self.cf)

    def layer_edges(self, k):
        return self.edges[self.bands <= k]

    def layer(self, k) -> Graph:
        if not 1 <= k <= self.num_layers:
            raise IndexError(f"layer {k} outside 1..{self.num_layers}")
        if k not in self._layers:
            self._layers[k] = Graph(len(self.points), self.layer_edges(k))
        return self._layers[k]

    def top(self) -> Graph:
        return self.layer(self.num_layers)

    def layer_sizes(self):
        """Cumulative edge count per layer."""
        counts = np.bincount(self.bands, minlength=self.num_layers + 1)[1:]
        return np.cumsum(counts)


def generate(points: PointSet, cf: ConnectionFunction, seed, backend=None) -> LayeredGraph:
    """Draw every band of ``cf`` over ``points``.

    Pair ``{i, j}`` in band ``k`` is kept when the keyed uniform for
    ``(seed, i, j, k)`` falls below ``p_k``, so the result does not depend
    on enumeration order or on the kernel backend.
    """
    if len(points) < 1:
        raise ValueError("need at least one point")
    k = _backend.get(backend) if backend else _backend.kernels
    grid = bucket_grid(points, cf.r_max)
    u, v, b = k.sample_band_edges(
        np.ascontiguousarray(points.xs), np.ascontiguousarray(points.ys),
        grid.order, grid.cell_start, grid.cell_of, grid.ncx, grid.ncy,
        np.asarray(cf.radii, dtype=np.float64), np.asarray(cf.probs, dtype=np.float64),
        int(seed) & ((1 << 64) - 1),
    )
    u, v, idx = _sorted_pairs(u, v)
    return LayeredGraph(points, cf, np.column_stack([u, v]), b[idx], seed)


def check_layers(lg: LayeredGraph):
    """Raise if an edge sits outside its band's annulus or bands are malformed."""
    if len(lg.edges) == 0:
        return
    if lg.bands.min() < 1 or lg.bands.max() > lg.num_layers:
        raise ValueError("band index out of range")
    e = lg.edges
    if np.any(e[:, 0] >= e[:, 1]):
        raise ValueError("edges must be stored as u < v")
    if np.any(np.all(e[1:] == e[:-1], axis=1)):
        raise ValueError("duplicate edge")
    c = lg.points.coords
    dx = c[e[:, 0], 0] - c[e[:, 1], 0]
    dy = c[e[:, 0], 1] - c[e[:, 1], 1]
    d = np.sqrt(dx * dx + dy * dy)
    radii = np.asarray((0.0,) + lg.cf.radii)
    hi = radii[lg.bands]
    lo = radii[lg.bands - 1]
    inner = lg.bands == 1
    if np.any(d > hi) or np.any((d <= lo) & ~inner):
        raise ValueError("edge distance outside its band")


def write_edges(lg_or_graph, path):
    if isinstance(lg_or_graph, LayeredGraph):
        edges, bands = lg_or_graph.edges, lg_or_graph.bands
    else:
        edges = lg_or_graph.edges
        bands = np.ones(len(edges), dtype=np.int64)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["u", "v", "band"])
        for (a, b), k in zip(edges.tolist(), bands.tolist()):
            w.writerow([a, b, k])


def read_edges(path, points: PointSet, cf: ConnectionFunction, seed=None) -> LayeredGraph:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    e = np.array([[int(r["u"]), int(r["v"])] for r in rows], dtype=np.int64).reshape(-1, 2)
    b = np.array([int(r["band"]) for r in rows], dtype=np.int64)
    if len(e) and (e.min() < 0 or e.max() >= len(points)):
        raise ValueError("edge endpoint out of range")
    if np.any(e[:, 0] == e[:, 1]):
        raise ValueError("self-loop in edge list")
    e = np.sort(e, axis=1)
    u, v, idx = _sorted_pairs(e[:, 0], e[:, 1])
    lg = LayeredGraph(points, cf, np.column_stack([u, v]), b[idx], seed)
    check_layers(lg)
    return lg
