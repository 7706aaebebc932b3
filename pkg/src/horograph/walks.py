"""Simple and replicating random walks, exact walk laws and mixing diagnostics."""

import csv
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse as sp
from scipy.spatial.distance import pdist

from .graphgen import Graph
from .pointset import PointSet
from .rng import TAG_REPLICANT, TAG_START, TAG_WALK, keyed_uniform, keyed_uniform_array
from .spectral import dense_spectrum

EXACT_MAX = 512


@dataclass(frozen=True)
class WalkTrace:
    vertices: np.ndarray
    seed: int
    stream: int = 0

    def __len__(self):
        return len(self.vertices)


@dataclass
class ReplicationRecord:
    """Outcome of one replicating walk.

    ``spawn_events`` holds ``(step, vertex, parent_id)``; the child created
    by the ``k``-th event has id ``k + 1`` (id 0 is the initial replicant).
    """

    start: int
    steps: int
    delay: int
    seed: int
    spawn_events: list = field(default_factory=list)
    visited: frozenset = frozenset()
    visited_counts: np.ndarray = None
    moves: tuple = None  # (step, replicant, vertex) arrays, step-major

    @property
    def num_replicants(self):
        return 1 + len(self.spawn_events)

    def started(self, t=None):
        """Ids of replicants that have taken at least one step by time ``t``."""
        t = self.steps if t is None else t
        step, rid, _ = self.moves
        return np.unique(rid[step <= t])

    @property
    def traces(self):
        """Vertex sequence of every replicant, from its spawn vertex on."""
        step, rid, vert = self.moves
        origin = [self.start] + [v for _, v, _ in self.spawn_events]
        order = np.argsort(rid, kind="stable")
        rid_s, vert_s = rid[order], vert[order]
        bounds = np.searchsorted(rid_s, np.arange(self.num_replicants + 1))
        return {
            r: WalkTrace(np.concatenate([[origin[r]], vert_s[bounds[r]:bounds[r + 1]]]).astype(np.int64),
                         self.seed, r)
            for r in range(self.num_replicants)
        }


def _require_walkable(g: Graph, start):
    if not 0 <= start < g.n:
        raise IndexError(f"start vertex {start} out of range")
    if g.degrees[start] == 0:
        raise ValueError(f"start vertex {start} is isolated")


def simple_walk(g: Graph, start, steps, seed, stream=0) -> WalkTrace:
    """Uniform-neighbour walk; step ``t`` uses the keyed draw ``(seed, stream, t)``."""
    _require_walkable(g, start)
    out = np.empty(steps + 1, dtype=np.int64)
    out[0] = x = start
    u = keyed_uniform_array(seed, TAG_WALK, stream, np.arange(1, steps + 1))
    indptr, indices, deg = g.indptr, g.indices, g.degrees
    for t in range(steps):
        d = deg[x]
        if d == 0:
            raise ValueError(f"walk reached isolated vertex {x}")
        x = int(indices[indptr[x] + int(u[t] * d)])
        out[t + 1] = x
    return WalkTrace(out, seed, stream)


def trace_distance_stats(trace, points: PointSet):
    """Mean and max pairwise distance over the distinct visited vertices."""
    verts = np.unique(np.asarray(getattr(trace, "vertices", trace)))
    if len(verts) == 0:
        raise ValueError("empty trace")
    if len(verts) == 1:
        return {"mean_pairwise": 0.0, "max_pairwise": 0.0}
    d = pdist(points.coords[verts])
    return {"mean_pairwise": float(d.mean()), "max_pairwise": float(d.max())}


def _mean_sd(x):
    x = np.asarray(x, dtype=np.float64)
    sd = float(x.std(ddof=1)) if len(x) > 1 else 0.0
    return float(x.mean()), sd


def walk_start(g: Graph, seed, index):
    return int(keyed_uniform(seed, TAG_START, index) * g.n)


def batch_walk_stats(g: Graph, points: PointSet, num_walks=100, steps=100, seed=0):
    means, maxes = [], []
    for w in range(num_walks):
        tr = simple_walk(g, walk_start(g, seed, w), steps, seed, stream=w)
        st = trace_distance_stats(tr, points)
        means.append(st["mean_pairwise"])
        maxes.append(st["max_pairwise"])
    mom, sdm = _mean_sd(means)
    mox, sdx = _mean_sd(maxes)
    return {
        "mean_of_means": mom,
        "sd_of_means": sdm,
        "mean_of_maxes": mox,
        "sd_of_maxes": sdx,
    }


def replicating_walk(g: Graph, start, steps=100, delay=10, seed=0) -> ReplicationRecord:
    """Branching walk on a global clock.

    Every started replicant moves once per time unit. Entering a vertex
    nobody has visited marks it and schedules a child there whose first
    move happens ``delay`` units later. Concurrent first entries of one
    vertex are credited to the lowest replicant id.
    """
    _require_walkable(g, start)
    indptr, indices, deg = g.indptr, g.indices, g.degrees
    visited = np.zeros(g.n, dtype=bool)
    visited[start] = True
    pos = [start]
    first_move = [1]
    events = []
    counts = np.empty(steps + 1, dtype=np.int64)
    counts[0] = 1
    mv_t, mv_r, mv_v = [], [], []
    pos_arr = np.array(pos, dtype=np.int64)
    first_arr = np.array(first_move, dtype=np.int64)
    for t in range(1, steps + 1):
        movers = np.nonzero(first_arr <= t)[0]
        if len(movers):
            here = pos_arr[movers]
            u = keyed_uniform_array(seed, TAG_REPLICANT, movers, t)
            nxt = indices[indptr[here] + (u * deg[here]).astype(np.int64)].astype(np.int64)
            pos_arr[movers] = nxt
            mv_t.append(np.full(len(movers), t, dtype=np.int64))
            mv_r.append(movers.astype(np.int64))
            mv_v.append(nxt)
            fresh = ~visited[nxt]
            if fresh.any():
                cand_v = nxt[fresh]
                cand_r = movers[fresh]
                _, first = np.unique(cand_v, return_index=True)
                first.sort()  # movers are ascending, so this keeps id order
                new_v = cand_v[first]
                new_parent = cand_r[first]
                visited[new_v] = True
                events.extend((t, int(v), int(p)) for v, p in zip(new_v, new_parent))
                pos_arr = np.concatenate([pos_arr, new_v])
                first_arr = np.concatenate([first_arr, np.full(len(new_v), t + delay, dtype=np.int64)])
        counts[t] = int(visited.sum())
    cat = (lambda xs: np.concatenate(xs) if xs else np.empty(0, dtype=np.int64))
    return ReplicationRecord(
        start=start, steps=steps, delay=delay, seed=seed,
        spawn_events=events,
        visited=frozenset(np.nonzero(visited)[0].tolist()),
        visited_counts=counts,
        moves=(cat(mv_t), cat(mv_r), cat(mv_v)),
    )


def spawn_spread(rec: ReplicationRecord, points: PointSet):
    """Largest distance from the start among all spawn positions (0 if none)."""
    if not rec.spawn_events:
        return 0.0
    v = np.array([e[1] for e in rec.spawn_events])
    d = points.coords[v] - points.coords[rec.start]
    return float(np.sqrt((d * d).sum(axis=1)).max())


# -- exact laws ------------------------------------------------------------

def _transition(g: Graph):
    A = sp.csr_matrix((np.ones(len(g.indices)), g.indices, g.indptr), shape=(g.n, g.n))
    return A


def exact_distribution(g: Graph, start, n):
    """Law of ``X_n`` from ``start``: ``(A D^-1)^n e_start``."""
    if g.n > EXACT_MAX:
        raise ValueError(f"exact distribution limited to graphs with <= {EXACT_MAX} vertices")
    if n > 10_000:
        raise ValueError("n limited to 10^4 steps")
    _require_walkable(g, start)
    A = _transition(g)
    inv_deg = 1.0 / np.maximum(g.degrees, 1)
    p = np.zeros(g.n)
    p[start] = 1.0
    for _ in range(n):
        p = A @ (p * inv_deg)
    return p


def stationary_distribution(g: Graph, exact=False):
    vol = g.volume()
    if vol == 0:
        raise ValueError("graph has no edges")
    if exact:
        return [Fraction(int(d), vol) for d in g.degrees]
    return g.degrees / vol


def transition_apply(g: Graph, p):
    return _transition(g) @ (np.asarray(p, dtype=np.float64) / g.degrees)


def total_variation(p, q):
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())


def is_bipartite(g: Graph) -> bool:
    color = np.full(g.n, -1, dtype=np.int64)
    for s in range(g.n):
        if color[s] >= 0:
            continue
        color[s] = 0
        stack = [s]
        while stack:
            x = stack.pop()
            for y in g.neighbors(x):
                if color[y] < 0:
                    color[y] = 1 - color[x]
                    stack.append(y)
                elif color[y] == color[x]:
                    return False
    return True


@dataclass
class MixingReport:
    n: int
    bipartite: bool
    lambda1: float = float("nan")
    rows: list = field(default_factory=list)  # (vertex, lhs, rhs)

    @property
    def worst_ratio(self):
        r = [lhs / rhs if rhs > 0 else float("inf") for _, lhs, rhs in self.rows if lhs > 0]
        return max(r) if r else 0.0


def mixing_bound_report(g: Graph, n, start=0) -> MixingReport:
    """Compare ``|P(X_n = x) - d_x/vol|`` with ``sqrt(d_x/d_min) |lambda1 - 1|^n``.

    Diagnostic only: bipartite graphs are flagged and get no rows.
    """
    if is_bipartite(g):
        return MixingReport(n, True)
    lam = float(dense_spectrum(g)[1])
    p = exact_distribution(g, start, n)
    pi = stationary_distribution(g)
    dmin = g.degrees.min()
    rhs = np.sqrt(g.degrees / dmin) * abs(lam - 1.0) ** n
    rows = [(x, float(abs(p[x] - pi[x])), float(rhs[x])) for x in range(g.n)]
    return MixingReport(n, False, lam, rows)


# -- CSV -------------------------------------------------------------------

def write_trace(trace: WalkTrace, points: PointSet, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["step", "vertex", "x", "y"])
        for t, v in enumerate(trace.vertices.tolist()):
            x, y = points.coords[v]
            w.writerow([t, v, repr(float(x)), repr(float(y))])


def write_events(rec: ReplicationRecord, points: PointSet, path):
    """Spawn log; the initial replicant is written as step 0 with parent -1."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["step", "vertex", "parent_id", "x", "y"])
        rows = [(0, rec.start, -1)] + list(rec.spawn_events)
        for t, v, parent in rows:
            x, y = points.coords[v]
            w.writerow([t, v, parent, repr(float(x)), repr(float(y))])
