"""The lockdown-scenario experiments and the uniform-square curves."""

import csv
import hashlib
import json
import logging
import os

import numpy as np

from .. import connection, graphgen, pointset, spectral, stats, walks
from ..rng import TAG_WALK, derive_seed
from .config import ExperimentConfig, write_snapshot

log = logging.getLogger(__name__)

TABLE1_HEADER = ["graph", "iteration", "lambda1", "sparsity", "max_valency", "avg_valency", "avg_clustering"]
TABLE2_STATS = ["mean_of_means", "sd_of_means", "mean_of_maxes", "sd_of_maxes"]


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return int(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return x


def _write_rows(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(x) for x in row])


def _mean_sd(values):
    v = np.asarray(values, dtype=np.float64)
    if len(v) == 0:
        return float("nan"), float("nan")
    return float(v.mean()), (float(v.std(ddof=1)) if len(v) > 1 else 0.0)


def file_digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()


def prepare_out(out, cfg):
    if out is None:
        return None
    os.makedirs(out, exist_ok=True)
    write_snapshot(cfg, os.path.join(out, "config.yaml"))
    return out


# -- point sets and graphs -------------------------------------------------

def load_city_config(cfg: ExperimentConfig):
    return pointset.load_cities(cfg.points.cities)


def build_points(cfg: ExperimentConfig) -> pointset.PointSet:
    p = cfg.points
    bbox = tuple(float(b) for b in p.bbox)
    if p.kind == "france":
        cities, _ = load_city_config(cfg)
        return pointset.france_model(cities, p.grid[0], p.grid[1], p.total_n, bbox, cfg.seed)
    if p.kind == "uniform":
        return pointset.sample_uniform(p.n, bbox[0], bbox[1], cfg.seed)
    if p.kind == "grid":
        return pointset.make_grid(p.grid[0], p.grid[1], *bbox)
    return pointset.read_csv(p.path, bbox=bbox)


def scenario_seed(cfg, name, iteration):
    return derive_seed(cfg.seed, ord(name.upper()), iteration)


def is_deterministic(cf):
    return all(p in (0.0, 1.0) for p in cf.probs)


def scenario_graph(points, cfg, name, iteration=0):
    cf = connection.preset(name)
    return graphgen.generate(points, cf, scenario_seed(cfg, name, iteration)).top()


def start_vertex(points, cfg):
    w = cfg.walks
    if w.start_xy is not None:
        return points.nearest(*w.start_xy)
    if cfg.points.kind == "france":
        cities, extras = load_city_config(cfg)
        name = w.start or extras.get("start")
        if name:
            c = pointset.city_by_name(cities, name)
            return points.nearest(*c.center)
    return 0


def _write_points(points, out):
    path = os.path.join(out, "points.csv")
    pointset.write_csv(points, path)
    return file_digest(path)


# -- Table 1 ---------------------------------------------------------------

def run_table1(cfg: ExperimentConfig, out=None, points=None, scenarios=None):
    """Summaries of the scenario graphs over ``cfg.iterations`` draws.

    Returns ``{name: {"rows": [...], "mean": {...}, "sd": {...}, "count": k}}``.
    """
    out = prepare_out(out, cfg)
    points = points if points is not None else build_points(cfg)
    scenarios = scenarios or cfg.scenarios
    result = {}
    csv_rows = []
    for name in scenarios:
        cf = connection.preset(name)
        iters = 1 if is_deterministic(cf) else cfg.iterations
        rows = []
        for it in range(iters):
            g = graphgen.generate(points, cf, scenario_seed(cfg, name, it)).top()
            try:
                s = stats.summarize(g, cfg.tol)
            except (spectral.ConvergenceError, spectral.DisconnectedGraphError) as exc:
                log.warning("table1 %s iteration %d failed: %s", name, it, exc)
                continue
            rows.append(s)
            csv_rows.append([name, it] + [getattr(s, f) for f in TABLE1_HEADER[2:]])
        agg = {"rows": rows, "count": len(rows), "mean": {}, "sd": {}}
        for f in TABLE1_HEADER[2:]:
            agg["mean"][f], agg["sd"][f] = _mean_sd([getattr(s, f) for s in rows])
        result[name] = agg
    for name in scenarios:
        agg = result[name]
        csv_rows.append([name, "mean"] + [agg["mean"][f] for f in TABLE1_HEADER[2:]])
        csv_rows.append([name, "sd"] + [agg["sd"][f] for f in TABLE1_HEADER[2:]])
    if out:
        _write_points(points, out)
        _write_rows(os.path.join(out, "table1.csv"), TABLE1_HEADER, csv_rows)
    return result


# -- Table 2 ---------------------------------------------------------------

def run_table2(cfg: ExperimentConfig, out=None, points=None, graphs=None):
    """Walk-spread statistics; returns ``{name: {stat: value}}``."""
    out = prepare_out(out, cfg)
    points = points if points is not None else build_points(cfg)
    graphs = graphs or {name: scenario_graph(points, cfg, name) for name in cfg.scenarios}
    result = {}
    for name, g in graphs.items():
        result[name] = walks.batch_walk_stats(
            g, points, cfg.walks.num_walks, cfg.walks.steps,
            derive_seed(cfg.seed, TAG_WALK, ord(name)),
        )
    if out:
        _write_points(points, out)
        names = list(graphs)
        rows = [[stat] + [result[n][stat] for n in names] for stat in TABLE2_STATS]
        _write_rows(os.path.join(out, "table2.csv"), ["statistic"] + names, rows)
    return result


# -- replicating walks -----------------------------------------------------

def run_replicating(cfg: ExperimentConfig, out=None, points=None, graphs=None):
    out = prepare_out(out, cfg)
    points = points if points is not None else build_points(cfg)
    graphs = graphs or {name: scenario_graph(points, cfg, name) for name in cfg.scenarios}
    start = start_vertex(points, cfg)
    result = {}
    for name, g in graphs.items():
        rec = walks.replicating_walk(
            g, start, cfg.walks.steps, cfg.walks.delay,
            derive_seed(cfg.seed, TAG_WALK + 100, ord(name)),
        )
        result[name] = rec
        if out:
            walks.write_events(rec, points, os.path.join(out, f"replication_{name}.csv"))
    if out:
        _write_points(points, out)
        summary = {
            name: {
                "start": start,
                "replicants": rec.num_replicants,
                "visited": len(rec.visited),
                "max_spawn_distance": walks.spawn_spread(rec, points),
            }
            for name, rec in result.items()
        }
        with open(os.path.join(out, "replication_summary.json"), "w") as fh:
            json.dump(summary, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return result


# -- Figure 1 ----------------------------------------------------------------

FIG1_STATS = ("lambda1", "max_valency", "avg_valency", "sparsity")


def layer_statistics(g, tol):
    """Per-layer record; disconnected layers get ``lambda1 = 0`` and a flag."""
    val = stats.valency_stats(g)
    connected = graphgen.is_connected(g)
    lam = spectral.lambda1(g, tol).lambda1 if connected else 0.0
    return {
        "lambda1": lam,
        "max_valency": val["max"],
        "avg_valency": val["avg"],
        "sparsity": stats.sparsity(g),
        "disconnected": not connected,
    }


def run_figure1(cfg: ExperimentConfig, out=None, functions=None, points=None):
    """Mean and sd of each statistic per level for the uniform-square functions.

    Returns ``{function: list of per-level dicts}``.
    """
    out = prepare_out(out, cfg)
    f1 = cfg.figure1
    if points is None:
        points = pointset.sample_uniform(f1.n, f1.side, f1.side, cfg.seed)
    functions = functions or connection.uniform_square_functions(f1.side, f1.levels)
    result = {}
    rows = []
    for fname, cf in functions.items():
        per_level = [[] for _ in range(len(cf))]
        for it in range(cfg.iterations):
            lg = graphgen.generate(points, cf, derive_seed(cfg.seed, 1000 + sum(map(ord, fname)), it))
            for k in range(1, len(cf) + 1):
                per_level[k - 1].append(layer_statistics(lg.layer(k), cfg.tol))
        levels = []
        for k, recs in enumerate(per_level, start=1):
            entry = {"level": k, "r": cf.radii[k - 1], "count": len(recs),
                     "disconnected": sum(r["disconnected"] for r in recs)}
            for stat in FIG1_STATS:
                mean, sd = _mean_sd([r[stat] for r in recs])
                entry[stat] = (mean, sd)
                rows.append([fname, k, cf.radii[k - 1], stat, mean, sd, len(recs),
                             entry["disconnected"] if stat == "lambda1" else 0])
            levels.append(entry)
        result[fname] = levels
    if out:
        _write_points(points, out)
        _write_rows(os.path.join(out, "figure1.csv"),
                    ["function", "level", "r", "statistic", "mean", "sd", "iterations", "disconnected"],
                    rows)
    return result


# -- Fig. 4 sweep ------------------------------------------------------------

def sweep_grid(cfg):
    s = cfg.sweep
    return np.linspace(s.r_min, s.r_max, s.count + 1)[1:]


def find_crossing(rs, values, target):
    """First ``r`` where the curve reaches ``target``, linearly interpolated.

    Returns ``None`` when the curve stays below ``target``.
    """
    rs = np.asarray(rs, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    hit = np.nonzero(values >= target)[0]
    if len(hit) == 0:
        return None
    i = int(hit[0])
    if i == 0:
        return float(rs[0])
    r0, r1, v0, v1 = rs[i - 1], rs[i], values[i - 1], values[i]
    return float(r0 + (target - v0) * (r1 - r0) / (v1 - v0))


def run_r_sweep(cfg: ExperimentConfig, out=None, points=None, references=None):
    """``lambda1`` of the threshold graphs Gamma(r) and the crossing with Gamma_C.

    ``references`` maps scenario names to mean ``lambda1``; computed with
    :func:`run_table1` when omitted.
    """
    out = prepare_out(out, cfg)
    points = points if points is not None else build_points(cfg)
    if references is None:
        t1 = run_table1(cfg, points=points, scenarios=("U", "S", "C"))
        references = {k: v["mean"]["lambda1"] for k, v in t1.items()}
    rs = sweep_grid(cfg)
    pairs = graphgen.annulus_pairs(points, 0.0, float(rs[-1]))
    c = points.coords
    d = np.sqrt(((c[pairs[:, 0]] - c[pairs[:, 1]]) ** 2).sum(axis=1))
    curve = []
    for r in rs:
        g = graphgen.Graph(len(points), pairs[d <= r])
        connected = graphgen.is_connected(g)
        lam = spectral.lambda1(g, cfg.tol).lambda1 if connected else 0.0
        curve.append({"r": float(r), "lambda1": lam, "edges": g.edge_count, "connected": connected})
    values = [row["lambda1"] for row in curve]
    crossing = find_crossing(rs, values, references["C"]) if "C" in references else None
    edge_counts = [row["edges"] for row in curve]
    report = {
        "references": {k: float(v) for k, v in sorted(references.items())},
        "crossing_r": crossing,
        "crossing_found": crossing is not None,
        "edge_sets_nested": bool(np.all(np.diff(edge_counts) >= 0)),
        "lambda1_decreases": int(np.sum(np.diff(values) < 0)),
    }
    if crossing is None:
        log.warning("sweep: no crossing in range")
    if out:
        _write_points(points, out)
        _write_rows(os.path.join(out, "sweep.csv"), ["r", "lambda1", "edges", "connected"],
                    [[row["r"], row["lambda1"], row["edges"], row["connected"]] for row in curve])
        with open(os.path.join(out, "sweep_report.json"), "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return {"curve": curve, **report}
