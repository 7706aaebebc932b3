"""``horograph`` command line.

Exit codes: 0 success, 1 configuration error, 2 numerical non-convergence,
3 I/O failure.
"""

import argparse
import json
import logging
import os
import sys

from .. import connection, graphgen, pointset, spectral, stats, walks
from .. import _backend
from . import experiments as ex
from .config import ConfigError, load_config

log = logging.getLogger("horograph")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3


def _common(p):
    p.add_argument("--seed", type=int, default=None, help="master seed")
    p.add_argument("--config", default=None, help="experiment YAML")
    p.add_argument("--out", default=None, help="output directory")
    p.add_argument("--iterations", type=int, default=None, help="draws per random scenario")
    p.add_argument("--tol", type=float, default=None, help="eigen-residual tolerance")


def build_parser():
    parser = argparse.ArgumentParser(prog="horograph", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress")
    sub = parser.add_subparsers(dest="command", required=True)

    def cmd(name, help_):
        p = sub.add_parser(name, help=help_)
        _common(p)
        return p

    p = cmd("generate", "draw one layered graph and write points.csv / edges.csv")
    p.add_argument("--phi", default=None, help="preset U/S/C/I, uniform:phiK, or band file")
    p.add_argument("--points", default=None, help="france | uniform | grid | path to points CSV")

    p = cmd("stats", "summary statistics of one graph (top layer)")
    p.add_argument("--phi", default=None, help="preset U/S/C/I, uniform:phiK, or band file")
    p.add_argument("--points", default=None, help="france | uniform | grid | path to points CSV")

    cmd("table1", "scenario summaries averaged over iterations")
    cmd("table2", "simple-walk spread statistics on the scenario graphs")
    cmd("figure1", "per-level curves on the uniform square")
    cmd("repwalk", "replicating walks on the scenario graphs")
    cmd("sweep", "lambda1 of threshold graphs and crossing with Gamma_C")
    cmd("all", "every experiment into one directory")

    p = cmd("walk", "one simple walk, written as a trace CSV")
    p.add_argument("--phi", default=None, help="preset U/S/C/I, uniform:phiK, or band file")
    p.add_argument("--points", default=None, help="france | uniform | grid | path to points CSV")
    p.add_argument("--start", type=int, default=None, help="start vertex (default: configured city)")
    p.add_argument("--steps", type=int, default=None, help="walk length")
    return parser


def _config_from_args(args):
    overrides = {"seed": args.seed, "iterations": args.iterations, "tol": args.tol}
    cfg = load_config(args.config, **overrides)
    phi = getattr(args, "phi", None)
    if phi:
        cfg.phi = phi
    pts = getattr(args, "points", None)
    if pts:
        if pts in ("france", "uniform", "grid"):
            cfg.points.kind = pts
        else:
            cfg.points.kind, cfg.points.path = "file", pts
    if getattr(args, "steps", None) is not None:
        cfg.walks.steps = args.steps
    return cfg.validate()


def _resolve_phi(cfg):
    try:
        return connection.resolve(cfg.phi)
    except (ValueError, KeyError, OSError) as exc:
        raise ConfigError(f"bad connection function {cfg.phi!r}: {exc}") from exc


def _out(args, default):
    return args.out or default


def cmd_generate(args, cfg):
    out = ex.prepare_out(_out(args, "out/generate"), cfg)
    points = ex.build_points(cfg)
    cf = _resolve_phi(cfg)
    lg = graphgen.generate(points, cf, cfg.seed)
    graphgen.check_layers(lg)
    pointset.write_csv(points, os.path.join(out, "points.csv"))
    graphgen.write_edges(lg, os.path.join(out, "edges.csv"))
    connection.dump(cf, os.path.join(out, "phi.yaml"))
    print(f"{len(points)} points, {len(lg.edges)} edges over {lg.num_layers} layers -> {out}")


def cmd_stats(args, cfg):
    out = ex.prepare_out(_out(args, "out/stats"), cfg)
    points = ex.build_points(cfg)
    g = graphgen.generate(points, _resolve_phi(cfg), cfg.seed).top()
    if not graphgen.is_connected(g):
        raise spectral.DisconnectedGraphError("graph is disconnected; lambda1 is 0")
    report, _ = spectral.lambda1(g, cfg.tol, return_vector=True)
    s = stats.summarize(g, cfg.tol)
    with open(os.path.join(out, "summary.json"), "w") as fh:
        json.dump(s.as_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(os.path.join(out, "spectral.json"), "w") as fh:
        fh.write(report.to_json() + "\n")
    for k, v in s.as_dict().items():
        print(f"{k:15s} {v}")


def cmd_table1(args, cfg):
    res = ex.run_table1(cfg, _out(args, "out/table1"))
    for name, agg in res.items():
        m = agg["mean"]
        print(f"{name}: lambda1={m['lambda1']:.5g} sparsity={m['sparsity']:.4f} "
              f"max={m['max_valency']:.0f} avg={m['avg_valency']:.1f} "
              f"clustering={m['avg_clustering']:.3f} (n={agg['count']})")


def cmd_table2(args, cfg):
    res = ex.run_table2(cfg, _out(args, "out/table2"))
    for name, r in res.items():
        print(name, " ".join(f"{k}={v:.3f}" for k, v in r.items()))


def cmd_figure1(args, cfg):
    ex.run_figure1(cfg, _out(args, "out/figure1"))
    print(f"figure1.csv written to {_out(args, 'out/figure1')}")


def cmd_repwalk(args, cfg):
    out = _out(args, "out/repwalk")
    res = ex.run_replicating(cfg, out)
    points = ex.build_points(cfg)
    for name, rec in res.items():
        print(f"{name}: replicants={rec.num_replicants} "
              f"max spawn distance={walks.spawn_spread(rec, points):.3f}")


def cmd_sweep(args, cfg):
    res = ex.run_r_sweep(cfg, _out(args, "out/sweep"))
    cr = res["crossing_r"]
    print("references:", res["references"])
    print("crossing r*:", "no crossing in range" if cr is None else f"{cr:.4f}")


def cmd_walk(args, cfg):
    out = ex.prepare_out(_out(args, "out/walk"), cfg)
    points = ex.build_points(cfg)
    g = graphgen.generate(points, _resolve_phi(cfg), cfg.seed).top()
    start = args.start if args.start is not None else ex.start_vertex(points, cfg)
    tr = walks.simple_walk(g, start, cfg.walks.steps, cfg.seed)
    walks.write_trace(tr, points, os.path.join(out, "walk.csv"))
    st = walks.trace_distance_stats(tr, points)
    print(f"start={start} mean_pairwise={st['mean_pairwise']:.4f} max_pairwise={st['max_pairwise']:.4f}")


def cmd_all(args, cfg):
    out = ex.prepare_out(_out(args, "out/all"), cfg)
    points = ex.build_points(cfg)
    t1 = ex.run_table1(cfg, out, points=points)
    graphs = {name: ex.scenario_graph(points, cfg, name) for name in cfg.scenarios}
    ex.run_table2(cfg, out, points=points, graphs=graphs)
    ex.run_replicating(cfg, out, points=points, graphs=graphs)
    refs = {k: v["mean"]["lambda1"] for k, v in t1.items() if k in ("U", "S", "C")}
    ex.run_r_sweep(cfg, out, points=points, references=refs)
    fig_dir = os.path.join(out, "figure1")
    ex.run_figure1(cfg, fig_dir)
    print(f"all experiments written to {out}")


COMMANDS = {
    "generate": cmd_generate,
    "stats": cmd_stats,
    "table1": cmd_table1,
    "table2": cmd_table2,
    "figure1": cmd_figure1,
    "repwalk": cmd_repwalk,
    "sweep": cmd_sweep,
    "walk": cmd_walk,
    "all": cmd_all,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    log.info("kernel backend: %s", _backend.NAME)
    try:
        cfg = _config_from_args(args)
        COMMANDS[args.command](args, cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (spectral.ConvergenceError, spectral.DisconnectedGraphError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
