import csv
import json
import os

import numpy as np
import pytest
import yaml

from horograph.connection import ConnectionFunction
from horograph.runner import experiments as ex
from horograph.runner.cli import main
from horograph.runner.config import ConfigError, from_dict, load_config

SMALL_CITIES = """
start: A
cities:
  - {name: A, cx: 0.6, cy: 1.9, weight: 2.0, stddev: 0.15}
  - {name: B, cx: 1.9, cy: 0.6, weight: 1.0, stddev: 0.15}
"""


@pytest.fixture
def small_config(tmp_path):
    cities = tmp_path / "cities.yaml"
    cities.write_text(SMALL_CITIES)
    doc = {
        "seed": 7,
        "iterations": 2,
        "points": {"kind": "france", "cities": str(cities), "grid": [20, 20],
                   "total_n": 600, "bbox": [2.5, 2.5]},
        "walks": {"num_walks": 10, "steps": 30, "delay": 5},
        "sweep": {"r_min": 0.15, "r_max": 1.5, "count": 8},
        "figure1": {"n": 40, "side": 8, "levels": 10},
    }
    path = tmp_path / "config.yaml"
    path.write_text(yaml.safe_dump(doc))
    return path


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_config_defaults_and_errors(tmp_path):
    cfg = load_config()
    assert cfg.iterations == 20 and cfg.points.total_n == 6000 and cfg.walks.delay == 10
    with pytest.raises(ConfigError):
        from_dict({"iterations": 0})
    with pytest.raises(ConfigError):
        from_dict({"bogus": 1})
    with pytest.raises(ConfigError):
        from_dict({"points": {"kind": "moon"}})
    with pytest.raises(ConfigError):
        from_dict({"scenarios": ["U", "Q"]})


def test_find_crossing():
    rs = [1.0, 2.0, 3.0]
    assert ex.find_crossing(rs, [0.1, 0.2, 0.4], 0.3) == pytest.approx(2.5)
    assert ex.find_crossing(rs, [0.1, 0.2, 0.4], 0.05) == 1.0
    assert ex.find_crossing(rs, [0.1, 0.2, 0.4], 0.5) is None


def test_table1_small(small_config, tmp_path):
    cfg = load_config(small_config)
    out = tmp_path / "t1"
    res = ex.run_table1(cfg, str(out))
    assert res["I"]["count"] == 1 and res["U"]["count"] == 2
    rows = read_csv(out / "table1.csv")
    assert list(rows[0]) == ["graph", "iteration", "lambda1", "sparsity", "max_valency",
                             "avg_valency", "avg_clustering"]
    means = {r["graph"]: r for r in rows if r["iteration"] == "mean"}
    assert set(means) == {"U", "S", "C", "I"}
    sds = {r["graph"]: r for r in rows if r["iteration"] == "sd"}
    assert float(sds["I"]["lambda1"]) == 0.0
    for name, agg in res.items():
        vals = [s.lambda1 for s in agg["rows"]]
        assert agg["sd"]["lambda1"] >= 0
        assert abs(agg["mean"]["lambda1"]) <= max(vals) + 1e-15
    assert (out / "points.csv").exists() and (out / "config.yaml").exists()


def test_table1_single_iteration_sd_zero(small_config):
    cfg = load_config(small_config, iterations=1)
    res = ex.run_table1(cfg)
    for agg in res.values():
        assert all(v == 0.0 for v in agg["sd"].values())


def test_shared_point_set(small_config, tmp_path):
    cfg = load_config(small_config)
    ex.run_table1(cfg, str(tmp_path / "a"))
    ex.run_table2(cfg, str(tmp_path / "b"))
    ha = ex.file_digest(tmp_path / "a" / "points.csv")
    hb = ex.file_digest(tmp_path / "b" / "points.csv")
    assert ha == hb


def test_table2_and_replication_outputs(small_config, tmp_path):
    cfg = load_config(small_config)
    res = ex.run_table2(cfg, str(tmp_path))
    rows = read_csv(tmp_path / "table2.csv")
    assert [r["statistic"] for r in rows] == ex.TABLE2_STATS
    assert list(rows[0])[1:] == ["U", "S", "C", "I"]
    assert res["U"]["mean_of_means"] > 0
    rec = ex.run_replicating(cfg, str(tmp_path))
    for name in "USCI":
        log = read_csv(tmp_path / f"replication_{name}.csv")
        assert log[0]["parent_id"] == "-1"
        assert len(log) == 1 + len(rec[name].spawn_events)
    summary = json.loads((tmp_path / "replication_summary.json").read_text())
    assert set(summary) == set("USCI")


def test_figure1_complete_graph_row(tmp_path):
    cfg = from_dict({"seed": 3, "iterations": 3, "figure1": {"n": 30, "side": 8, "levels": 10}})
    res = ex.run_figure1(cfg, str(tmp_path))
    last = res["phi2"][-1]
    n = 30
    assert last["lambda1"][0] == pytest.approx(n / (n - 1), abs=1e-8)
    assert last["sparsity"] == (1.0, 0.0)
    for entry in res["phi2"]:
        for stat in ex.FIG1_STATS:
            assert entry[stat][1] == pytest.approx(0.0, abs=1e-12)
    for stat in ("max_valency", "avg_valency", "sparsity"):
        curve = [e[stat][0] for e in res["phi2"]]
        assert np.all(np.diff(curve) >= 0)
    rows = read_csv(tmp_path / "figure1.csv")
    assert len(rows) == 5 * 10 * 4


def test_figure1_disconnected_flag():
    cfg = from_dict({"iterations": 2, "figure1": {"n": 50, "side": 8, "levels": 10}})
    fn = {"tiny": ConnectionFunction((0.2, 0.4), (1.0, 1.0))}
    res = ex.run_figure1(cfg, functions=fn)
    first = res["tiny"][0]
    assert first["disconnected"] == 2 and first["lambda1"] == (0.0, 0.0)


def test_sweep_small(small_config, tmp_path):
    cfg = load_config(small_config)
    res = ex.run_r_sweep(cfg, str(tmp_path))
    assert res["edge_sets_nested"]
    rows = read_csv(tmp_path / "sweep.csv")
    assert len(rows) == 8
    report = json.loads((tmp_path / "sweep_report.json").read_text())
    assert set(report["references"]) == {"U", "S", "C"}
    if report["crossing_found"]:
        assert 0.15 < report["crossing_r"] <= 1.5


def test_sweep_no_crossing(small_config):
    cfg = load_config(small_config)
    res = ex.run_r_sweep(cfg, references={"C": 5.0})
    assert res["crossing_r"] is None and not res["crossing_found"]


def test_grid_connected_just_above_mesh(france_points):
    from horograph.connection import threshold
    from horograph.graphgen import generate, is_connected

    assert is_connected(generate(france_points, threshold(0.14), 0).top())


# -- CLI --------------------------------------------------------------------

COMMANDS = ["generate", "stats", "table1", "table2", "figure1", "repwalk", "sweep", "walk"]


def _snapshot(d):
    out = {}
    for root, _, files in os.walk(d):
        for f in files:
            p = os.path.join(root, f)
            with open(p, "rb") as fh:
                out[os.path.relpath(p, d)] = fh.read()
    return out


@pytest.mark.parametrize("command", COMMANDS)
def test_cli_byte_identical(command, small_config, tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    extra = ["--iterations", "2"]
    assert main([command, "--config", str(small_config), "--out", str(a)] + extra) == 0
    assert main([command, "--config", str(small_config), "--out", str(b)] + extra) == 0
    sa, sb = _snapshot(a), _snapshot(b)
    assert sa and sa == sb


def test_cli_seed_changes_output(small_config, tmp_path):
    main(["generate", "--config", str(small_config), "--phi", "U", "--out", str(tmp_path / "a")])
    main(["generate", "--config", str(small_config), "--phi", "U", "--seed", "8", "--out", str(tmp_path / "b")])
    assert (tmp_path / "a" / "edges.csv").read_bytes() != (tmp_path / "b" / "edges.csv").read_bytes()


def test_cli_exit_codes(small_config, tmp_path):
    bad = tmp_path / "bad.yaml"
    bad.write_text("iterations: 0\n")
    assert main(["table1", "--config", str(bad)]) == 1
    assert main(["generate", "--config", str(small_config), "--phi", "nonsense",
                 "--out", str(tmp_path / "x")]) == 1
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["generate", "--config", str(small_config), "--out", str(blocker / "sub")]) == 3
    # a sparse uniform cloud under I is disconnected: numerical failure
    cfg = tmp_path / "sparse.yaml"
    cfg.write_text(yaml.safe_dump({"points": {"kind": "uniform", "n": 30}}))
    assert main(["stats", "--config", str(cfg), "--phi", "I", "--out", str(tmp_path / "s")]) == 2


def test_cli_generate_files(small_config, tmp_path):
    out = tmp_path / "g"
    assert main(["generate", "--config", str(small_config), "--phi", "C", "--out", str(out)]) == 0
    for f in ("points.csv", "edges.csv", "phi.yaml", "config.yaml"):
        assert (out / f).exists()
    assert (out / "edges.csv").read_text().startswith("u,v,band\n")
