import csv
import io
import json
import math

import numpy as np
import pytest

from conftest import DATA, sim
from traceinfer import Graph, GraphSpec, InferenceResult, evaluate, generate
from traceinfer.cli import main
from traceinfer.errors import ParameterError, ValidationError
from traceinfer.evaluate import scores
from traceinfer.firstedge import first_edge
from traceinfer.sweep import COLUMNS, SweepGrid, log_grid, sweep, write_csv


TRUTH = Graph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])


def test_perfect_prediction():
    r = evaluate(InferenceResult(4, TRUTH.edges.tolist(), "x"), TRUTH)
    assert (r.precision, r.recall, r.f1) == (1.0, 1.0, 1.0)


def test_empty_prediction():
    r = evaluate(InferenceResult(4, [], "x"), TRUTH)
    assert (r.precision, r.recall, r.f1) == (0.0, 0.0, 0.0)


def test_half_recall():
    r = evaluate(InferenceResult(4, [(0, 1), (2, 3)], "x"), TRUTH)
    assert (r.precision, r.recall) == (1.0, 0.5) and r.f1 == pytest.approx(2 / 3)


def test_scores_bounds(rng):
    for _ in range(200):
        tp, fp, fn = rng.integers(0, 20, size=3)
        p, r, f = scores(int(tp), int(fp), int(fn))
        assert 0 <= min(p, r, f) and max(p, r, f) <= 1
        if p + r > 0:
            assert f == pytest.approx(2 * p * r / (p + r))


def test_result_validation():
    with pytest.raises(ValidationError):
        InferenceResult(3, [(0, 1), (1, 0)], "x")
    with pytest.raises(ValidationError):
        InferenceResult(3, [(0, 3)], "x")
    with pytest.raises(ParameterError):
        evaluate(InferenceResult(5, [], "x"), TRUTH)


def test_dense_gnp_first_edge_recall_follows_coupon_count():
    # first pairs are near-uniform over edges on G(n, p): recall ~ 1 - exp(-ell / m)
    g = generate(GraphSpec("gnp", 128, p=0.2, seed=0))
    ell = g.m
    r = evaluate(first_edge(sim(g, ell, seed=0)), g)
    assert abs(r.recall - (1 - math.exp(-1))) < 0.03
    assert r.f1 > 0.5


def test_log_grid():
    g = log_grid(10, 10_000, 3)
    assert g[0] == 10 and g[-1] == 10_000 and g == sorted(set(g))
    with pytest.raises(ParameterError):
        log_grid(0, 10)


def _grid(**kw):
    d = dict(graphs=[{"family": "uniform_random_tree", "n": 12, "seed": 3}],
             algorithms=["first-edge", "tree"], ells=[5, 40], reps=2, seed=11)
    d.update(kw)
    return SweepGrid.from_dict(d)


def _csv(rows):
    buf = io.StringIO()
    write_csv(rows, buf)
    return buf.getvalue()


def test_sweep_deterministic_and_golden():
    text = _csv(sweep(_grid()))
    assert text == _csv(sweep(_grid()))
    assert text.splitlines()[0] == ",".join(COLUMNS)
    assert text == (DATA / "sweep_small.csv").read_text()


def test_sweep_cache_and_workers(tmp_path):
    ref = _csv(sweep(_grid()))
    assert _csv(sweep(_grid(), cache_dir=tmp_path)) == ref
    assert len(list(tmp_path.glob("*.json"))) == 8
    assert _csv(sweep(_grid(), cache_dir=tmp_path)) == ref
    assert _csv(sweep(_grid(), workers=2)) == ref


def test_sweep_corrupt_cache_recovers(tmp_path, caplog):
    ref = _csv(sweep(_grid(), cache_dir=tmp_path))
    victim = sorted(tmp_path.glob("*.json"))[0]
    victim.write_text("{not json")
    assert _csv(sweep(_grid(), cache_dir=tmp_path)) == ref
    assert "corrupt cache entry" in caplog.text
    json.loads(victim.read_text())


def test_sweep_cache_env(tmp_path, monkeypatch):
    monkeypatch.setenv("TRACEINFER_CACHE_DIR", str(tmp_path / "c"))
    sweep(_grid(reps=1, ells=[5]))
    assert len(list((tmp_path / "c").glob("*.json"))) == 2


def test_sweep_records_algorithm_errors():
    rows = sweep(_grid(graphs=[{"family": "cycle", "n": 6}], algorithms=["tree"], ells=[3], reps=1, p=0.5))
    assert rows[0]["status"] == "ParameterError" and rows[0]["f1"] == ""


def test_sweep_grid_validation():
    with pytest.raises(ParameterError):
        _grid(algorithms=["netinf"])
    with pytest.raises(ParameterError):
        _grid(ells=[-1])


def test_cli_pipeline(tmp_path, capsys):
    g, t = tmp_path / "g.txt", tmp_path / "t.jsonl"
    assert main(["gen", "--family", "uniform_random_tree", "--n", "20", "--seed", "2", "--out", str(g)]) == 0
    assert "seed: 2" in capsys.readouterr().err
    assert main(["simulate", "--graph", str(g), "--traces", "60", "--seed", "5", "--out", str(t)]) == 0
    for algo in ("first-edge", "first-edge+", "tree", "bdd"):
        out = tmp_path / f"{algo}.txt"
        extra = ["--delta-max", "2"] if algo == "bdd" else []
        assert main(["infer", str(t), "--algo", algo, "--out", str(out), *extra]) == 0
        assert main(["eval", "--pred", str(out), "--truth", str(g)]) == 0
    assert "f1=1" in capsys.readouterr().out
    assert main(["degree", str(t), "--graph", str(g), "--out", str(tmp_path / "c.csv")]) == 0
    assert (tmp_path / "c.csv").read_text().startswith("degree,ccdf_true,ccdf_estimated")


def test_cli_sweep_and_lb(tmp_path, capsys):
    cfg = tmp_path / "grid.json"
    cfg.write_text(json.dumps({"graphs": [{"family": "cycle", "n": 8}], "algorithms": ["first-edge"],
                               "ells": {"lo": 10, "hi": 100, "per_decade": 2}}))
    assert main(["sweep", "--config", str(cfg), "--seed", "3", "--out", str(tmp_path / "s.csv")]) == 0
    rows = list(csv.DictReader(open(tmp_path / "s.csv")))
    assert [int(r["ell"]) for r in rows] == [10, 32, 100]
    assert main(["lb-verify", "--n", "8", "--traces", "20000", "--ell", "0", "5", "--trials", "50",
                 "--out", str(tmp_path / "lb.csv")]) == 0
    assert (tmp_path / "lb.csv").read_text().startswith("n,ell,trials,success_rate,stderr")


def test_cli_exit_codes(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["infer"])
    assert exc.value.code == 1
    assert main(["infer", str(tmp_path / "missing.jsonl"), "--algo", "tree", "--out", "x"]) == 2
    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"format": "traceinfer-traces", "version": 9}\n')
    assert main(["infer", str(bad), "--algo", "tree", "--out", "x"]) == 2
    g, t = tmp_path / "g.txt", tmp_path / "t.jsonl"
    main(["gen", "--family", "path", "--n", "40", "--out", str(g)])
    main(["simulate", "--graph", str(g), "--traces", "3", "--out", str(t)])
    assert main(["infer", str(t), "--algo", "first-edge+", "--threshold", "2", "--out", "x"]) == 2
