from __future__ import annotations

import json
import math

import numpy as np
import pytest

from hullspan import cli
from hullspan.disk_chain import SPHERE_STRETCH_BOUND
from hullspan.errors import GenerationError
from hullspan.generators import counterexample_points
from hullspan.io import RunReport, dumps_points, loads_chain, loads_points


def run(argv, capsys):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, out


def report(out: str) -> dict:
    d = json.loads(out)
    RunReport.from_dict(d)
    return d


def strip_clock(out: str) -> dict:
    d = json.loads(out)
    d.pop("wall_clock")
    return d


def test_gen_counterexample_file(tmp_path, capsys):
    path = tmp_path / "cx.json"
    code, _ = run(["gen", "counterexample", "--k", 10, "--output", path], capsys)
    assert code == 0
    pts, meta = loads_points(path.read_text())
    assert pts.shape == (12, 3)
    assert np.array_equal(pts, counterexample_points(10))
    assert meta["family"] == "counterexample" and meta["k"] == 10


def test_gen_sphere_reproducible(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(["gen", "sphere", "--n", 100, "--seed", 7, "--output", a], capsys)
    run(["gen", "sphere", "--n", 100, "--seed", 7, "--output", b], capsys)
    assert a.read_bytes() == b.read_bytes()
    pts, meta = loads_points(a.read_text())
    assert pts.shape == (100, 3) and meta["seed"] == 7
    assert np.allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-12)


def test_gen_csv_header(capsys):
    code, out = run(["gen", "annulus-polygon", "--r", 1, "--R", 2, "--n", 32, "--format", "csv", "--seed", 4], capsys)
    assert code == 0
    assert out.startswith('# family: "annulus-polygon"')
    pts, meta = loads_points(out)
    assert pts.shape[1] == 2 and meta["seed"] == 4 and meta["R"] == 2.0


def test_gen_chain(capsys):
    code, out = run(["gen", "triangle-chain", "--theta", math.pi / 6, "--k", 10, "--seed", 1], capsys)
    assert code == 0
    tc, meta = loads_chain(out)
    assert tc.k >= 2 and meta["target_k"] == 10


def test_seed_from_environment(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("HULLSPAN_SEED", "7")
    _, env = run(["gen", "sphere", "--n", 30], capsys)
    monkeypatch.delenv("HULLSPAN_SEED")
    _, flag = run(["gen", "sphere", "--n", 30, "--seed", 7], capsys)
    _, zero = run(["gen", "sphere", "--n", 30], capsys)
    assert env == flag and env != zero


def test_verify_sphere_bound(capsys):
    code, out = run(["verify", "sphere-bound", "--trials", 20, "--n", 50, "--seed", 3], capsys)
    assert code == 0
    d = report(out)
    assert len(d["results"]) == 20
    assert [r["trial"] for r in d["results"]] == list(range(20))
    assert all(r["stretch"] <= 3.1385 for r in d["results"])
    assert d["aggregate"]["violations"] == 0
    assert len({r["seed"] for r in d["results"]}) == 20


def test_verify_is_deterministic(capsys):
    argv = ["verify", "annulus-dilation", "--trials", 5, "--seed", 11]
    _, a = run(argv, capsys)
    _, b = run(argv, capsys)
    assert strip_clock(a) == strip_clock(b)
    da, db = json.loads(a), json.loads(b)
    da["wall_clock"] = db["wall_clock"] = 0
    assert json.dumps(da, sort_keys=True) == json.dumps(db, sort_keys=True)


def test_verify_annulus_dilation(capsys):
    code, out = run(["verify", "annulus-dilation", "--trials", 50, "--r", 1, "--R", 2], capsys)
    assert code == 0
    d = report(out)
    assert len(d["results"]) == 50
    assert all(r["dilation"] <= r["bound"] + 1e-9 for r in d["results"])


def test_verify_counterexample(capsys):
    code, out = run(["verify", "counterexample", "--k", "5,10,20"], capsys)
    assert code == 0
    rows = report(out)["results"]
    assert [r["k"] for r in rows] == [5, 10, 20]
    assert all(r["ratio"] >= 1 for r in rows)


def test_verify_chain_and_disk_suites(capsys):
    code, out = run(["verify", "triangle-chain", "--trials", 5, "--theta", math.pi / 4, "--k", 12], capsys)
    assert code == 0 and len(report(out)["results"]) == 5
    code, out = run(["verify", "disk-chain", "--trials", 2, "--n", 16], capsys)
    assert code == 0
    assert all(r["failures"] == 0 and r["pairs"] > 0 for r in report(out)["results"])


def test_verify_csv(capsys):
    code, out = run(["verify", "sphere-bound", "--trials", 3, "--n", 20, "--format", "csv"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].split(",")[:3] == ["trial", "seed", "n"] and len(lines) == 4


def test_analyze(tmp_path, capsys):
    path = tmp_path / "cx.csv"
    path.write_text(dumps_points(counterexample_points(10), {"k": 10}, "csv"))
    code, out = run(["analyze", path], capsys)
    assert code == 0
    row = report(out)["results"][0]
    assert row["vertices"] == 12 and row["stretch"] >= 10
    assert row["checks"]["sphere_bound"]["asserted"] is False


def test_analyze_icosahedron_shell(tmp_path, capsys):
    phi = (1 + 5**0.5) / 2
    ico = np.array([[0, s1, s2 * phi] for s1 in (-1, 1) for s2 in (-1, 1)], dtype=float)
    ico = np.concatenate([np.roll(ico, i, axis=1) for i in range(3)])
    ico /= np.linalg.norm(ico[0])
    path = tmp_path / "ico.json"
    path.write_text(dumps_points(ico))
    code, out = run(["analyze", path, "--r", 0.79, "--R", 1.0, "--theta", 1.0], capsys)
    assert code == 0
    checks = report(out)["results"][0]["checks"]
    assert checks["sphere_bound"]["asserted"] is False
    assert checks["shell_bound"]["pass"] is True


def test_dilation_square(tmp_path, capsys):
    path = tmp_path / "sq.json"
    path.write_text(dumps_points([[1, 1], [-1, 1], [-1, -1], [1, -1]]))
    code, out = run(["dilation", path, "--r", 1, "--R", 2**0.5], capsys)
    assert code == 0
    row = report(out)["results"][0]
    assert row["dilation"] == pytest.approx(2.0, abs=1e-9)
    assert row["in_annulus"] is True


def test_chain_command(tmp_path, capsys):
    path = tmp_path / "c.json"
    run(["gen", "triangle-chain", "--theta", 0.5, "--k", 8, "--output", path], capsys)
    code, out = run(["chain", path], capsys)
    assert code == 0
    row = report(out)["results"][0]
    assert row["shortcut"] <= row["bound"] * row["pq"] + 1e-9


@pytest.mark.parametrize(
    "argv, content",
    [
        (["analyze"], "not a point file"),
        (["analyze"], "0,0,0\n1,0,0\n0,1,0\n1,1,0\n"),
        (["analyze"], "0,0\n1,0\n0,1\n"),
        (["dilation"], "0,0,0\n1,0,0\n0,1,0\n"),
        (["dilation"], "0,0\n2,0\n1,0.2\n1,2\n"),
        (["chain"], '{"kind": "points"}'),
    ],
)
def test_bad_input_exits_2(tmp_path, capsys, argv, content):
    path = tmp_path / "in.txt"
    path.write_text(content)
    assert cli.main(argv + [str(path)]) == 2


def test_missing_file_exits_2(tmp_path):
    assert cli.main(["analyze", str(tmp_path / "nope.json")]) == 2


def test_violation_exits_1(capsys, monkeypatch):
    monkeypatch.setattr(cli, "SPHERE_STRETCH_BOUND", 1.0)
    code, out = run(["verify", "sphere-bound", "--trials", 2, "--n", 20], capsys)
    assert code == 1
    assert report(out)["aggregate"]["violations"] == 2


def test_generation_failure_exits_1(monkeypatch, capsys):
    def boom(*a, **k):
        raise GenerationError("no valid sample")

    monkeypatch.setattr(cli, "sphere_points", boom)
    assert cli.main(["verify", "sphere-bound", "--trials", "1"]) == 1
    assert cli.main(["gen", "sphere"]) == 1


def test_trial_seeds_independent():
    seeds = [cli.trial_seed(5, i) for i in range(100)]
    assert len(set(seeds)) == 100
    assert all(0 <= s < 2**64 for s in seeds)
    assert seeds == [cli.trial_seed(5, i) for i in range(100)]
    assert SPHERE_STRETCH_BOUND < 3.1385
