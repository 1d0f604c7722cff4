from __future__ import annotations

import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hullspan.generators import canonical_chain, triangle_chain_gen
from hullspan.io import ParseError, RunReport, dumps_chain, dumps_points, loads_chain, loads_points, read_points

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@given(arrays(np.float64, st.tuples(st.integers(1, 20), st.sampled_from([2, 3])), elements=finite), st.sampled_from(["json", "csv"]))
def test_points_round_trip_bit_exact(pts, fmt):
    text = dumps_points(pts, {"family": "test", "seed": 3}, fmt)
    back, meta = loads_points(text)
    assert np.array_equal(back, pts)
    assert meta == {"family": "test", "seed": 3}


def test_parse_errors(tmp_path):
    for bad in ["garbage", '{"points": [[1, 2, "x"]]}', '{"dim": 3, "points": [[1, 2]]}', "1,2\n3", '{"nope": 1}', "", "1,2,nan"]:
        with pytest.raises(ParseError):
            loads_points(bad)
    with pytest.raises(ParseError):
        loads_points("1,2\n3,4", dim=3)
    with pytest.raises(ParseError):
        read_points(tmp_path / "missing.json")


def test_csv_accepts_comments_and_blank_lines():
    pts, meta = loads_points("# k: 10\n# note: free text\n\n1,2,3\n4,5,6\n")
    assert pts.shape == (2, 3) and meta == {"k": 10, "note": "free text"}


def test_chain_round_trip():
    for tc in (canonical_chain(), triangle_chain_gen(math.pi / 6, 10, seed=2)):
        back, meta = loads_chain(dumps_chain(tc, {"seed": 2}))
        assert np.array_equal(back.vertices, tc.vertices)
        assert np.array_equal(back.triangles, tc.triangles)
        assert (back.p, back.q) == (tc.p, tc.q) and meta == {"seed": 2}
    with pytest.raises(ParseError):
        loads_chain('{"kind": "points"}')
    with pytest.raises(ParseError):
        loads_chain("{}")


def _report() -> RunReport:
    rows = [
        {"trial": 0, "ratio": 1.25, "witness": [0, 3], "pass": True},
        {"trial": 1, "ratio": 0.1 + 0.2, "pass": False, "note": None},
        {"trial": 2, "ratio": np.float64(1.5), "flag": np.bool_(True), "pass": True},
    ]
    return RunReport("verify", {"suite": "x", "trials": 3}, 2**64 - 1, rows, wall_clock=0.5)


def test_report_aggregate():
    rep = _report()
    assert rep.violations == 1
    agg = rep.aggregate()
    assert agg == {"instances": 3, "violations": 1, "max_ratio": 1.5}


def test_report_round_trip():
    rep = _report()
    text = rep.to_json()
    back = RunReport.from_json(text)
    assert back.to_json() == text
    assert back.seed == 2**64 - 1
    assert back.results[1]["ratio"] == 0.1 + 0.2


def test_report_rejects_inconsistent_violation_count():
    d = json.loads(_report().to_json())
    d["aggregate"]["violations"] = 0
    with pytest.raises(ParseError):
        RunReport.from_dict(d)
    with pytest.raises(ParseError):
        RunReport.from_json("[]")


def test_report_csv():
    lines = _report().to_csv().splitlines()
    assert lines[0] == "trial,ratio,witness,pass,note,flag"
    assert lines[1].startswith("0,1.25,")
    assert lines[2].split(",")[1] == repr(0.1 + 0.2)
    assert lines[2].split(",")[3] == "false"
