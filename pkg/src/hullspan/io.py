"""Point-set, cycle and chain files, and the run report format."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InvalidInputError
from .triangle_chain import TriangleChain


class ParseError(InvalidInputError):
    """An input file could not be read as the expected format."""


def _fmt(x: float) -> str:
    return "%.17g" % x


def dumps_points(points, meta: dict | None = None, fmt: str = "json") -> str:
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] not in (2, 3):
        raise InvalidInputError("points must have shape (n, 2) or (n, 3)")
    if fmt == "json":
        doc = {"dim": int(pts.shape[1]), "points": pts.tolist()}
        if meta:
            doc["meta"] = meta
        return json.dumps(doc, indent=1) + "\n"
    if fmt == "csv":
        lines = [f"# {k}: {json.dumps(v)}" for k, v in (meta or {}).items()]
        lines += [",".join(_fmt(c) for c in row) for row in pts.tolist()]
        return "\n".join(lines) + "\n"
    raise InvalidInputError(f"unknown format {fmt!r}")


def loads_points(text: str, dim: int | None = None) -> tuple[np.ndarray, dict]:
    """Parse a JSON or CSV point file; returns (points, meta)."""
    s = text.lstrip()
    meta: dict = {}
    try:
        if s.startswith("{"):
            doc = json.loads(s)
            if not isinstance(doc, dict) or "points" not in doc:
                raise ParseError("JSON point file needs a 'points' array")
            pts = np.array(doc["points"], dtype=float)
            meta = dict(doc.get("meta") or {})
            if "dim" in doc and pts.size and pts.shape[-1] != doc["dim"]:
                raise ParseError(f"declared dim {doc['dim']} does not match the points")
        else:
            rows = []
            for line in s.splitlines():
                line = line.strip()
                if not line:
                    continue
                if line.startswith("#"):
                    key, _, val = line[1:].partition(":")
                    if val:
                        try:
                            meta[key.strip()] = json.loads(val)
                        except json.JSONDecodeError:
                            meta[key.strip()] = val.strip()
                    continue
                rows.append([float(x) for x in line.replace(";", ",").split(",")])
            pts = np.array(rows, dtype=float)
    except (ValueError, TypeError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot parse point file: {exc}") from exc
    if pts.ndim != 2 or pts.shape[1] not in (2, 3) or len(pts) == 0:
        raise ParseError(f"expected a non-empty list of 2D or 3D points, got shape {pts.shape}")
    if dim is not None and pts.shape[1] != dim:
        raise ParseError(f"expected {dim}D points, got {pts.shape[1]}D")
    if not np.all(np.isfinite(pts)):
        raise ParseError("point coordinates must be finite")
    return pts, meta


def read_points(path, dim: int | None = None) -> tuple[np.ndarray, dict]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(str(exc)) from exc
    return loads_points(text, dim)


def dumps_chain(tc: TriangleChain, meta: dict | None = None) -> str:
    doc = {
        "kind": "triangle-chain",
        "vertices": tc.vertices.tolist(),
        "triangles": tc.triangles.tolist(),
        "p": tc.p,
        "q": tc.q,
    }
    if meta:
        doc["meta"] = meta
    return json.dumps(doc, indent=1) + "\n"


def loads_chain(text: str) -> tuple[TriangleChain, dict]:
    try:
        doc = json.loads(text)
        if doc.get("kind") != "triangle-chain":
            raise ParseError("not a triangle-chain file")
        tc = TriangleChain(np.array(doc["vertices"], dtype=float), np.array(doc["triangles"]), doc["p"], doc["q"])
    except (ValueError, KeyError, TypeError, AttributeError) as exc:
        raise ParseError(f"cannot parse chain file: {exc}") from exc
    return tc, dict(doc.get("meta") or {})


def read_chain(path) -> tuple[TriangleChain, dict]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(str(exc)) from exc
    return loads_chain(text)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    return x


@dataclass
class RunReport:
    """Outcome of one CLI command: echo, parameters, per-instance rows and aggregate."""

    command: str
    parameters: dict
    seed: int | None
    results: list[dict] = field(default_factory=list)
    wall_clock: float = 0.0

    @property
    def violations(self) -> int:
        return sum(1 for r in self.results if not r.get("pass", True))

    def aggregate(self) -> dict:
        ratios = [r["ratio"] for r in self.results if isinstance(r.get("ratio"), (int, float)) and math.isfinite(r["ratio"])]
        return {
            "instances": len(self.results),
            "violations": self.violations,
            "max_ratio": max(ratios) if ratios else None,
        }

    def to_dict(self) -> dict:
        return _jsonable(
            {
                "command": self.command,
                "parameters": self.parameters,
                "seed": self.seed,
                "results": self.results,
                "aggregate": self.aggregate(),
                "wall_clock": self.wall_clock,
            }
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> RunReport:
        rep = cls(d["command"], d["parameters"], d["seed"], list(d["results"]), d.get("wall_clock", 0.0))
        agg = d.get("aggregate")
        if agg is not None and agg.get("violations") != rep.violations:
            raise ParseError("aggregate violation count disagrees with the results")
        return rep

    @classmethod
    def from_json(cls, text: str) -> RunReport:
        try:
            return cls.from_dict(json.loads(text))
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise ParseError(f"cannot parse report: {exc}") from exc

    def to_csv(self) -> str:
        rows = [_jsonable(r) for r in self.results]
        cols: list[str] = []
        for r in rows:
            cols += [k for k in r if k not in cols]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([_cell(r.get(c)) for c in cols])
        return buf.getvalue()


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return _fmt(v)
    if isinstance(v, (list, dict)):
        return json.dumps(v)
    return str(v)
