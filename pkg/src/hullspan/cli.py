"""Command-line front end.

Exit codes: 0 when every check passes, 1 when a bound is violated or an
instance could not be generated, 2 for unreadable or invalid input.
"""

from __future__ import annotations

import argparse
import itertools
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .annulus import Annulus, ConvexCycle, annulus_check, dilation, f_ratio
from .disk_chain import SPHERE_STRETCH_BOUND, pair_certificate
from .errors import GenerationError, HullspanError, InvalidInputError
from .generators import (
    annulus_polygon,
    counterexample_certificate,
    counterexample_points,
    sphere_points,
    triangle_chain_gen,
)
from .geometry import Tolerance
from .hull import convex_hull, validate_assumptions
from .io import RunReport, dumps_chain, dumps_points, read_chain, read_points
from .spanner import polygon_cycle_stretch, skeleton, stretch_factor
from .triangle_chain import chain_bound, graph_shortest, shortcut_path, validate_chain, zigzag_bound, zigzag_path

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


def _default_seed() -> int:
    env = os.environ.get("HULLSPAN_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise SystemExit(f"HULLSPAN_SEED must be an integer, got {env!r}")


def trial_seed(seed: int, trial: int) -> int:
    """Independent 64-bit seed for one trial of a sweep."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(trial),))
    return int(ss.generate_state(1, np.uint64)[0])


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="64-bit seed (default: $HULLSPAN_SEED or 0)")
    common.add_argument("--tolerance", type=float, default=1e-9, help="absolute tolerance eps_abs")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", type=Path, default=None, help="write here instead of stdout")

    ap = argparse.ArgumentParser(prog="hullspan", description="Stretch factors of convex polyhedra and dilation of convex cycles.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="hull, assumptions and stretch factor of a 3D point file")
    a.add_argument("input", type=Path)
    a.add_argument("--sphere-radius", type=float, default=None, help="radius to test (default: largest vertex norm)")
    a.add_argument("--r", type=float, default=None, help="inner shell radius")
    a.add_argument("--R", type=float, default=None, help="outer shell radius")
    a.add_argument("--theta", type=float, default=None, help="minimum face angle in radians")

    g = sub.add_parser("gen", parents=[common], help="write a generated instance")
    g.add_argument("family", choices=("sphere", "counterexample", "annulus-polygon", "triangle-chain"))
    g.add_argument("--n", type=int, default=None)
    g.add_argument("--k", type=int, default=None)
    g.add_argument("--r", type=float, default=1.0)
    g.add_argument("--R", type=float, default=2.0)
    g.add_argument("--theta", type=float, default=math.pi / 6)

    v = sub.add_parser("verify", parents=[common], help="run a randomized verification sweep")
    v.add_argument("suite", choices=("sphere-bound", "annulus-dilation", "triangle-chain", "disk-chain", "counterexample"))
    v.add_argument("--trials", type=int, default=10)
    v.add_argument("--n", type=int, default=None)
    v.add_argument("--k", type=_int_list, default=None, help="comma-separated k values or a chain length target")
    v.add_argument("--r", type=float, default=1.0)
    v.add_argument("--R", type=float, default=2.0)
    v.add_argument("--theta", type=float, default=math.pi / 6)

    d = sub.add_parser("dilation", parents=[common], help="dilation of a convex 2D cycle file")
    d.add_argument("input", type=Path)
    d.add_argument("--r", type=float, default=None)
    d.add_argument("--R", type=float, default=None)
    d.add_argument("--arc-resolution", type=int, default=None, help="recorded with the report")

    c = sub.add_parser("chain", parents=[common], help="zig-zag and short-cut paths of a triangle-chain file")
    c.add_argument("input", type=Path)
    c.add_argument("--theta", type=float, default=None, help="angle for the bound (default: the chain's minimum)")
    return ap


def _params(args: argparse.Namespace) -> dict:
    skip = {"command", "output", "format", "seed"}
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in skip:
            continue
        out[k] = str(v) if isinstance(v, Path) else v
    return out


def cmd_analyze(args, tol: Tolerance) -> RunReport:
    pts, meta = read_points(args.input, dim=3)
    P = convex_hull(pts, tol)
    radius = args.sphere_radius if args.sphere_radius is not None else float(np.max(np.linalg.norm(P.points, axis=1)))
    shell = (args.r, args.R) if args.r is not None and args.R is not None else None
    rep = validate_assumptions(P, sphere_radius=radius, shell=shell, tol=tol)
    st = stretch_factor(skeleton(P), tol=tol)
    row = {
        "vertices": P.n_vertices,
        "faces": len(P.faces),
        "stretch": st.stretch,
        "witness": list(st.witness),
        "ratio": st.stretch,
        "assumptions": rep.to_dict(),
        "checks": {},
        "pass": True,
    }
    if rep.sphere_hypotheses:
        ok = st.stretch <= SPHERE_STRETCH_BOUND
        row["checks"]["sphere_bound"] = {"bound": SPHERE_STRETCH_BOUND, "pass": ok}
        row["pass"] &= ok
    else:
        why = "off sphere" if not rep.on_sphere else "not in general position"
        row["checks"]["sphere_bound"] = {"asserted": False, "reason": why}
    if shell is not None and args.theta is not None:
        if rep.shell_hypotheses(args.theta):
            bound = chain_bound(args.theta) * f_ratio(args.R / args.r)
            ok = st.stretch <= bound
            row["checks"]["shell_bound"] = {"bound": bound, "pass": ok}
            row["pass"] &= ok
        else:
            row["checks"]["shell_bound"] = {"asserted": False, "reason": "shell hypotheses not met"}
    return RunReport("analyze", _params(args), None, [row])


def cmd_gen(args, tol: Tolerance) -> tuple[RunReport, str]:
    seed = args.seed
    meta = {"family": args.family, "seed": seed}
    if args.family == "sphere":
        n = args.n or 100
        meta["n"] = n
        text = dumps_points(sphere_points(n, seed=seed, tol=tol), meta, args.format)
    elif args.family == "counterexample":
        k = args.k or 10
        meta["k"] = k
        text = dumps_points(counterexample_points(k), meta, args.format)
    elif args.family == "annulus-polygon":
        n = args.n or 32
        meta.update(n=n, r=args.r, R=args.R)
        text = dumps_points(annulus_polygon(args.r, args.R, n, seed=seed).vertices, meta, args.format)
    else:
        k = args.k or 8
        meta.update(theta=args.theta, target_k=k)
        text = dumps_chain(triangle_chain_gen(args.theta, k, seed=seed, tol=tol), meta)
    return RunReport("gen", _params(args), seed, [dict(meta, **{"pass": True})]), text


def _sphere_row(trial: int, seed: int, n: int, tol: Tolerance) -> dict:
    P = convex_hull(sphere_points(n, seed=seed, tol=tol), tol)
    st = stretch_factor(skeleton(P), tol=tol)
    ok = st.stretch <= SPHERE_STRETCH_BOUND
    return {"trial": trial, "seed": seed, "n": n, "stretch": st.stretch, "ratio": st.stretch, "bound": SPHERE_STRETCH_BOUND, "pass": ok}


def _disk_row(trial: int, seed: int, n: int, tol: Tolerance) -> dict:
    P = convex_hull(sphere_points(n, seed=seed, tol=tol), tol)
    dist = skeleton(P).all_pairs()
    pairs = bad = 0
    worst = 0.0
    margin = math.inf
    for p, q in itertools.combinations(range(P.n_vertices), 2):
        if P.has_edge(p, q):
            continue
        cert = pair_certificate(P, p, q, 1.0, tol, skeleton_dist=dist[p, q])
        pairs += 1
        if cert.failed_links() or not cert.disk_report.valid:
            bad += 1
        worst = max(worst, cert.chain_graph_dist / cert.path_length)
        margin = min(margin, cert.disk_report.min_apex_margin)
    return {"trial": trial, "seed": seed, "n": n, "pairs": pairs, "failures": bad, "ratio": worst, "min_apex_margin": margin, "pass": bad == 0}


def _annulus_row(trial: int, seed: int, n: int, r: float, R: float) -> dict:
    C = annulus_polygon(r, R, n, seed=seed)
    dil = dilation(C).dilation
    bound = f_ratio(R / r)
    vs = polygon_cycle_stretch(C.vertices).stretch
    ok = dil <= bound + 1e-9 and vs <= dil * (1 + 1e-12) and annulus_check(C, Annulus(r, R)).passed
    return {"trial": trial, "seed": seed, "vertices": C.n, "dilation": dil, "vertex_stretch": vs, "ratio": dil, "bound": bound, "pass": ok}


def _chain_row(trial: int, seed: int, theta: float, k: int, tol: Tolerance) -> dict:
    tc = triangle_chain_gen(theta, k, seed=seed, tol=tol)
    return dict(_chain_checks(tc, theta, tol), trial=trial, seed=seed)


def _chain_checks(tc, theta: float, tol: Tolerance) -> dict:
    L = tc.pq_length
    zp = zigzag_path(tc, tol)
    sp = shortcut_path(zp, tc)
    best = graph_shortest(tc)
    ok = (
        sp.length <= chain_bound(theta) * L + tol.eps_abs
        and zp.length <= zigzag_bound(theta) * L + tol.eps_abs
        and sp.length >= best * (1 - 1e-12)
    )
    return {
        "k": tc.k,
        "pq": L,
        "zigzag": zp.length,
        "shortcut": sp.length,
        "graph": best,
        "ratio": sp.length / L,
        "bound": chain_bound(theta),
        "X": list(zp.X),
        "path": zp.vertices,
        "shortcut_path": sp.vertices,
        "pass": ok,
    }


def cmd_verify(args, tol: Tolerance) -> RunReport:
    seed = args.seed
    rep = RunReport("verify", _params(args), seed)
    if args.suite == "counterexample":
        for k in args.k or [5, 10, 20]:
            cert = counterexample_certificate(k, tol=tol)
            rep.results.append(dict(cert.to_dict(), ratio=cert.stretch / k, **{"pass": cert.ok}))
        return rep
    for i in range(args.trials):
        s = trial_seed(seed, i)
        if args.suite == "sphere-bound":
            row = _sphere_row(i, s, args.n or 50, tol)
        elif args.suite == "disk-chain":
            row = _disk_row(i, s, args.n or 20, tol)
        elif args.suite == "annulus-dilation":
            row = _annulus_row(i, s, args.n or 32, args.r, args.R)
        else:
            row = _chain_row(i, s, args.theta, (args.k or [8])[0], tol)
        rep.results.append(row)
    return rep


def cmd_dilation(args, tol: Tolerance) -> RunReport:
    pts, meta = read_points(args.input, dim=2)
    C = ConvexCycle(pts, args.arc_resolution)
    d = dilation(C, tol)
    row = dict(d.to_dict(), ratio=d.dilation, vertices=C.n, **{"pass": True})
    if args.r is not None and args.R is not None:
        ann = Annulus(args.r, args.R)
        inside = annulus_check(C, ann, tol).passed
        bound = f_ratio(args.R / args.r)
        row["bound"] = bound
        row["in_annulus"] = inside
        if inside:
            row["pass"] = d.dilation <= bound + tol.eps_abs
    return RunReport("dilation", _params(args), None, [row])


def cmd_chain(args, tol: Tolerance) -> RunReport:
    tc, meta = read_chain(args.input)
    vr = validate_chain(tc, tol)
    if not vr.valid:
        raise InvalidInputError("; ".join(vr.messages))
    theta = args.theta if args.theta is not None else min(vr.min_angle, math.pi / 3)
    row = dict(_chain_checks(tc, theta, tol), min_angle=vr.min_angle, theta=theta)
    return RunReport("chain", _params(args), None, [row])


def _emit(text: str, output: Path | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        output.write_text(text)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.seed is None:
        args.seed = _default_seed()
    start = time.perf_counter()
    try:
        tol = Tolerance(eps_abs=args.tolerance)
        if args.command == "gen":
            rep, text = cmd_gen(args, tol)
            _emit(text, args.output)
            return EXIT_OK
        handler = {"analyze": cmd_analyze, "verify": cmd_verify, "dilation": cmd_dilation, "chain": cmd_chain}
        rep = handler[args.command](args, tol)
    except GenerationError as exc:
        print(f"hullspan: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except (InvalidInputError, ValueError) as exc:
        print(f"hullspan: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except HullspanError as exc:
        print(f"hullspan: {exc}", file=sys.stderr)
        return EXIT_INPUT
    rep.wall_clock = time.perf_counter() - start
    _emit(rep.to_csv() if args.format == "csv" else rep.to_json(), args.output)
    return EXIT_VIOLATION if rep.violations else EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
