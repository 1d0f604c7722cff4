"""End-to-end acceptance checks, one test per criterion.

Each test prints a single PASS/FAIL line (shown even under output capture)
and asserts the criterion at its stated tolerance and runtime budget.
"""

from __future__ import annotations

import itertools
import math
import time

import numpy as np
import pytest

from hullspan.annulus import (
    cstar,
    dilation,
    f_ratio,
    f_ratio_derivative,
    fixture_cycle,
    fixture_perimeter,
)
from hullspan.disk_chain import CHAIN_GRAPH_CONSTANT, pair_certificate
from hullspan.generators import annulus_polygon, counterexample_certificate, icosahedron, sphere_points, triangle_chain_gen
from hullspan.geometry import DEFAULT_TOL
from hullspan.hull import convex_hull, validate_assumptions
from hullspan.spanner import skeleton, stretch_factor
from hullspan.triangle_chain import (
    bisector_bounds,
    chain_bound,
    g_theta,
    graph_shortest,
    shortcut_path,
    zigzag_bound,
    zigzag_path,
)

pytestmark = pytest.mark.acceptance

EPS_ABS = DEFAULT_TOL.eps_abs
EPS_REL = DEFAULT_TOL.eps_rel


@pytest.fixture
def verdict(capsys):
    def emit(label: str, ok: bool, detail: str, elapsed: float | None = None, budget: float | None = None) -> None:
        timing = "" if elapsed is None else f" [{elapsed:.2f}s" + ("" if budget is None else f" < {budget:g}s") + "]"
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} {label}: {detail}{timing}")

    return emit


@pytest.fixture(scope="module")
def sphere_sweep():
    """Stretch on 20 seeds x n in {20, 50, 200} and every pair certificate on five n=50 samples."""
    t0 = time.perf_counter()
    rows = []
    for n in (20, 50, 200):
        for seed in range(20):
            P = convex_hull(sphere_points(n, seed=seed))
            rep = validate_assumptions(P, sphere_radius=1.0)
            rows.append((n, seed, P, rep, stretch_factor(skeleton(P)).stretch))
    certs = []
    for _, _, P, _, _ in [r for r in rows if r[0] == 50][:5]:
        dist = skeleton(P).all_pairs()
        for p, q in itertools.combinations(range(P.n_vertices), 2):
            if not P.has_edge(p, q):
                certs.append(pair_certificate(P, p, q, 1.0, skeleton_dist=dist[p, q]))
    return rows, certs, time.perf_counter() - t0


def test_criterion_1_sphere_stretch(sphere_sweep, verdict):
    rows, certs, elapsed = sphere_sweep
    bound = 0.999 * math.pi
    worst = max(r[4] for r in rows)
    hyp = all(r[3].sphere_hypotheses for r in rows)
    chain_fail = [(c.p, c.q, c.failed_links(EPS_REL)) for c in certs if c.failed_links(EPS_REL)]
    ratio = max(c.chain_graph_dist / c.path_length for c in certs)
    ok = hyp and worst <= bound and not chain_fail and elapsed < 60
    verdict(
        "criterion 1 (sphere stretch <= 0.999*pi)",
        ok,
        f"{len(rows)} samples, max stretch {worst:.5f}; {len(certs)} pair chains, "
        f"max chain/path {ratio:.4f} vs {CHAIN_GRAPH_CONSTANT}, {len(chain_fail)} link failures",
        elapsed,
        60,
    )
    assert hyp
    assert worst <= bound
    assert len(certs) > 0 and not chain_fail
    assert elapsed < 60


def test_criterion_2_counterexample(verdict):
    t0 = time.perf_counter()
    ks = [5, 10, 20, 50]
    certs = [counterexample_certificate(k) for k in ks]
    elapsed = time.perf_counter() - t0
    stretches = [c.stretch for c in certs]
    structural = all(c.face_pqr and c.face_pqs and c.rs_not_edge for c in certs)
    lower = all(c.stretch >= c.k for c in certs)
    growing = all(b > a for a, b in zip(stretches, stretches[1:]))
    ok = structural and lower and growing and elapsed < 5
    detail = ", ".join(f"k={c.k}: {c.stretch:.3f}" for c in certs)
    verdict("criterion 2 (counterexample stretch >= k)", ok, detail, elapsed, 5)
    assert structural and lower and growing
    assert elapsed < 5


def test_criterion_3_cstar_tight(verdict):
    t0 = time.perf_counter()
    out = []
    for R in (1.2, 2.0, 4.0):
        d = dilation(cstar(1.0, R, arc_resolution=4096)).dilation
        out.append((R, d, f_ratio(R)))
    elapsed = time.perf_counter() - t0
    ok = all(f - 1e-3 <= d <= f + EPS_ABS for _, d, f in out) and elapsed < 10
    detail = ", ".join(f"R={R}: f-dil={f - d:.2e}" for R, d, f in out)
    verdict("criterion 3 (C* dilation equals f(R) from below)", ok, detail, elapsed, 10)
    for _, d, f in out:
        assert f - 1e-3 <= d <= f + EPS_ABS
    assert elapsed < 10


FIXTURES = [("tangent_chord", {}), ("vee", {}), ("two_tangents", {"tau": 0.0}), ("two_tangents", {"tau": "half"})]


def test_criterion_4_annulus_dilation(verdict):
    t0 = time.perf_counter()
    worst = -math.inf
    bad = []
    fixture_err = 0.0
    for r, R in ((1.0, 1.5), (1.0, 2.0), (1.0, 4.0)):
        f = f_ratio(R / r)
        for seed in range(200):
            C = annulus_polygon(r, R, 3 + seed % 30, seed=seed)
            d = dilation(C).dilation
            worst = max(worst, d - f)
            if d > f + 1e-9:
                bad.append((r, R, seed, d))
        for kind, params in FIXTURES:
            if params.get("tau") == "half":
                params = {"tau": 0.5 * math.asin(r / R)}
            C = fixture_cycle(kind, r, R, **params)
            fixture_err = max(fixture_err, abs(C.perimeter - fixture_perimeter(kind, r, R, **params)))
            d = dilation(C).dilation
            worst = max(worst, d - f)
            if d > f + 1e-9:
                bad.append((r, R, kind, d))
    elapsed = time.perf_counter() - t0
    ok = not bad and fixture_err <= 1e-3 and elapsed < 60
    verdict(
        "criterion 4 (annulus cycles: dilation <= f(R/r))",
        ok,
        f"600 polygons + {3 * len(FIXTURES)} fixtures, max dil-f {worst:.2e}, fixture perimeter error {fixture_err:.2e}",
        elapsed,
        60,
    )
    assert not bad
    assert fixture_err <= 1e-3
    assert elapsed < 60


def test_criterion_5_chain_paths(verdict):
    t0 = time.perf_counter()
    thetas = [math.pi / 12, math.pi / 6, math.pi / 4, 0.99 * math.pi / 3]
    bad = []
    worst = 0.0
    for i in range(500):
        theta = thetas[i % 4]
        tc = triangle_chain_gen(theta, 2 + (i // 4) % 19, seed=i)
        L = tc.pq_length
        zp = zigzag_path(tc)
        sp = shortcut_path(zp, tc)
        best = graph_shortest(tc)
        checks = (
            sp.length <= chain_bound(theta) * L + EPS_ABS,
            zp.length <= zigzag_bound(theta) * L + EPS_ABS,
            sp.length >= best * (1 - EPS_REL),
        )
        worst = max(worst, sp.length / (chain_bound(theta) * L))
        if not all(checks):
            bad.append((i, theta, checks))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 60
    verdict(
        "criterion 5 (short-cut and zig-zag path bounds)",
        ok,
        f"500 chains, max shortcut/bound {worst:.4f}, {len(bad)} failures",
        elapsed,
        60,
    )
    assert not bad
    assert elapsed < 60


def random_triangles(m: int, seed: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Uniform triangles in the unit square, one in ten made isoceles at a."""
    rng = np.random.default_rng(seed)
    a, b, c = (rng.uniform(0, 1, (m, 2)) for _ in range(3))
    iso = rng.random(m) < 0.1
    u = c[iso] - a[iso]
    v = b[iso] - a[iso]
    c[iso] = a[iso] + u / np.linalg.norm(u, axis=1)[:, None] * np.linalg.norm(v, axis=1)[:, None]
    return a, b, c


def test_criterion_6_bisector_inequality(verdict):
    t0 = time.perf_counter()
    a, b, c = random_triangles(100_000, seed=0)
    lhs, rhs = bisector_bounds(a, b, c)
    elapsed = time.perf_counter() - t0
    holds = lhs <= rhs + 1e-9
    equal = np.abs(rhs - lhs) <= 1e-9
    isoceles = np.abs(np.linalg.norm(b - a, axis=1) - np.linalg.norm(c - a, axis=1)) <= 1e-9
    mismatch = np.flatnonzero(equal != isoceles)
    ok = bool(holds.all()) and mismatch.size == 0 and elapsed < 5
    detail = (
        f"inequality holds on {int(holds.sum())}/{holds.size}; "
        f"equality-iff-isoceles mismatches {mismatch.size} (equal {int(equal.sum())}, isoceles {int(isoceles.sum())})"
    )
    verdict("criterion 6 (bisector inequality, equality iff isoceles)", ok, detail, elapsed, 5)
    assert holds.all()
    assert elapsed < 5
    assert mismatch.size == 0, f"first mismatches: {mismatch[:5].tolist()}"


def test_criterion_7_disk_chains(sphere_sweep, verdict):
    _, certs, _ = sphere_sweep
    reports = [c.disk_report for c in certs]
    invalid = [(c.p, c.q, c.disk_report.failures()) for c in certs if not c.disk_report.valid]
    margin = min(r.min_apex_margin for r in reports if r.min_apex_margin is not None)
    ok = not invalid and margin > -EPS_ABS
    verdict(
        "criterion 7 (unfolded chains are disk chains)",
        ok,
        f"{len(reports)} chains, {len(invalid)} invalid, min apex margin {margin:.3e}",
    )
    assert not invalid
    assert margin > -EPS_ABS


def test_criterion_8_monotonicity(verdict):
    x = np.linspace(1.0, 100.0, 10_001)[1:]
    fp = f_ratio_derivative(x)
    th = np.linspace(0.01, math.pi / 3 - 0.01, 10_000)
    g = g_theta(th)
    ok = bool(np.all(fp > 0) and np.all(g < 0))
    verdict(
        "criterion 8 (f increasing, g negative)",
        ok,
        f"min f' {fp.min():.3e} on (1, 100]; max g {g.max():.4f} on (0.01, pi/3-0.01)",
    )
    assert np.all(fp > 0)
    assert np.all(g < 0)


def shell_checks(P, theta_cap: float = math.pi / 3):
    """(asserted, stretch, bound) for a hull in its tightest shell about the origin."""
    rep = validate_assumptions(P)
    r, R = rep.shell_fit
    theta = min(rep.min_face_angle, theta_cap)
    rep = validate_assumptions(P, shell=(r, R))
    if not (r > 0 and rep.shell_hypotheses(theta)):
        return False, math.nan, math.nan
    st = stretch_factor(skeleton(P)).stretch
    return True, st, chain_bound(theta) * f_ratio(R / r)


def test_criterion_9_shell_bound(sphere_sweep, verdict):
    P = convex_hull(icosahedron(1.0))
    rep = validate_assumptions(P)
    r, R = rep.shell_fit
    theta = math.pi / 3 - 1e-9
    shell = validate_assumptions(P, shell=(r, R))
    asserted = shell.shell_hypotheses(theta)
    st = stretch_factor(skeleton(P)).stretch
    bound = chain_bound(theta) * f_ratio(R / r)
    rows, _, _ = sphere_sweep
    extra = [shell_checks(row[2]) for row in rows[:20]]
    extra_bad = [e for e in extra if e[0] and not e[1] <= e[2]]
    ok = asserted and st <= bound and not extra_bad
    verdict(
        "criterion 9 (shell bound)",
        ok,
        f"icosahedron r={r:.5f} R={R:g} stretch {st:.4f} <= {bound:.4f}; "
        f"{sum(e[0] for e in extra)} sphere samples also checked",
    )
    assert asserted
    assert st <= bound
    assert not extra_bad


def test_bisector_equality_mismatches_are_explained_by_the_gap_identity():
    # Companion to criterion 6: every mismatch is a triangle whose gap
    # (b-c)^2 cot^2(alpha/2) / (lhs + rhs) falls below 1e-9 without b = c.
    a, b, c = random_triangles(100_000, seed=0)
    lhs, rhs = bisector_bounds(a, b, c)
    ab, ac = np.linalg.norm(b - a, axis=1), np.linalg.norm(c - a, axis=1)
    equal = np.abs(rhs - lhs) <= 1e-9
    isoceles = np.abs(ab - ac) <= 1e-9
    assert not np.any(isoceles & ~equal)
    odd = equal & ~isoceles
    u, v = b - a, c - a
    alpha = np.arctan2(np.abs(u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]), np.einsum("ij,ij->i", u, v))
    pred = (ab - ac) ** 2 / np.tan(0.5 * alpha) ** 2 / (lhs + rhs)
    assert np.all(pred[odd] <= 1e-9 + 1e-12)
    assert np.allclose(pred[odd], (rhs - lhs)[odd], rtol=1e-4, atol=1e-15)
