"""Compare the numba and numpy kernel backends on representative inputs.

Run with ``python3 benchmarks/bench_kernels.py [--repeat N]``.  Each kernel
is called once to warm up (which triggers numba compilation), then timed
``repeat`` times; the best wall time is reported together with a check
that both backends returned the same answer.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from hullspan.annulus import cstar
from hullspan.generators import sphere_points
from hullspan.hull import convex_hull
from hullspan.kernels import backends
from hullspan.spanner import skeleton


def _best(fn, args, repeat: int) -> tuple[float, object]:
    out = fn(*args)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def _same(a, b) -> bool:
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return bool(np.allclose(np.asarray(a, dtype=float), np.asarray(b, dtype=float), rtol=1e-12, atol=1e-12))


def cases():
    for n in (200, 1000):
        G = skeleton(convex_hull(sphere_points(n, seed=1, validate=False)))
        indptr, indices, w = G.csr
        yield f"all_pairs_shortest n={n}", "all_pairs_shortest", (indptr, indices, w, G.n)
    for res in (4096, 32768):
        C = cstar(1.0, 2.0, arc_resolution=res)
        yield f"halving_sweep m={C.n}", "halving_sweep", (np.ascontiguousarray(C.cum), np.ascontiguousarray(C.vertices))
    for n in (100, 300):
        pts = np.ascontiguousarray(convex_hull(sphere_points(n, seed=2)).points)
        yield f"coplanar_search n={n}", "coplanar_search", (pts, 1e-9)
        yield f"origin_plane_search n={n}", "origin_plane_search", (pts, 1e-9)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    impls = backends()
    names = sorted(impls)
    print(f"{'case':32s}" + "".join(f"{b:>12s}" for b in names) + "   speedup  agree")
    for label, kernel, kargs in cases():
        times, outs = {}, {}
        for b in names:
            times[b], outs[b] = _best(getattr(impls[b], kernel), kargs, args.repeat)
        row = f"{label:32s}" + "".join(f"{times[b] * 1e3:10.2f}ms" for b in names)
        if "numba" in times:
            row += f"  {times['numpy'] / times['numba']:7.1f}x  {_same(outs['numpy'], outs['numba'])}"
        print(row)


if __name__ == "__main__":
    main()
