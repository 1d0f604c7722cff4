"""Vectorised numpy (and scipy.sparse.csgraph) implementations of the kernels."""

from __future__ import annotations

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra


def all_pairs_shortest(indptr, indices, weights, n):
    graph = csr_matrix((weights, indices, indptr), shape=(n, n))
    return dijkstra(graph, directed=True)


def halving_sweep(cum, pts):
    n = pts.shape[0]
    total = cum[n]
    half = 0.5 * total
    seg = np.roll(pts, -1, axis=0) - pts
    dirs = seg / np.diff(cum)[:, None]

    starts = cum[:n]
    bps = np.concatenate(([0.0, half], starts[starts < half], starts[starts >= half] - half))
    bps = np.unique(bps[(bps >= 0.0) & (bps <= half)])
    lo, hi = bps[:-1], bps[1:]
    mid = 0.5 * (lo + hi)
    i = np.clip(np.searchsorted(cum, mid, side="right") - 1, 0, n - 1)
    j = np.clip(np.searchsorted(cum, mid + half, side="right") - 1, 0, n - 1)

    a = pts[i] + (lo - cum[i])[:, None] * dirs[i]
    b = pts[j] + (lo + half - cum[j])[:, None] * dirs[j]
    d0 = b - a
    dv = dirs[j] - dirs[i]
    dv2 = np.einsum("ij,ij->i", dv, dv)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(dv2 > 0.0, -np.einsum("ij,ij->i", d0, dv) / dv2, 0.0)
    t = np.clip(t, 0.0, hi - lo)
    e = d0 + t[:, None] * dv
    d2 = np.einsum("ij,ij->i", e, e)
    k = int(np.argmin(d2))
    return float(np.sqrt(d2[k])), float(lo[k] + t[k])


def coplanar_search(points, eps):
    n = points.shape[0]
    for i in range(n - 3):
        for j in range(i + 1, n - 2):
            d = points[j] - points[i]
            d = d / np.linalg.norm(d)
            a = np.array([1.0, 0.0, 0.0]) if abs(d[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
            e1 = a - np.dot(a, d) * d
            e1 /= np.linalg.norm(e1)
            e2 = np.cross(d, e1)
            v = points[j + 1 :] - points[i]
            comp = v - np.outer(v @ d, d)
            cn = np.linalg.norm(comp, axis=1)
            bad = np.flatnonzero(cn <= eps * np.linalg.norm(v, axis=1))
            if bad.size:
                k = j + 1 + int(bad[0])
                other = next(x for x in range(n) if x not in (i, j, k))
                return np.array([i, j, k, other])
            if v.shape[0] < 2:
                continue
            phi = np.mod(np.arctan2(comp @ e2, comp @ e1), np.pi)
            phi[phi >= np.pi] -= np.pi
            order = np.argsort(phi, kind="stable")
            gaps = np.diff(phi[order])
            hit = np.flatnonzero(gaps <= eps)
            if hit.size:
                t = int(hit[0])
                return np.array([i, j, j + 1 + order[t], j + 1 + order[t + 1]])
            if phi[order[0]] + np.pi - phi[order[-1]] <= eps:
                return np.array([i, j, j + 1 + order[0], j + 1 + order[-1]])
    return np.array([-1, -1, -1, -1])


def origin_plane_search(points, eps):
    n = points.shape[0]
    norms = np.linalg.norm(points, axis=1)
    for i in range(n - 2):
        rest = points[i + 1 :]
        c = np.cross(points[i], rest)
        det = c @ rest.T
        bound = eps * norms[i] * np.outer(norms[i + 1 :], norms[i + 1 :])
        hit = np.argwhere(np.triu(np.abs(det) <= bound, k=1))
        if hit.size:
            j, k = hit[0]
            return np.array([i, i + 1 + int(j), i + 1 + int(k)])
    return np.array([-1, -1, -1])
