"""Skeleton graphs, shortest paths and exact stretch factors."""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import kernels
from .errors import InvalidInputError, UnreachableError
from .geometry import DEFAULT_TOL, Tolerance, as_points
from .hull import Polyhedron


def dijkstra(n: int, adj: list[list[tuple[int, float]]], source: int) -> tuple[np.ndarray, np.ndarray]:
    """Single-source shortest paths on a small adjacency-list graph.

    Returns ``(dist, pred)``; ``pred[v] == -1`` for the source and for
    unreachable vertices.
    """
    dist = np.full(n, np.inf)
    pred = np.full(n, -1, dtype=np.int64)
    dist[source] = 0.0
    heap = [(0.0, source)]
    done = np.zeros(n, dtype=bool)
    while heap:
        d, u = heapq.heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for v, w in adj[u]:
            nd = d + w
            if nd < dist[v]:
                dist[v] = nd
                pred[v] = u
                heapq.heappush(heap, (nd, v))
    return dist, pred


def _walk_back(pred: np.ndarray, source: int, target: int) -> list[int]:
    path = [target]
    while path[-1] != source:
        path.append(int(pred[path[-1]]))
    return path[::-1]


@dataclass(frozen=True, eq=False)
class SkeletonGraph:
    """Undirected geometric graph with Euclidean edge weights."""

    positions: np.ndarray
    edges: np.ndarray
    weights: np.ndarray = field(init=False)

    def __post_init__(self):
        pos = as_points(self.positions)
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if edges.size and (edges.min() < 0 or edges.max() >= len(pos)):
            raise InvalidInputError("edge endpoint out of range")
        w = np.linalg.norm(pos[edges[:, 0]] - pos[edges[:, 1]], axis=1)
        if np.any(w <= 0.0):
            raise InvalidInputError("zero-length edge")
        for a in (pos, edges, w):
            a.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "weights", w)

    @property
    def n(self) -> int:
        return len(self.positions)

    @cached_property
    def adjacency(self) -> list[list[tuple[int, float]]]:
        adj: list[list[tuple[int, float]]] = [[] for _ in range(self.n)]
        for (u, v), w in zip(self.edges.tolist(), self.weights.tolist()):
            adj[u].append((v, w))
            adj[v].append((u, w))
        return adj

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Symmetric CSR arrays ``(indptr, indices, weights)``."""
        src = np.concatenate([self.edges[:, 0], self.edges[:, 1]])
        dst = np.concatenate([self.edges[:, 1], self.edges[:, 0]])
        w = np.concatenate([self.weights, self.weights])
        order = np.lexsort((dst, src))
        src, dst, w = src[order], dst[order], w[order]
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.add.at(indptr, src + 1, 1)
        return np.cumsum(indptr), np.ascontiguousarray(dst), np.ascontiguousarray(w)

    def all_pairs(self) -> np.ndarray:
        indptr, indices, w = self.csr
        return np.asarray(kernels.all_pairs_shortest(indptr, indices, w, self.n))

    def is_connected(self) -> bool:
        dist, _ = dijkstra(self.n, self.adjacency, 0)
        return bool(np.all(np.isfinite(dist)))


@dataclass(frozen=True)
class StretchReport:
    stretch: float
    witness: tuple[int, int]
    graph_dist: float
    eucl_dist: float
    table: np.ndarray | None = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict:
        return {
            "stretch": self.stretch,
            "witness": list(self.witness),
            "graph_dist": self.graph_dist,
            "eucl_dist": self.eucl_dist,
        }


def skeleton(P: Polyhedron) -> SkeletonGraph:
    return SkeletonGraph(P.points, P.edges)


def shortest_path(G: SkeletonGraph, p: int, q: int) -> tuple[float, list[int]]:
    if not (0 <= p < G.n and 0 <= q < G.n):
        raise InvalidInputError(f"vertex out of range: {p}, {q}")
    dist, pred = dijkstra(G.n, G.adjacency, p)
    if not np.isfinite(dist[q]):
        raise UnreachableError(f"no path between {p} and {q}")
    return float(dist[q]), _walk_back(pred, p, q)


def _report(dist: np.ndarray, eucl: np.ndarray, tol: Tolerance, full_table: bool) -> StretchReport:
    n = len(dist)
    iu = np.triu_indices(n, k=1)
    if np.any(eucl[iu] <= 0.0):
        raise InvalidInputError("coincident vertex positions")
    if not np.all(np.isfinite(dist[iu])):
        raise UnreachableError("graph is not connected")
    ratio = np.ones_like(dist)
    ratio[iu] = dist[iu] / eucl[iu]
    ratio.T[iu] = ratio[iu]
    best = float(ratio[iu].max())
    # lexicographically smallest pair among those within eps_rel of the maximum
    hits = np.argwhere(np.triu(ratio >= best * (1.0 - tol.eps_rel), k=1))
    i, j = (int(x) for x in hits[0])
    return StretchReport(
        stretch=float(ratio[i, j]),
        witness=(i, j),
        graph_dist=float(dist[i, j]),
        eucl_dist=float(eucl[i, j]),
        table=ratio if full_table else None,
    )


def pairwise_distances(pos: np.ndarray) -> np.ndarray:
    diff = pos[:, None, :] - pos[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def stretch_factor(G: SkeletonGraph, full_table: bool = False, tol: Tolerance = DEFAULT_TOL) -> StretchReport:
    """Exact stretch factor: max over vertex pairs of graph / Euclidean distance."""
    if G.n < 2:
        raise InvalidInputError("need at least two vertices")
    return _report(G.all_pairs(), pairwise_distances(G.positions), tol, full_table)


def check_convex_ccw(vertices, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Return the vertices as an array after checking convexity and orientation."""
    v = as_points(vertices, 2)
    if len(v) < 3:
        raise InvalidInputError("a polygon needs at least 3 vertices")
    e = np.roll(v, -1, axis=0) - v
    lens = np.linalg.norm(e, axis=1)
    if np.any(lens <= 0.0):
        raise InvalidInputError("repeated consecutive vertex")
    turn = e[:, 0] * np.roll(e, -1, axis=0)[:, 1] - e[:, 1] * np.roll(e, -1, axis=0)[:, 0]
    band = tol.eps_abs * lens * np.roll(lens, -1)
    if np.any(turn < -band):
        raise InvalidInputError("polygon is not convex and counterclockwise")
    area2 = float(np.sum(v[:, 0] * np.roll(v[:, 1], -1) - np.roll(v[:, 0], -1) * v[:, 1]))
    if area2 <= 0.0:
        raise InvalidInputError("polygon is not counterclockwise")
    # total turning of a simple convex polygon is exactly one revolution
    ang = np.arctan2(turn, np.einsum("ij,ij->i", e, np.roll(e, -1, axis=0)))
    if abs(ang.sum() - 2 * np.pi) > 1e-6:
        raise InvalidInputError("polygon winds more than once")
    return v


def polygon_cycle_stretch(vertices, full_table: bool = False, tol: Tolerance = DEFAULT_TOL) -> StretchReport:
    """Stretch factor of the boundary cycle of a convex polygon over its vertex pairs."""
    v = check_convex_ccw(vertices, tol)
    lens = np.linalg.norm(np.roll(v, -1, axis=0) - v, axis=1)
    cum = np.concatenate(([0.0], np.cumsum(lens)))
    per = cum[-1]
    along = np.abs(cum[:-1, None] - cum[None, :-1])
    dist = np.minimum(along, per - along)
    return _report(dist, pairwise_distances(v), tol, full_table)
