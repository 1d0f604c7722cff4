"""Planar chains of triangles crossed by a segment pq, and the zig-zag path through them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DomainError, InvalidChainError, InvalidInputError
from .geometry import DEFAULT_TOL, Tolerance, as_point, as_points, cross2, triangle_angles
from .spanner import dijkstra

# below this angle the bound 1/sin(theta/2) exceeds 1e9 and is treated as divergent
MIN_THETA = 2e-9


@dataclass(frozen=True, eq=False)
class TriangleChain:
    """Triangles T_1..T_k over a shared vertex array, with endpoints p and q.

    ``triangles`` holds vertex indices; ``p`` and ``q`` are vertex indices
    too.  Use ``from_coords`` to build a chain from coordinate triples.
    """

    vertices: np.ndarray
    triangles: np.ndarray
    p: int
    q: int

    def __post_init__(self):
        v = as_points(self.vertices, 2)
        t = np.array(self.triangles, dtype=np.int64).reshape(-1, 3)
        if len(t) < 1:
            raise InvalidInputError("empty chain")
        if t.min() < 0 or t.max() >= len(v):
            raise InvalidInputError("triangle vertex index out of range")
        for a in (v, t):
            a.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "triangles", t)
        object.__setattr__(self, "p", int(self.p))
        object.__setattr__(self, "q", int(self.q))

    @classmethod
    def from_coords(cls, triangles, p, q, digits: int = 12) -> TriangleChain:
        """Build a chain from a (k, 3, 2) coordinate array; equal points share an index."""
        tris = np.asarray(triangles, dtype=float).reshape(-1, 3, 2)
        ids: dict[tuple, int] = {}
        pts: list[np.ndarray] = []

        def idx(x) -> int:
            key = (round(float(x[0]), digits), round(float(x[1]), digits))
            if key not in ids:
                ids[key] = len(pts)
                pts.append(np.asarray(x, dtype=float))
            return ids[key]

        t = [[idx(x) for x in tri] for tri in tris]
        ip, iq = idx(as_point(p, 2)), idx(as_point(q, 2))
        return cls(np.array(pts), np.array(t), ip, iq)

    @property
    def k(self) -> int:
        return len(self.triangles)

    @property
    def pq_length(self) -> float:
        return float(np.linalg.norm(self.vertices[self.q] - self.vertices[self.p]))

    @cached_property
    def edges(self) -> np.ndarray:
        t = self.triangles
        e = np.sort(np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]]), axis=1)
        return np.unique(e, axis=0)

    def normalized(self) -> TriangleChain:
        """Rigid motion taking p to the origin and q onto the positive x-axis."""
        v = self.vertices - self.vertices[self.p]
        d = v[self.q]
        L = float(np.linalg.norm(d))
        if L == 0.0:
            raise InvalidInputError("p and q coincide")
        c, s = d / L
        rot = np.array([[c, s], [-s, c]])
        out = v @ rot.T
        out[self.p] = (0.0, 0.0)
        out[self.q] = (L, 0.0)
        return TriangleChain(out, self.triangles, self.p, self.q)

    def adjacency(self) -> list[list[tuple[int, float]]]:
        adj: list[list[tuple[int, float]]] = [[] for _ in range(len(self.vertices))]
        for u, v in self.edges.tolist():
            w = float(np.linalg.norm(self.vertices[u] - self.vertices[v]))
            adj[u].append((v, w))
            adj[v].append((u, w))
        return adj


@dataclass(frozen=True)
class ChainReport:
    """Results of the four defining conditions of a chain, plus its smallest angle."""

    p_condition: bool
    q_condition: bool
    adjacency_condition: bool
    crossing_condition: bool
    min_angle: float
    messages: list[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return self.p_condition and self.q_condition and self.adjacency_condition and self.crossing_condition


def _interior_crossing(tri: np.ndarray, p: np.ndarray, q: np.ndarray, band: float) -> float:
    """Length of the part of segment pq at distance > band inside the triangle."""
    if cross2(tri[1] - tri[0], tri[2] - tri[0]) < 0:
        tri = tri[[0, 2, 1]]
    lo, hi = 0.0, 1.0
    d = q - p
    for a in range(3):
        u, v = tri[a], tri[(a + 1) % 3]
        e = v - u
        n = float(np.linalg.norm(e))
        # signed distance of p + t d from the edge line, positive inside
        f0 = cross2(e, p - u) / n - band
        f1 = cross2(e, d) / n
        if f1 == 0.0:
            if f0 <= 0.0:
                return 0.0
            continue
        t = -f0 / f1
        if f1 > 0:
            lo = max(lo, t)
        else:
            hi = min(hi, t)
    return max(0.0, hi - lo) * float(np.linalg.norm(d))


def validate_chain(tc: TriangleChain, tol: Tolerance = DEFAULT_TOL) -> ChainReport:
    """Check the four chain conditions and report the minimum corner angle."""
    if tc.k < 2:
        raise InvalidChainError("a chain needs at least two triangles")
    T = [set(t) for t in tc.triangles.tolist()]
    V = tc.vertices
    msgs = []

    c1 = tc.p in T[0] and tc.p not in T[1]
    if not c1:
        msgs.append("p must be a vertex of T_1 and not of T_2")
    c2 = tc.q in T[-1] and tc.q not in T[-2]
    if not c2:
        msgs.append("q must be a vertex of T_k and not of T_(k-1)")

    c3 = True
    for i in range(tc.k - 1):
        common = T[i] & T[i + 1]
        if len(common) != 2:
            c3 = False
            msgs.append(f"T_{i + 1} and T_{i + 2} do not share an edge")
            continue
        u, v = sorted(common)
        (w0,) = T[i] - common
        (w1,) = T[i + 1] - common
        s0 = cross2(V[v] - V[u], V[w0] - V[u])
        s1 = cross2(V[v] - V[u], V[w1] - V[u])
        if s0 * s1 >= 0:
            c3 = False
            msgs.append(f"T_{i + 1} and T_{i + 2} overlap")

    scale = float(np.max(np.abs(V)))
    band = tol.length(scale)
    c4 = True
    for i, tri in enumerate(tc.triangles):
        if _interior_crossing(V[tri], V[tc.p], V[tc.q], band) <= band:
            c4 = False
            msgs.append(f"pq misses the interior of T_{i + 1}")

    angles = np.array([triangle_angles(V[t]) for t in tc.triangles])
    return ChainReport(c1, c2, c3, c4, float(angles.min()), msgs)


@dataclass(frozen=True)
class ChainPath:
    """A path from p to q through chain vertices, in the normalized frame.

    ``crossings[i]`` is the x-coordinate where path edge i meets the
    x-axis; ``groups[i]`` classifies the interval between crossings i and
    i+1, whose apex is path vertex i+1.
    """

    vertices: list[int]
    points: np.ndarray
    crossings: np.ndarray
    groups: list[int]
    X: tuple[float, float, float]

    @property
    def length(self) -> float:
        return float(np.sum(np.linalg.norm(np.diff(self.points, axis=0), axis=1)))


@dataclass(frozen=True)
class ShortcutPath:
    vertices: list[int]
    points: np.ndarray
    removed: list[int]
    group: int

    @property
    def length(self) -> float:
        return float(np.sum(np.linalg.norm(np.diff(self.points, axis=0), axis=1)))


def _side(y: float, band: float) -> int:
    """+1 for on or above the x-axis, -1 for strictly below."""
    return -1 if y < -band else 1


def zigzag_path(tc: TriangleChain, tol: Tolerance = DEFAULT_TOL) -> ChainPath:
    """Alternate across pq, always taking the rightmost edge to the other side."""
    n = tc.normalized()
    V = n.vertices
    band = tol.length(n.pq_length)
    adj = n.adjacency()

    first = [v for v in n.triangles[0].tolist() if v != n.p]
    above = [v for v in first if V[v, 1] > band]
    if above:
        r = above[0] if len(above) == 1 else min(above, key=lambda v: math.atan2(V[v, 1], V[v, 0]))
    else:
        r = min(first, key=lambda v: abs(math.atan2(V[v, 1], V[v, 0])))
    path = [n.p, r]

    for _ in range(len(V) + 1):
        r = path[-1]
        if r == n.q:
            break
        side = _side(V[r, 1], band)
        cand = []
        for v, _w in adj[r]:
            y = V[v, 1]
            if (side < 0 and y >= -band) or (side > 0 and y <= band):
                cand.append((math.atan2(y - V[r, 1], V[v, 0] - V[r, 0]), v))
        if not cand:
            raise InvalidChainError(f"zig-zag path is stuck at vertex {r}")
        nxt = min(cand)[1] if side < 0 else max(cand)[1]
        path.append(nxt)
    else:
        raise InvalidChainError("zig-zag path did not reach q")

    pts = V[path]
    crossings = []
    for a, b in zip(pts[:-1], pts[1:]):
        if a[1] == b[1]:
            crossings.append(a[0] if abs(a[1]) <= band else b[0])
        else:
            crossings.append(a[0] + (0.0 - a[1]) * (b[0] - a[0]) / (b[1] - a[1]))
    c = np.array(crossings)

    groups = [_classify(n, path, i, c, band) for i in range(len(path) - 2)]
    widths = np.diff(c)
    X = tuple(float(widths[[g == j for g in groups]].sum()) if groups else 0.0 for j in (1, 2, 3))
    return ChainPath(path, pts, c, groups, X)


def _classify(n: TriangleChain, path: list[int], i: int, c: np.ndarray, band: float) -> int:
    V = n.vertices
    lo, hi = c[i], c[i + 1]
    own = {frozenset((path[i], path[i + 1])), frozenset((path[i + 1], path[i + 2]))}
    for u, v in n.edges.tolist():
        if frozenset((u, v)) in own:
            continue
        yu, yv = V[u, 1], V[v, 1]
        if min(yu, yv) > band or max(yu, yv) < -band:
            continue
        if abs(yu) <= band and abs(yv) <= band:
            xs = [V[u, 0], V[v, 0]]  # edge along the axis
        elif abs(yu) <= band or abs(yv) <= band:
            w = u if abs(yu) <= band else v
            x = V[w, 0]
            # touching the axis only at an endpoint of the interval is not a crossing
            if abs(x - lo) <= band or abs(x - hi) <= band:
                continue
            xs = [x]
        else:
            xs = [V[u, 0] + (0.0 - yu) * (V[v, 0] - V[u, 0]) / (yv - yu)]
        if any(lo - band <= x <= hi + band for x in xs):
            return 1
    return 2 if V[path[i + 1], 1] >= -band else 3


def shortcut_path(path: ChainPath, tc: TriangleChain | None = None) -> ShortcutPath:
    """Skip the apex of every interval in the lighter of groups 2 and 3.

    Group 2 is short-cut unless X_3 > X_2, in which case group 3 is, which
    is the same as reflecting the chain in the x-axis.
    """
    X1, X2, X3 = path.X
    group = 2 if X3 <= X2 else 3
    removed = []
    for i, g in enumerate(path.groups):
        apex = i + 1
        if g == group and (not removed or removed[-1] != apex - 1):
            removed.append(apex)
    keep = [j for j in range(len(path.vertices)) if j not in set(removed)]
    return ShortcutPath([path.vertices[j] for j in keep], path.points[keep], removed, group)


def graph_shortest(tc: TriangleChain) -> float:
    """Exact shortest p-q distance in the graph of all chain vertices and edges."""
    dist, _ = dijkstra(len(tc.vertices), tc.adjacency(), tc.p)
    return float(dist[tc.q])


def chain_bound(theta: float) -> float:
    """(1 + 1/sin(theta/2)) / 2, the stretch bound for chains with angles >= theta."""
    if not (MIN_THETA <= theta <= math.pi / 3 + 1e-12):
        raise DomainError(f"theta must lie in (0, pi/3], got {theta!r}")
    return 0.5 * (1.0 + 1.0 / math.sin(0.5 * theta))


def zigzag_bound(theta: float) -> float:
    """1/sin(theta/2), the bound for the path before short-cuts."""
    if not (MIN_THETA <= theta <= math.pi / 3 + 1e-12):
        raise DomainError(f"theta must lie in (0, pi/3], got {theta!r}")
    return 1.0 / math.sin(0.5 * theta)


def g_theta(theta):
    """1/sin(theta) - 1/2 - 1/(2 sin(theta/2)); negative on (0, pi/3)."""
    t = np.asarray(theta, dtype=float)
    return 1.0 / np.sin(t) - 0.5 - 0.5 / np.sin(0.5 * t)


def bisector_bound(a, b, c) -> tuple[float, float]:
    """Return (|ab| + |ac|, |bc| / sin(alpha/2)) with alpha the angle at a."""
    a, b, c = as_point(a, 2), as_point(b, 2), as_point(c, 2)
    lhs, rhs = bisector_bounds(a[None], b[None], c[None])
    return float(lhs[0]), float(rhs[0])


def bisector_bounds(a, b, c) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized ``bisector_bound`` over arrays of shape (m, 2)."""
    a, b, c = (np.asarray(x, dtype=float).reshape(-1, 2) for x in (a, b, c))
    u, v = b - a, c - a
    lu, lv = np.linalg.norm(u, axis=1), np.linalg.norm(v, axis=1)
    bc = np.linalg.norm(c - b, axis=1)
    if np.any(lu == 0) or np.any(lv == 0) or np.any(bc == 0):
        raise InvalidInputError("triangle corners must be pairwise distinct")
    alpha = np.arctan2(np.abs(u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]), np.einsum("ij,ij->i", u, v))
    with np.errstate(divide="ignore"):
        rhs = bc / np.sin(0.5 * alpha)
    return lu + lv, rhs
