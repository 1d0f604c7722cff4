"""Edge-unfolding of crossed faces, chains of disks and the arc/chord graph on them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cross_section import CrossSection, great_arc, section
from .errors import DegenerateError, InvalidChainError, InvalidInputError
from .geometry import DEFAULT_TOL, Tolerance, as_point, circumcircle2d, cross2, unfold_point
from .hull import Polyhedron
from .spanner import dijkstra, shortest_path, skeleton

# constant of the known bound for shortest paths in the arc/chord graph of a chain of disks
CHAIN_GRAPH_CONSTANT = 1.998
# stretch bound for hulls of points on a sphere: 1.998 * pi / 2
SPHERE_STRETCH_BOUND = CHAIN_GRAPH_CONSTANT * math.pi / 2
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, eq=False)
class TriangleChain2D:
    """Planar triangles T'_1..T'_k glued along shared edges.

    ``labels[i]`` names the corners of triangle i (polyhedron vertex ids
    for unfolded chains); when absent, corners are matched by coordinates.
    ``path`` is the unfolded cross-section path from p' to q' if known.
    """

    triangles: np.ndarray
    p: np.ndarray
    q: np.ndarray
    labels: np.ndarray | None = None
    source_map: list[int] | None = None
    path: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        tris = np.array(self.triangles, dtype=float)
        if tris.ndim != 3 or tris.shape[1:] != (3, 2):
            raise InvalidInputError("triangles must have shape (k, 3, 2)")
        if len(tris) < 2:
            raise InvalidChainError("a chain needs at least two triangles")
        object.__setattr__(self, "triangles", tris)
        object.__setattr__(self, "p", as_point(self.p, 2))
        object.__setattr__(self, "q", as_point(self.q, 2))
        if self.labels is None:
            object.__setattr__(self, "labels", _labels_by_position(tris))
        else:
            object.__setattr__(self, "labels", np.array(self.labels, dtype=np.int64).reshape(-1, 3))
        if self.path is not None:
            object.__setattr__(self, "path", np.array(self.path, dtype=float).reshape(-1, 2))

    @property
    def k(self) -> int:
        return len(self.triangles)

    def shared(self, i: int) -> tuple[int, int]:
        """Corner indices in triangle i of the edge shared with triangle i+1."""
        common = [c for c in range(3) if self.labels[i, c] in self.labels[i + 1]]
        if len(common) != 2:
            raise InvalidChainError(f"triangles {i} and {i + 1} do not share an edge")
        return common[0], common[1]

    @property
    def shared_edges(self) -> np.ndarray:
        out = np.empty((self.k - 1, 2, 2))
        for i in range(self.k - 1):
            a, b = self.shared(i)
            out[i] = self.triangles[i, [a, b]]
        return out

    def apex(self, i: int) -> int:
        """Corner index in triangle i (i >= 1) not on the edge shared with i-1."""
        return next(c for c in range(3) if self.labels[i, c] not in self.labels[i - 1])

    def check(self, tol: Tolerance = DEFAULT_TOL) -> None:
        """Raise if consecutive triangles do not meet along one edge with disjoint interiors."""
        scale = float(np.max(np.abs(self.triangles)))
        for i in range(self.k - 1):
            a, b = self.shared(i)
            ua, ub = self.triangles[i, a], self.triangles[i, b]
            ja = int(np.flatnonzero(self.labels[i + 1] == self.labels[i, a])[0])
            jb = int(np.flatnonzero(self.labels[i + 1] == self.labels[i, b])[0])
            if max(np.linalg.norm(self.triangles[i + 1, ja] - ua), np.linalg.norm(self.triangles[i + 1, jb] - ub)) > tol.length(scale):
                raise InvalidChainError(f"shared edge {i} is placed differently in its two triangles")
            w0 = self.triangles[i, 3 - a - b]
            w1 = self.triangles[i + 1, self.apex(i + 1)]
            s0, s1 = cross2(ub - ua, w0 - ua), cross2(ub - ua, w1 - ua)
            if s0 * s1 >= 0:
                raise InvalidChainError(f"triangles {i} and {i + 1} overlap")


def _labels_by_position(tris: np.ndarray, digits: int = 9) -> np.ndarray:
    ids: dict[tuple, int] = {}
    out = np.empty(tris.shape[:2], dtype=np.int64)
    for i, tri in enumerate(tris):
        for c, pt in enumerate(tri):
            key = (round(float(pt[0]), digits), round(float(pt[1]), digits))
            out[i, c] = ids.setdefault(key, len(ids))
    return out


def unfold(P: Polyhedron, cs: CrossSection, tol: Tolerance = DEFAULT_TOL) -> TriangleChain2D:
    """Unfold the faces crossed by the section path into the plane.

    p' is placed at the origin with the next corner of T'_1 on the positive
    x-axis; every later triangle is hinged onto the side of the shared edge
    opposite its predecessor.
    """
    faces = cs.face_sequence
    if len(faces) < 2:
        raise InvalidChainError("unfolding needs a face sequence of length at least 2")
    F = [P.faces[f].tolist() for f in faces]
    shared = []
    for i in range(len(F) - 1):
        s = sorted(set(F[i]) & set(F[i + 1]))
        if len(s) != 2:
            raise InvalidChainError(f"faces {faces[i]} and {faces[i + 1]} are not adjacent")
        shared.append(tuple(s))
    crossed = [e for e, _ in cs.crossed_edges()]
    if crossed != shared:
        raise InvalidChainError("crossed edges do not match the shared edges of the face sequence")

    X = P.points
    p = cs.p
    if p not in F[0] or p in shared[0]:
        raise InvalidChainError("p must be the corner of T_1 opposite its first shared edge")
    x, y = shared[0]
    pos: list[dict[int, np.ndarray]] = []
    first = {p: np.zeros(2), x: np.array([np.linalg.norm(X[x] - X[p]), 0.0])}
    first[y] = unfold_point((first[p], first[x]), (X[p], X[x]), X[y], "left", tol)
    pos.append(first)
    for i in range(1, len(F)):
        u, v = shared[i - 1]
        prev = pos[-1]
        w_prev = next(c for c in F[i - 1] if c not in (u, v))
        w = next(c for c in F[i] if c not in (u, v))
        side = "right" if cross2(prev[v] - prev[u], prev[w_prev] - prev[u]) > 0 else "left"
        cur = {u: prev[u], v: prev[v]}
        cur[w] = unfold_point((prev[u], prev[v]), (X[u], X[v]), X[w], side, tol)
        pos.append(cur)

    q = cs.q
    if q not in F[-1]:
        raise InvalidChainError("q must be a corner of the last face")
    path = [pos[0][p]]
    for i, ((u, v), t) in enumerate(cs.crossed_edges()):
        a, b = pos[i][u], pos[i][v]
        path.append(a + t * (b - a))
    path.append(pos[-1][q])
    path = np.array(path)

    plen = float(np.sum(np.linalg.norm(np.diff(path, axis=0), axis=1)))
    scale = float(np.max(np.linalg.norm(X, axis=1)))
    if abs(plen - cs.path_length) > len(F) * tol.length(scale):
        raise DegenerateError(f"unfolded path length {plen!r} differs from {cs.path_length!r}")

    tris = np.array([[pos[i][c] for c in F[i]] for i in range(len(F))])
    return TriangleChain2D(tris, path[0], path[-1], labels=np.array(F), source_map=list(faces), path=path)


@dataclass(frozen=True, eq=False)
class DiskChain:
    """Disks D_1..D_k with endpoints p' on the first and q' on the last circle."""

    centers: np.ndarray
    radii: np.ndarray
    p: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        c = np.array(self.centers, dtype=float).reshape(-1, 2)
        r = np.array(self.radii, dtype=float).reshape(-1)
        if len(c) != len(r):
            raise InvalidInputError("centers and radii differ in length")
        if len(c) < 2:
            raise InvalidChainError("a chain of disks needs at least two disks")
        if np.any(r <= 0) or not np.all(np.isfinite(r)):
            raise InvalidInputError("radii must be positive and finite")
        object.__setattr__(self, "centers", c)
        object.__setattr__(self, "radii", r)
        object.__setattr__(self, "p", as_point(self.p, 2))
        object.__setattr__(self, "q", as_point(self.q, 2))

    @property
    def k(self) -> int:
        return len(self.radii)

    @property
    def scale(self) -> float:
        return float(max(self.radii.max(), np.abs(self.centers).max()))


def circumdisk_chain(tc: TriangleChain2D, tol: Tolerance = DEFAULT_TOL) -> DiskChain:
    disks = [circumcircle2d(*tri, tol=tol) for tri in tc.triangles]
    return DiskChain(np.array([c for c, _ in disks]), np.array([r for _, r in disks]), tc.p, tc.q)


def _half_angle(d: float, r: float, r_other: float, band: float) -> float:
    """Half-angle, seen from the center of radius r, of its circle's overlap with the other."""
    if r + r_other - d <= band:
        return 0.0  # externally tangent (or apart)
    if d - abs(r - r_other) <= band:
        return 0.0 if r_other < r else math.pi  # internally tangent (or nested)
    c = (d * d + r * r - r_other * r_other) / (2.0 * d * r)
    return math.acos(min(1.0, max(-1.0, c)))


def _ang(v) -> float:
    return math.atan2(float(v[1]), float(v[0]))


def _ccw(a: float, b: float) -> float:
    """Counterclockwise angle from a to b in [0, 2 pi)."""
    return (b - a) % TWO_PI


@dataclass(frozen=True)
class DiskChainReport:
    circles_meet: list[bool]
    overlap_arcs_ok: list[bool]
    p_on_first: bool
    q_on_last: bool
    p_outside_second: bool
    q_outside_penultimate: bool
    apex_margins: list[float] | None = None

    @property
    def min_apex_margin(self) -> float | None:
        return min(self.apex_margins) if self.apex_margins else None

    def apex_ok(self, tol: Tolerance = DEFAULT_TOL) -> bool:
        return self.apex_margins is None or all(m > -tol.eps_abs for m in self.apex_margins)

    @property
    def is_chain(self) -> bool:
        return bool(
            all(self.circles_meet)
            and all(self.overlap_arcs_ok)
            and self.p_on_first
            and self.q_on_last
            and self.p_outside_second
            and self.q_outside_penultimate
        )

    @property
    def valid(self) -> bool:
        return self.is_chain and self.apex_ok()

    def failures(self) -> list[str]:
        out = [f"circles {i},{i + 1} do not meet" for i, ok in enumerate(self.circles_meet) if not ok]
        out += [f"overlap arcs of disk {i + 1} share more than a point" for i, ok in enumerate(self.overlap_arcs_ok) if not ok]
        for name in ("p_on_first", "q_on_last", "p_outside_second", "q_outside_penultimate"):
            if not getattr(self, name):
                out.append(name)
        if not self.apex_ok():
            out.append(f"apex inside previous circumdisk (margin {self.min_apex_margin:.3g})")
        return out


def validate_disk_chain(
    dc: DiskChain, tol: Tolerance = DEFAULT_TOL, tc: TriangleChain2D | None = None
) -> DiskChainReport:
    """Check the chain-of-disks conditions, plus the apex certificate when ``tc`` is given."""
    c, r = dc.centers, dc.radii
    band = tol.length(dc.scale)
    k = dc.k

    meet = []
    for i in range(k - 1):
        d = float(np.linalg.norm(c[i + 1] - c[i]))
        meet.append(abs(r[i] - r[i + 1]) - band <= d <= r[i] + r[i + 1] + band and d > 0)

    arcs_ok = []
    for i in range(1, k - 1):
        if not (meet[i - 1] and meet[i]):
            arcs_ok.append(False)
            continue
        dp = float(np.linalg.norm(c[i - 1] - c[i]))
        dn = float(np.linalg.norm(c[i + 1] - c[i]))
        beta = _half_angle(dp, r[i], r[i - 1], band)
        gamma = _half_angle(dn, r[i], r[i + 1], band)
        delta = abs(((_ang(c[i - 1] - c[i]) - _ang(c[i + 1] - c[i])) + math.pi) % TWO_PI - math.pi)
        arcs_ok.append(r[i] * (beta + gamma - delta) <= band)

    def on_circle(x, j):
        return abs(np.linalg.norm(x - c[j]) - r[j]) <= band

    def not_inside(x, j):
        return np.linalg.norm(x - c[j]) >= r[j] - band

    margins = None
    if tc is not None:
        if tc.k != k:
            raise InvalidInputError("triangle chain and disk chain differ in length")
        margins = []
        for i in range(1, k):
            w = tc.triangles[i, tc.apex(i)]
            margins.append(float(np.linalg.norm(w - c[i - 1]) - r[i - 1]))

    return DiskChainReport(
        circles_meet=meet,
        overlap_arcs_ok=arcs_ok,
        p_on_first=bool(on_circle(dc.p, 0)),
        q_on_last=bool(on_circle(dc.q, k - 1)),
        p_outside_second=bool(not_inside(dc.p, 1)),
        q_outside_penultimate=bool(not_inside(dc.q, k - 2)),
        apex_margins=margins,
    )


@dataclass(frozen=True, eq=False)
class ChainGraph:
    """Arc/chord graph of a chain of disks.

    Node 0 is p, nodes 1..k-1 are a_1..a_{k-1}, nodes k..2k-2 are
    b_1..b_{k-1} and node 2k-1 is q.  ``arc_a[i]`` and ``arc_b[i]`` are the
    lengths of A_{i+1} and B_{i+1}; ``chords[i]`` is |a_{i+1} b_{i+1}|.
    """

    positions: np.ndarray
    arc_a: np.ndarray
    arc_b: np.ndarray
    chords: np.ndarray

    @property
    def k(self) -> int:
        return len(self.arc_a)

    def a(self, i: int) -> int:
        """Node of a_i (a_0 = p, a_k = q)."""
        return 0 if i == 0 else (2 * self.k - 1 if i == self.k else i)

    def b(self, i: int) -> int:
        return 0 if i == 0 else (2 * self.k - 1 if i == self.k else self.k - 1 + i)

    @property
    def n_nodes(self) -> int:
        return 2 * self.k

    def edges(self) -> list[tuple[int, int, float]]:
        k = self.k
        out = []
        for i in range(1, k + 1):
            out.append((self.a(i - 1), self.a(i), float(self.arc_a[i - 1])))
            out.append((self.b(i - 1), self.b(i), float(self.arc_b[i - 1])))
        for i in range(1, k):
            out.append((self.a(i), self.b(i), float(self.chords[i - 1])))
        return out

    def adjacency(self) -> list[list[tuple[int, float]]]:
        adj: list[list[tuple[int, float]]] = [[] for _ in range(self.n_nodes)]
        for u, v, w in self.edges():
            adj[u].append((v, w))
            adj[v].append((u, w))
        return adj


def chain_graph(dc: DiskChain, tol: Tolerance = DEFAULT_TOL) -> ChainGraph:
    """Label circle intersections and measure the arcs A_i, B_i and chords a_i b_i.

    a_i is the intersection of circles i, i+1 on or left of the directed
    line between their centers, b_i the one on the right.  On each circle
    the overlap arcs with its neighbours (or the endpoint p', q') split the
    circle into A_i, from a_i counterclockwise to a_{i-1}, and B_i, from
    b_{i-1} counterclockwise to b_i.
    """
    c, r = dc.centers, dc.radii
    k = dc.k
    band = tol.length(dc.scale)
    pos = np.empty((2 * k, 2))
    pos[0], pos[2 * k - 1] = dc.p, dc.q

    # angles on circle i of its junction with circle i+1, seen from both sides
    fwd = []  # (psi, gamma) on circle i toward i+1
    bwd = []  # (phi, beta) on circle i+1 toward i
    for i in range(k - 1):
        d = float(np.linalg.norm(c[i + 1] - c[i]))
        if not (abs(r[i] - r[i + 1]) - band <= d <= r[i] + r[i + 1] + band) or d == 0.0:
            raise InvalidChainError(f"circles {i} and {i + 1} do not intersect")
        psi = _ang(c[i + 1] - c[i])
        gamma = _half_angle(d, r[i], r[i + 1], band)
        phi = _ang(c[i] - c[i + 1])
        beta = _half_angle(d, r[i + 1], r[i], band)
        fwd.append((psi, gamma))
        bwd.append((phi, beta))
        a_pt = c[i] + r[i] * np.array([math.cos(psi + gamma), math.sin(psi + gamma)])
        b_pt = c[i] + r[i] * np.array([math.cos(psi - gamma), math.sin(psi - gamma)])
        pos[i + 1], pos[k + i] = a_pt, (a_pt if gamma == 0.0 else b_pt)

    arc_a = np.empty(k)
    arc_b = np.empty(k)
    for i in range(k):
        if i == 0:
            lo_a = lo_b = _ang(dc.p - c[0])  # a_0 = b_0 = p
            used_back = 0.0
        else:
            phi, beta = bwd[i - 1]
            lo_a, lo_b = phi - beta, phi + beta
            used_back = 2 * beta
        if i == k - 1:
            hi_a = hi_b = _ang(dc.q - c[i])
            used_front = 0.0
        else:
            psi, gamma = fwd[i]
            hi_a, hi_b = psi + gamma, psi - gamma
            used_front = 2 * gamma
        free = max(0.0, TWO_PI - used_back - used_front)
        ang_b = _ccw(lo_b, hi_b)
        ang_a = _ccw(hi_a, lo_a)
        # roundoff can wrap an empty arc to a full turn; the two arcs share the free angle
        if ang_a + ang_b > free + 1e-9:
            if ang_a >= ang_b:
                ang_a = max(0.0, free - ang_b)
            else:
                ang_b = max(0.0, free - ang_a)
        arc_a[i] = r[i] * ang_a
        arc_b[i] = r[i] * ang_b

    chords = np.linalg.norm(pos[1:k] - pos[k : 2 * k - 1], axis=1)
    return ChainGraph(pos, arc_a, arc_b, chords)


def chain_shortest_path(cg: ChainGraph) -> float:
    dist, _ = dijkstra(cg.n_nodes, cg.adjacency(), 0)
    return float(dist[cg.n_nodes - 1])


def triangle_chain_distance(tc: TriangleChain2D) -> float:
    """Shortest p'-q' path along the edges of the unfolded triangles."""
    ids = {int(x) for x in tc.labels.ravel()}
    index = {v: i for i, v in enumerate(sorted(ids))}
    pos = np.empty((len(index), 2))
    adj: list[list[tuple[int, float]]] = [[] for _ in index]
    seen = set()
    for tri, lab in zip(tc.triangles, tc.labels):
        for a in range(3):
            pos[index[int(lab[a])]] = tri[a]
        for a, b in ((0, 1), (1, 2), (2, 0)):
            u, v = index[int(lab[a])], index[int(lab[b])]
            if (min(u, v), max(u, v)) in seen:
                continue
            seen.add((min(u, v), max(u, v)))
            w = float(np.linalg.norm(tri[a] - tri[b]))
            adj[u].append((v, w))
            adj[v].append((u, w))
    src = int(np.argmin(np.linalg.norm(pos - tc.p, axis=1)))
    dst = int(np.argmin(np.linalg.norm(pos - tc.q, axis=1)))
    dist, _ = dijkstra(len(pos), adj, src)
    return float(dist[dst])


@dataclass(frozen=True)
class PairCertificate:
    """Every link of the on-sphere stretch argument for one vertex pair."""

    p: int
    q: int
    k: int
    skeleton_dist: float
    triangle_chain_dist: float
    chain_graph_dist: float
    path_length: float
    arc_length: float
    chord_length: float
    disk_report: DiskChainReport
    halfspace_margin: float

    def links(self) -> dict[str, tuple[float, float]]:
        """Named (left, right) pairs that must satisfy left <= right."""
        c = CHAIN_GRAPH_CONSTANT
        return {
            "skeleton<=triangle_chain": (self.skeleton_dist, self.triangle_chain_dist),
            "triangle_chain<=chain_graph": (self.triangle_chain_dist, self.chain_graph_dist),
            "chain_graph<=1.998*path": (self.chain_graph_dist, c * self.path_length),
            "path<=arc": (self.path_length, self.arc_length),
            "arc<=pi/2*chord": (self.arc_length, 0.5 * math.pi * self.chord_length),
        }

    def failed_links(self, rel: float = DEFAULT_TOL.eps_rel) -> list[str]:
        return [name for name, (lhs, rhs) in self.links().items() if lhs > rhs * (1.0 + rel)]


def pair_certificate(
    P: Polyhedron,
    p: int,
    q: int,
    sphere_radius: float,
    tol: Tolerance = DEFAULT_TOL,
    skeleton_dist: float | None = None,
) -> PairCertificate:
    """Run section, unfolding, disk chain and graph for a non-adjacent pair p, q.

    ``skeleton_dist`` may carry a precomputed skeleton distance of p and q.
    """
    from .cross_section import halfspace_margin

    cs = section(P, p, q, tol)
    if cs.is_skeleton_edge:
        raise InvalidInputError(f"{p} and {q} are adjacent")
    tc = unfold(P, cs, tol)
    dc = circumdisk_chain(tc, tol)
    report = validate_disk_chain(dc, tol, tc)
    cg = chain_graph(dc, tol)
    skel = shortest_path(skeleton(P), p, q)[0] if skeleton_dist is None else float(skeleton_dist)
    return PairCertificate(
        p=p,
        q=q,
        k=cs.k,
        skeleton_dist=skel,
        triangle_chain_dist=triangle_chain_distance(tc),
        chain_graph_dist=chain_shortest_path(cg),
        path_length=cs.path_length,
        arc_length=great_arc(P.points[p], P.points[q], sphere_radius, tol),
        chord_length=float(np.linalg.norm(P.points[p] - P.points[q])),
        disk_report=report,
        halfspace_margin=halfspace_margin(P, cs),
    )
