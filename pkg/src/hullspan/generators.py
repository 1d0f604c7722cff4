"""Seeded constructions of every input family: sphere samples, the unbounded-stretch
family, annulus polygons and angle-constrained triangle chains."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np
from scipy.spatial import Delaunay

from .annulus import Annulus, ConvexCycle, annulus_check, tangent_polygon
from .errors import ConstructionError, DomainError, GenerationError, InvalidInputError
from .geometry import DEFAULT_TOL, Tolerance, angle_at, as_points
from .hull import convex_hull, validate_assumptions
from .spanner import shortest_path, skeleton, stretch_factor
from .triangle_chain import TriangleChain, _interior_crossing, validate_chain

U64 = (1 << 64) - 1


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Generator for ``seed``, optionally on a numbered sub-stream."""
    if not (0 <= int(seed) <= U64):
        raise InvalidInputError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=tuple(stream))))


def sphere_points(
    n: int,
    radius: float = 1.0,
    seed: int = 0,
    min_angle: float = 1e-6,
    validate: bool = True,
    max_retries: int = 20,
    tol: Tolerance = DEFAULT_TOL,
) -> np.ndarray:
    """Uniform points on the sphere of the given radius.

    Near-duplicates (angular separation below ``min_angle``) are redrawn.
    With ``validate`` the hull must have every point as a vertex and pass
    the general-position and on-sphere checks, otherwise the sample is
    redrawn from the next sub-stream.
    """
    if n < 4:
        raise InvalidInputError(f"need at least 4 points, got {n}")
    if radius <= 0:
        raise InvalidInputError("radius must be positive")
    for attempt in range(max_retries):
        rng = make_rng(seed, attempt)
        x = rng.standard_normal((n, 3))
        x /= np.linalg.norm(x, axis=1)[:, None]
        for _ in range(100):
            cosmax = np.cos(min_angle)
            g = x @ x.T
            np.fill_diagonal(g, -1.0)
            dup = np.flatnonzero(np.triu(g > cosmax, k=1).any(axis=0))
            if not dup.size:
                break
            y = rng.standard_normal((dup.size, 3))
            x[dup] = y / np.linalg.norm(y, axis=1)[:, None]
        pts = radius * x
        if not validate:
            return pts
        P = convex_hull(pts, tol)
        rep = validate_assumptions(P, sphere_radius=radius, tol=tol)
        if P.n_vertices == n and rep.sphere_hypotheses:
            return pts
    raise GenerationError(f"no valid sphere sample of {n} points after {max_retries} attempts", seed)


@dataclass(frozen=True)
class CounterexampleSpec:
    """Cube corners plus p, q on the circumsphere and r, s just inside it."""

    k: int

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 2:
            raise DomainError(f"k must be an integer >= 2, got {self.k!r}")

    @property
    def a(self) -> float:
        return math.sqrt(3.0 - 1.0 / self.k**2)

    @property
    def b(self) -> float:
        return 1.0 / self.k**2

    @property
    def c(self) -> float:
        return self.a - 1.0 / self.k**3

    def points(self) -> np.ndarray:
        k, a, b, c = self.k, self.a, self.b, self.c
        cube = [list(v) for v in product([-1.0, 1.0], repeat=3)]
        extra = [[-1.0 / k, 0.0, a], [1.0 / k, 0.0, a], [0.0, -b, c], [0.0, b, c]]
        return np.array(cube + extra)


# indices of p, q, r, s in counterexample_points
P_IDX, Q_IDX, R_IDX, S_IDX = 8, 9, 10, 11


def counterexample_points(k: int) -> np.ndarray:
    return CounterexampleSpec(k).points()


@dataclass(frozen=True)
class CounterexampleCertificate:
    k: int
    inequality: bool
    inside_sphere: bool
    face_pqr: bool
    face_pqs: bool
    rs_not_edge: bool
    rs_stretch: float
    stretch: float
    alpha: float

    @property
    def ok(self) -> bool:
        return (
            self.inequality
            and self.inside_sphere
            and self.face_pqr
            and self.face_pqs
            and self.rs_not_edge
            and self.rs_stretch >= self.k
            and self.stretch >= self.k
        )

    def to_dict(self) -> dict:
        return dict(self.__dict__, ok=self.ok)


def counterexample_certificate(k: int, points=None, tol: Tolerance = DEFAULT_TOL) -> CounterexampleCertificate:
    """Check the claims behind the family: two faces at pq, no edge rs, stretch at least k.

    ``points`` may be a perturbed copy of the construction; the analytic
    checks always use the exact values.
    """
    spec = CounterexampleSpec(k)
    a, b, c = spec.a, spec.b, spec.c
    pts = spec.points() if points is None else as_points(points, 3)
    P = convex_hull(pts, tol)
    vid = {s: P.vertex_of_source(s) for s in (P_IDX, Q_IDX, R_IDX, S_IDX)}
    if any(v is None for v in vid.values()):
        raise ConstructionError("p, q, r and s must all be hull vertices")
    p, q, r, s = (vid[i] for i in (P_IDX, Q_IDX, R_IDX, S_IDX))
    G = skeleton(P)
    d_rs, _ = shortest_path(G, r, s)
    rs = float(np.linalg.norm(P.points[r] - P.points[s]))
    alpha = angle_at(P.points[p], P.points[q], P.points[s])
    return CounterexampleCertificate(
        k=int(k),
        inequality=a * b - a + c > b,
        inside_sphere=b * b + c * c < 3.0,
        face_pqr=P.find_face(p, q, r) is not None,
        face_pqs=P.find_face(p, q, s) is not None,
        rs_not_edge=not P.has_edge(r, s),
        rs_stretch=d_rs / rs,
        stretch=stretch_factor(G).stretch,
        alpha=alpha,
    )


def perturb(points, magnitude: float, seed: int = 0) -> np.ndarray:
    """Shift every coordinate by independent uniform noise in [-magnitude, magnitude]."""
    if not (magnitude > 0) or not math.isfinite(magnitude):
        raise InvalidInputError(f"magnitude must be positive, got {magnitude!r}")
    pts = np.array(points, dtype=float)
    return pts + make_rng(seed).uniform(-magnitude, magnitude, size=pts.shape)


def annulus_polygon(
    r: float,
    R: float,
    n_tangents: int,
    seed: int = 0,
    angles=None,
    rho: float | None = None,
    max_retries: int = 8,
) -> ConvexCycle:
    """Convex polygon circumscribed about a circle of radius rho in [r, R cos(gap/2)].

    Tangency angles are uniform unless given.  Each vertex sits at
    distance rho / cos(gap/2) from the origin, so the whole boundary lies
    in the annulus.  An infeasible draw (largest gap too wide) is retried
    with more tangents.
    """
    ann = Annulus(r, R)
    if n_tangents < 3:
        raise InvalidInputError("need at least 3 tangents")
    n = int(n_tangents)
    for attempt in range(max_retries if angles is None else 1):
        rng = make_rng(seed, attempt)
        t = np.sort(rng.uniform(0.0, 2 * math.pi, n)) if angles is None else np.sort(np.mod(angles, 2 * math.pi))
        gap = float(np.max(np.diff(np.concatenate([t, [t[0] + 2 * math.pi]]))))
        rho_max = R * math.cos(0.5 * gap) if gap < math.pi else -1.0
        if rho_max < r * (1.0 - 1e-12):
            n = n + max(1, n // 2)
            continue
        rr = rho if rho is not None else float(rng.uniform(r, max(r, rho_max)))
        if not (r <= rr <= rho_max * (1.0 + 1e-12)):
            raise GenerationError(f"rho={rr!r} is outside the feasible range [{r}, {rho_max}]", seed)
        try:
            C = tangent_polygon(t, rr)
        except ConstructionError:
            n = n + max(1, n // 2)
            continue
        if not annulus_check(C, ann).passed:
            raise GenerationError("generated polygon left the annulus", seed)
        return C
    raise GenerationError(f"no feasible tangent polygon for r={r}, R={R}", seed)


def _lattice_offset(rng: np.random.Generator, target_k: int) -> tuple[int, int]:
    """Coprime (m, n) whose straight lattice chain has about target_k triangles."""
    s = max(2, round(target_k / 2) + 1)  # an unjittered chain from 0 to m e1 + n e2 has 2(m+n) - 2 triangles
    choices = [(m, s - m) for m in range(1, s) if math.gcd(m, s - m) == 1]
    return choices[int(rng.integers(len(choices)))]


def triangle_chain_gen(
    theta_min: float,
    target_k: int = 8,
    seed: int = 0,
    half_width: float | None = None,
    max_retries: int = 200,
    tol: Tolerance = DEFAULT_TOL,
) -> TriangleChain:
    """Chain of Delaunay triangles crossed by pq with every angle at least theta_min.

    Points are a jittered, rotated unit triangular lattice around the
    segment pq, with p and q lattice points; the jitter shrinks as
    theta_min approaches pi/3.  Instances where pq passes near a vertex or
    an angle falls below theta_min are redrawn.
    """
    if not (0.0 < theta_min < math.pi / 3):
        raise DomainError(f"theta_min must lie in (0, pi/3), got {theta_min!r}")
    if target_k < 2:
        raise InvalidInputError("target_k must be at least 2")
    rng = make_rng(seed)
    jitter = min(0.25, 0.2 * (math.pi / 3 - theta_min))
    e1 = np.array([1.0, 0.0])
    e2 = np.array([0.5, math.sqrt(3) / 2])
    for _ in range(max_retries):
        m, n = _lattice_offset(rng, target_k)
        q_lat = m * e1 + n * e2
        L = float(np.linalg.norm(q_lat))
        hw = (L / 4 if half_width is None else half_width) + 1.5
        # lattice points near the segment from 0 to q_lat
        span = int(math.ceil(L + hw)) + 2
        ii, jj = np.meshgrid(np.arange(-span, span + 1), np.arange(-span, span + 1), indexing="ij")
        lat = np.column_stack([ii.ravel(), jj.ravel()])
        pts = lat[:, :1] * e1 + lat[:, 1:] * e2
        u = q_lat / L
        along = pts @ u
        across = pts @ np.array([-u[1], u[0]])
        near = (along >= -hw) & (along <= L + hw) & (np.abs(across) <= hw)
        lat, pts = lat[near], pts[near]
        pts = pts + rng.uniform(-jitter, jitter, size=pts.shape)
        ip = int(np.flatnonzero((lat[:, 0] == 0) & (lat[:, 1] == 0))[0])
        iq = int(np.flatnonzero((lat[:, 0] == m) & (lat[:, 1] == n))[0])
        phi = rng.uniform(0.0, 2 * math.pi)
        rot = np.array([[math.cos(phi), -math.sin(phi)], [math.sin(phi), math.cos(phi)]])
        pts = pts @ rot.T

        chain = _chain_from_points(pts, ip, iq, tol)
        if chain is None:
            continue
        rep = validate_chain(chain, tol)
        if rep.valid and rep.min_angle >= theta_min:
            return chain
    raise GenerationError(f"no chain with angles >= {theta_min!r} after {max_retries} attempts", seed)


def _chain_from_points(pts: np.ndarray, ip: int, iq: int, tol: Tolerance) -> TriangleChain | None:
    tri = Delaunay(pts)
    p, q = pts[ip], pts[iq]
    d = q - p
    L = float(np.linalg.norm(d))
    # reject if the segment comes close to any vertex other than p and q
    t = np.clip((pts - p) @ d / (L * L), 0.0, 1.0)
    dist = np.linalg.norm(pts - (p + t[:, None] * d), axis=1)
    dist[[ip, iq]] = np.inf
    if dist.min() < 1e-6 * L:
        return None
    band = tol.length(L)
    crossed = []
    for simplex in tri.simplices:
        if _interior_crossing(pts[simplex], p, q, band) > band:
            entry = _entry_parameter(pts[simplex], p, q)
            crossed.append((entry, simplex))
    crossed.sort(key=lambda x: x[0])
    simp = np.array([s for _, s in crossed])
    if len(simp) < 2:
        return None
    used = np.unique(simp)
    remap = {int(v): i for i, v in enumerate(used)}
    tris = np.vectorize(remap.get)(simp)
    return TriangleChain(pts[used], tris, remap[ip], remap[iq])


def _entry_parameter(tri: np.ndarray, p: np.ndarray, q: np.ndarray) -> float:
    d = q - p
    ts = []
    for a in range(3):
        u, v = tri[a], tri[(a + 1) % 3]
        e = v - u
        den = d[0] * e[1] - d[1] * e[0]
        if den == 0.0:
            continue
        w = u - p
        t = (w[0] * e[1] - w[1] * e[0]) / den
        s = (w[0] * d[1] - w[1] * d[0]) / den
        if -1e-12 <= s <= 1 + 1e-12:
            ts.append(t)
    return min(ts) if ts else 0.0


def canonical_chain() -> TriangleChain:
    """Two right isoceles triangles with p = (0, 0), q = (2, 0) and the shared edge x = 1."""
    return TriangleChain.from_coords(
        [[[0, 0], [1, 1], [1, -1]], [[1, 1], [1, -1], [2, 0]]],
        [0, 0],
        [2, 0],
    )


def icosahedron(radius: float = 1.0) -> np.ndarray:
    g = (1 + math.sqrt(5)) / 2
    v = []
    for s1, s2 in product([-1.0, 1.0], repeat=2):
        v += [[0, s1, s2 * g], [s1, s2 * g, 0], [s2 * g, 0, s1]]
    v = np.array(v, dtype=float)
    return radius * v / np.linalg.norm(v, axis=1)[:, None]

