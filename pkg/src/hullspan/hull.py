"""Simplicial convex hulls in 3D and checks of the structural assumptions.

Facets are discovered with qhull (``scipy.spatial.ConvexHull``); coplanar
facet groups are then re-triangulated deterministically by a fan from the
lowest vertex id, so the output does not depend on qhull's internal order.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from . import kernels
from .errors import DimensionError, HullspanError
from .geometry import DEFAULT_TOL, Tolerance, as_points, orientation3d, triangle_angles


@dataclass(frozen=True, eq=False)
class Polyhedron:
    """A convex simplicial polyhedron.

    Vertex ids are the row indices of ``points`` (0..V-1); ``source_ids[v]``
    is the index of vertex ``v`` in the point list the hull was built from.
    ``faces`` holds vertex-id triples ordered counterclockwise when seen
    from outside.
    """

    points: np.ndarray
    faces: np.ndarray
    source_ids: np.ndarray = field(default=None)

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        faces = np.array(self.faces, dtype=np.int64).reshape(-1, 3)
        src = np.arange(len(pts)) if self.source_ids is None else np.array(self.source_ids, dtype=np.int64)
        for a in (pts, faces, src):
            a.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "faces", faces)
        object.__setattr__(self, "source_ids", src)

    @property
    def n_vertices(self) -> int:
        return len(self.points)

    @cached_property
    def edges(self) -> np.ndarray:
        e = np.sort(np.concatenate([self.faces[:, [0, 1]], self.faces[:, [1, 2]], self.faces[:, [2, 0]]]), axis=1)
        out = np.unique(e, axis=0)
        out.setflags(write=False)
        return out

    @cached_property
    def edge_faces(self) -> dict[tuple[int, int], list[int]]:
        m: dict[tuple[int, int], list[int]] = defaultdict(list)
        for f, (a, b, c) in enumerate(self.faces):
            for u, v in ((a, b), (b, c), (c, a)):
                m[(min(u, v), max(u, v))].append(f)
        return dict(m)

    @cached_property
    def face_normals(self) -> np.ndarray:
        p = self.points[self.faces]
        n = np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0])
        return n / np.linalg.norm(n, axis=1)[:, None]

    @cached_property
    def face_offsets(self) -> np.ndarray:
        """Plane offsets d with face plane {x : n.x = d}; d > 0 iff the origin is inside."""
        return np.einsum("ij,ij->i", self.face_normals, self.points[self.faces[:, 0]])

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edge_faces

    def find_face(self, a: int, b: int, c: int) -> int | None:
        want = {a, b, c}
        for f, tri in enumerate(self.faces):
            if set(tri.tolist()) == want:
                return f
        return None

    def vertex_of_source(self, source_id: int) -> int | None:
        hit = np.flatnonzero(self.source_ids == source_id)
        return int(hit[0]) if hit.size else None

    def check(self, tol: Tolerance = DEFAULT_TOL) -> None:
        """Raise if the 2-manifold, Euler or convexity invariants fail."""
        V, E, F = self.n_vertices, len(self.edges), len(self.faces)
        if V - E + F != 2:
            raise HullspanError(f"Euler characteristic {V - E + F} != 2")
        bad = [e for e, fs in self.edge_faces.items() if len(fs) != 2]
        if bad:
            raise HullspanError(f"edges not shared by exactly two faces: {bad[:5]}")
        scale = float(np.max(np.linalg.norm(self.points, axis=1)))
        side = self.points @ self.face_normals.T - self.face_offsets[None, :]
        if side.max() > tol.length(scale):
            raise HullspanError(f"vertex outside a face plane by {side.max():.3g}")


def _fan_groups(pts: np.ndarray, tris: list[list[int]], tol: Tolerance) -> list[list[int]]:
    """Merge edge-adjacent coplanar triangles and fan each merged polygon."""
    owner: dict[tuple[int, int], list[int]] = defaultdict(list)
    for t, tri in enumerate(tris):
        for k in range(3):
            u, v = tri[k], tri[(k + 1) % 3]
            owner[(min(u, v), max(u, v))].append(t)

    parent = list(range(len(tris)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (u, v), ts in owner.items():
        if len(ts) != 2:
            continue
        t0, t1 = ts
        w = next(x for x in tris[t1] if x not in (u, v))
        a, b, c = tris[t0]
        if orientation3d(pts[a], pts[b], pts[c], pts[w], tol) == 0:
            parent[find(t0)] = find(t1)

    groups: dict[int, list[int]] = defaultdict(list)
    for t in range(len(tris)):
        groups[find(t)].append(t)

    out: list[list[int]] = []
    for members in groups.values():
        if len(members) == 1:
            out.append(tris[members[0]])
            continue
        # boundary = directed edges not cancelled by a reverse twin in the group
        directed = set()
        for t in members:
            tri = tris[t]
            for k in range(3):
                directed.add((tri[k], tri[(k + 1) % 3]))
        boundary = {u: v for (u, v) in directed if (v, u) not in directed}
        verts = {x for t in members for x in tris[t]}
        if set(boundary) != verts or len(boundary) != len(verts):
            out.extend(tris[t] for t in members)  # not a simple polygon; keep as is
            continue
        start = min(boundary)
        cycle = [start]
        while True:
            nxt = boundary[cycle[-1]]
            if nxt == start:
                break
            cycle.append(nxt)
        if len(cycle) != len(verts):
            out.extend(tris[t] for t in members)
            continue
        out.extend([cycle[0], cycle[i], cycle[i + 1]] for i in range(1, len(cycle) - 1))
    return out


def convex_hull(points, tol: Tolerance = DEFAULT_TOL) -> Polyhedron:
    """Simplicial convex hull of a 3D point set.

    Faces of more than three coplanar hull vertices are fan-triangulated
    from their lowest vertex id; ``validate_assumptions`` then reports the
    loss of general position.
    """
    pts = as_points(points, 3)
    if len(pts) < 4:
        raise DimensionError(f"need at least 4 points, got {len(pts)}")
    centered = pts - pts.mean(axis=0)
    sv = np.linalg.svd(centered, compute_uv=False)
    if sv[0] == 0.0 or sv[2] <= tol.eps_abs * sv[0]:
        raise DimensionError("points are (nearly) coplanar")
    try:
        qh = ConvexHull(pts)
    except QhullError as exc:  # pragma: no cover - guarded by the rank test
        raise DimensionError(str(exc)) from exc

    src = np.sort(qh.vertices)
    local = {int(s): i for i, s in enumerate(src)}
    hv = pts[src]
    inside = hv.mean(axis=0)

    tris = []
    for simplex in qh.simplices:
        a, b, c = (local[int(s)] for s in simplex)
        n = np.cross(hv[b] - hv[a], hv[c] - hv[a])
        if np.dot(n, hv[a] - inside) < 0:
            b, c = c, b
        tris.append([a, b, c])

    faces = _fan_groups(hv, tris, tol)
    P = Polyhedron(hv, np.array(faces), src)
    P.check(tol)
    return P


@dataclass(frozen=True)
class AssumptionReport:
    """Findings of ``validate_assumptions``.  Vertex witnesses use polyhedron ids."""

    general_position: bool
    coplanar_witness: tuple[int, int, int, int] | None
    no_plane_through_origin: bool
    origin_plane_witness: tuple[int, int, int] | None
    contains_origin: bool
    min_face_angle: float
    radius_range: tuple[float, float]
    shell_fit: tuple[float, float]
    on_sphere: bool | None = None
    sphere_deviation: float | None = None
    in_shell: bool | None = None

    @property
    def sphere_hypotheses(self) -> bool:
        """All hypotheses of the on-sphere stretch bound hold."""
        return bool(self.on_sphere and self.general_position and self.no_plane_through_origin)

    def shell_hypotheses(self, theta: float) -> bool:
        """Hypotheses of the shell bound for angle parameter ``theta``."""
        return bool(self.in_shell and self.contains_origin and self.min_face_angle >= theta)

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        for k in ("coplanar_witness", "origin_plane_witness", "radius_range", "shell_fit"):
            if d[k] is not None:
                d[k] = list(d[k])
        return d


def validate_assumptions(
    P: Polyhedron,
    sphere_radius: float | None = None,
    shell: tuple[float, float] | None = None,
    tol: Tolerance = DEFAULT_TOL,
) -> AssumptionReport:
    """Check general position, origin placement, sphere/shell fit and face angles.

    General position is tested as in the hull literature: no four vertices
    coplanar (dihedral gap about any vertex-pair axis at most ``eps_abs``)
    and no plane through three vertices containing the origin.  The shell
    test applies to the whole boundary: vertex radii bound it from above and
    the nearest face plane bounds it from below.
    """
    pts = np.ascontiguousarray(P.points, dtype=np.float64)
    norms = np.linalg.norm(pts, axis=1)

    cop = kernels.coplanar_search(pts, tol.eps_abs)
    cop_w = None if cop[0] < 0 else tuple(int(x) for x in cop)

    if np.any(norms <= tol.eps_abs):
        # a vertex at the origin: every plane through it contains the origin
        v = int(np.argmin(norms))
        others = [x for x in range(len(pts)) if x != v][:2]
        org_w = (v, *others)
    else:
        org = kernels.origin_plane_search(pts, tol.eps_abs)
        org_w = None if org[0] < 0 else tuple(int(x) for x in org)

    scale = float(norms.max())
    offsets = P.face_offsets
    contains = bool(np.all(offsets > tol.length(scale)))

    angles = np.array([triangle_angles(pts[f]) for f in P.faces])
    min_angle = float(angles.min())

    r_fit = float(offsets.min()) if contains else 0.0
    R_fit = float(norms.max())

    on_sphere = dev = None
    if sphere_radius is not None:
        dev = float(np.max(np.abs(norms - sphere_radius)))
        on_sphere = dev <= tol.length(sphere_radius)

    in_shell = None
    if shell is not None:
        r, R = shell
        band = tol.length(R)
        in_shell = bool(contains and r_fit >= r - band and R_fit <= R + band)

    return AssumptionReport(
        general_position=cop_w is None,
        coplanar_witness=cop_w,
        no_plane_through_origin=org_w is None,
        origin_plane_witness=org_w,
        contains_origin=contains,
        min_face_angle=min_angle,
        radius_range=(float(norms.min()), R_fit),
        shell_fit=(r_fit, R_fit),
        on_sphere=on_sphere,
        sphere_deviation=dev,
        in_shell=in_shell,
    )
