"""Cross-sections of a polyhedron by the plane through two vertices and the origin."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateError, DegeneratePlaneError, GeneralPositionError, InvalidInputError
from .geometry import DEFAULT_TOL, Tolerance, as_point
from .hull import Polyhedron

Feature = tuple  # ("vertex", v) or ("edge", (u, v)) with u < v


@dataclass(frozen=True)
class Plane:
    """The plane {x : normal . x = offset} with a unit normal."""

    normal: np.ndarray
    offset: float = 0.0

    def __post_init__(self):
        n = np.asarray(self.normal, dtype=float)
        if abs(np.linalg.norm(n) - 1.0) > 1e-9:
            raise InvalidInputError("plane normal must be a unit vector")
        object.__setattr__(self, "normal", n)

    def signed_distance(self, x) -> np.ndarray:
        return np.asarray(x, dtype=float) @ self.normal - self.offset


def section_plane(p, q, tol: Tolerance = DEFAULT_TOL) -> Plane:
    """Plane through p, q and the origin."""
    p, q = as_point(p, 3), as_point(q, 3)
    n = np.cross(p, q)
    nn = float(np.linalg.norm(n))
    if nn <= tol.eps_abs * float(np.linalg.norm(p) * np.linalg.norm(q)):
        raise DegeneratePlaneError("p, q and the origin are collinear")
    return Plane(n / nn, 0.0)


@dataclass(frozen=True, eq=False)
class CrossSection:
    """Section polygon of P by a plane through the origin.

    ``polygon`` is counterclockwise in the in-plane frame ``basis`` whose
    first axis runs from p to q; the 3D origin maps to (0, 0).  ``path``
    indexes the polygon vertices from p to q on the side of segment pq
    away from the origin, and ``face_sequence[i]`` is the face containing
    path edge i.
    """

    plane: Plane
    p: int
    q: int
    basis: np.ndarray
    polygon: np.ndarray
    points3d: np.ndarray
    features: list[Feature]
    path: list[int]
    face_sequence: list[int]
    is_skeleton_edge: bool
    edge_params: dict = field(default_factory=dict, repr=False)

    @property
    def path_points(self) -> np.ndarray:
        return self.polygon[self.path]

    @property
    def path_length(self) -> float:
        pts = self.path_points
        return float(np.sum(np.linalg.norm(np.diff(pts, axis=0), axis=1)))

    @property
    def k(self) -> int:
        return len(self.face_sequence)

    @property
    def perimeter(self) -> float:
        v = self.polygon
        return float(np.sum(np.linalg.norm(np.roll(v, -1, axis=0) - v, axis=1)))

    def crossed_edges(self) -> list[tuple[tuple[int, int], float]]:
        """Polyhedron edges crossed by the path, in order, with their crossing parameter."""
        out = []
        for idx in self.path[1:-1]:
            kind, e = self.features[idx]
            out.append((e, self.edge_params[e]))
        return out


def cut(P: Polyhedron, plane: Plane, p: int, q: int, tol: Tolerance = DEFAULT_TOL) -> CrossSection:
    pts = P.points
    scale = float(np.max(np.linalg.norm(pts, axis=1)))
    band = tol.length(scale)
    s = plane.signed_distance(pts)
    if abs(plane.offset) > band:
        raise InvalidInputError("section plane must pass through the origin")
    if abs(s[p]) > band or abs(s[q]) > band:
        raise InvalidInputError("p and q must lie on the section plane")
    # vertices within the band are snapped onto the plane; such a vertex is
    # tolerated on the near side of the polygon but not on the path itself
    sg = np.where(np.abs(s) <= band, 0, np.sign(s)).astype(int)
    sg[p] = sg[q] = 0
    node_index: dict[Feature, int] = {}
    nodes: list[Feature] = []

    def node(f: Feature) -> int:
        if f not in node_index:
            node_index[f] = len(nodes)
            nodes.append(f)
        return node_index[f]

    seg_face: dict[frozenset, int | None] = {}
    fs = sg[P.faces]
    meets = ~(np.all(fs > 0, axis=1) | np.all(fs < 0, axis=1))
    for fi in np.flatnonzero(meets).tolist():
        tri = P.faces[fi].tolist()
        feats = [("vertex", v) for v in tri if sg[v] == 0]
        for k in range(3):
            u, v = tri[k], tri[(k + 1) % 3]
            if sg[u] * sg[v] < 0:
                feats.append(("edge", (min(u, v), max(u, v))))
        if len(feats) == 3:
            raise GeneralPositionError(f"face {fi} lies in the section plane")
        if len(feats) != 2:
            continue
        key = frozenset((node(feats[0]), node(feats[1])))
        if feats[0][0] == "vertex" and feats[1][0] == "vertex":
            seg_face[key] = None  # a polyhedron edge inside the plane
        else:
            seg_face[key] = fi

    adj: dict[int, list[int]] = {i: [] for i in range(len(nodes))}
    for key in seg_face:
        a, b = tuple(key)
        adj[a].append(b)
        adj[b].append(a)
    if any(len(v) != 2 for v in adj.values()):
        raise DegenerateError("section is not a simple polygon")

    start = node_index[("vertex", p)]
    cycle = [start, adj[start][0]]
    while True:
        a, b = adj[cycle[-1]]
        nxt = a if a != cycle[-2] else b
        if nxt == start:
            break
        cycle.append(nxt)
    if len(cycle) != len(nodes):
        raise DegenerateError("section splits into several loops")

    edge_params: dict = {}
    p3 = np.empty((len(cycle), 3))
    for i, ni in enumerate(cycle):
        kind, e = nodes[ni]
        if kind == "vertex":
            p3[i] = pts[e]
        else:
            u, v = e
            t = s[u] / (s[u] - s[v])
            edge_params[e] = float(t)
            p3[i] = pts[u] + t * (pts[v] - pts[u])
    p3 -= np.outer(plane.signed_distance(p3), plane.normal)  # project out roundoff

    e1 = pts[q] - pts[p]
    e1 = e1 - np.dot(e1, plane.normal) * plane.normal
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(plane.normal, e1)
    basis = np.array([e1, e2])
    poly = p3 @ basis.T
    x, y = poly[:, 0], poly[:, 1]
    if np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y) < 0:
        cycle = [cycle[0]] + cycle[1:][::-1]
        p3 = np.concatenate([p3[:1], p3[1:][::-1]])
        poly = np.concatenate([poly[:1], poly[1:][::-1]])
    feats = [nodes[ni] for ni in cycle]

    iq = feats.index(("vertex", q))
    y_pq = poly[0, 1]
    if abs(y_pq) <= band:
        raise DegeneratePlaneError("origin lies on the line through p and q")
    far = 1.0 if y_pq > 0 else -1.0  # origin (y = 0) is on the other side
    m = len(poly)
    forward = list(range(0, iq + 1))
    backward = [0] + list(range(m - 1, iq - 1, -1))

    def on_far_side(arc):
        inner = arc[1:-1]
        return all((poly[i, 1] - y_pq) * far > 0 for i in inner)

    if on_far_side(forward) and not (len(forward) == 2 and on_far_side(backward) and len(backward) > 2):
        path = forward
    elif on_far_side(backward):
        path = backward
    else:
        raise DegenerateError("could not identify the path on the far side of pq")

    cyc = [nodes[ni] for ni in cycle]
    faces = []
    for a, b in zip(path[:-1], path[1:]):
        key = frozenset((node_index[cyc[a]], node_index[cyc[b]]))
        faces.append(seg_face[key])
    skeleton_edge = len(path) == 2
    if skeleton_edge:
        faces = []
    on_path = [cyc[i][1] for i in path[1:-1] if cyc[i][0] == "vertex"]
    if on_path:
        raise GeneralPositionError(f"section path passes through vertex {on_path[0]}")

    return CrossSection(
        plane=plane,
        p=p,
        q=q,
        basis=basis,
        polygon=poly,
        points3d=p3,
        features=feats,
        path=path,
        face_sequence=faces,
        is_skeleton_edge=skeleton_edge,
        edge_params=edge_params,
    )


def section(P: Polyhedron, p: int, q: int, tol: Tolerance = DEFAULT_TOL) -> CrossSection:
    """``cut`` by ``section_plane`` of two polyhedron vertices."""
    return cut(P, section_plane(P.points[p], P.points[q], tol), p, q, tol)


def great_arc(p, q, sphere_radius: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Length of the shorter great-circle arc between two points on a sphere."""
    p, q = as_point(p, 3), as_point(q, 3)
    band = tol.length(sphere_radius)
    for x in (p, q):
        if abs(np.linalg.norm(x) - sphere_radius) > band:
            raise InvalidInputError(f"point {x} is not on the sphere of radius {sphere_radius}")
    c = np.cross(p, q)
    sin_part = float(np.linalg.norm(c))
    cos_part = float(np.dot(p, q))
    if sin_part <= tol.eps_abs * sphere_radius**2:
        raise DegenerateError("p and q are equal or antipodal")
    return sphere_radius * math.atan2(sin_part, cos_part)


def halfspace_margin(P: Polyhedron, cs: CrossSection) -> float:
    """Smallest margin by which the origin and P lie inside each crossed face plane.

    Non-negative (up to roundoff) whenever every face in the sequence has
    the polyhedron and the origin in the same closed halfspace.
    """
    if not cs.face_sequence:
        return math.inf
    f = np.array(cs.face_sequence)
    n, d = P.face_normals[f], P.face_offsets[f]
    vert = d[:, None] - n @ P.points.T  # >= 0 for points on the inner side
    return float(min(vert.min(), d.min()))
