"""Numeric kernel: points, tolerances, predicates, circumcircles and unfolding.

Points are plain ``numpy`` float arrays of shape ``(2,)`` or ``(3,)``; any
sequence of numbers is accepted wherever a point is expected.  Predicates
return a sign with an explicit zero band instead of silently picking a side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import DegenerateError, DegenerateTriangleError, InvalidInputError

PointLike = Sequence[float] | np.ndarray


@dataclass(frozen=True)
class Tolerance:
    """Absolute and relative zero bands used by every predicate.

    ``eps_abs`` is applied to scale-free quantities (sines, normalised
    volumes) and to lengths of unit-scale inputs; ``eps_rel`` bounds
    relative agreement of recomputed lengths.
    """

    eps_abs: float = 1e-9
    eps_rel: float = 1e-12

    def __post_init__(self):
        for name in ("eps_abs", "eps_rel"):
            v = getattr(self, name)
            if not (0.0 < v < 1.0):
                raise InvalidInputError(f"{name} must lie in (0, 1), got {v!r}")

    def length(self, scale: float) -> float:
        """Zero band for a length measured on inputs of magnitude ``scale``."""
        return self.eps_abs * max(1.0, scale)


DEFAULT_TOL = Tolerance()


def as_point(p: PointLike, dim: int | None = None) -> np.ndarray:
    a = np.asarray(p, dtype=float)
    if a.ndim != 1 or (dim is not None and a.shape[0] != dim):
        raise InvalidInputError(f"expected a {dim or 'N'}-vector, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError(f"non-finite coordinates: {a}")
    return a


def as_points(pts, dim: int | None = None) -> np.ndarray:
    a = np.asarray(pts, dtype=float)
    if a.ndim != 2 or (dim is not None and a.shape[1] != dim):
        raise InvalidInputError(f"expected an (n, {dim or 'd'}) array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("non-finite coordinates in point array")
    return a


def cross2(u, v) -> float:
    return float(u[0] * v[1] - u[1] * v[0])


def orientation2d(a: PointLike, b: PointLike, c: PointLike, tol: Tolerance = DEFAULT_TOL) -> int:
    """Sign of the turn a -> b -> c (+1 left / counterclockwise)."""
    a, b, c = as_point(a, 2), as_point(b, 2), as_point(c, 2)
    ab, ac = b - a, c - a
    det = cross2(ab, ac)
    if abs(det) <= tol.eps_abs * np.linalg.norm(ab) * np.linalg.norm(ac):
        return 0
    return 1 if det > 0 else -1


def signed_volume(a, b, c, d) -> float:
    """det[b - a, c - a, d - a]; six times the signed tetrahedron volume."""
    return float(np.linalg.det(np.array([np.subtract(b, a), np.subtract(c, a), np.subtract(d, a)])))


def orientation3d(
    a: PointLike, b: PointLike, c: PointLike, d: PointLike, tol: Tolerance = DEFAULT_TOL
) -> int:
    """Sign of the signed volume of tetrahedron abcd.

    The zero band is ``eps_abs * |b-a| |c-a| |d-a|``, so the test is on a
    scale-free "solid sine" and does not depend on the units of the input.
    """
    a, b, c, d = (as_point(x, 3) for x in (a, b, c, d))
    u, v, w = b - a, c - a, d - a
    det = float(np.dot(np.cross(u, v), w))
    scale = np.linalg.norm(u) * np.linalg.norm(v) * np.linalg.norm(w)
    if abs(det) <= tol.eps_abs * scale:
        return 0
    return 1 if det > 0 else -1


def circumcircle2d(
    a: PointLike, b: PointLike, c: PointLike, tol: Tolerance = DEFAULT_TOL
) -> tuple[np.ndarray, float]:
    """Center and radius of the circle through three planar points."""
    a, b, c = as_point(a, 2), as_point(b, 2), as_point(c, 2)
    if orientation2d(a, b, c, tol) == 0:
        raise DegenerateTriangleError(f"collinear points {a}, {b}, {c}")
    # translate to a for conditioning
    bx, by = b - a
    cx, cy = c - a
    d = 2.0 * (bx * cy - by * cx)
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / d
    uy = (bx * c2 - cx * b2) / d
    center = a + np.array([ux, uy])
    return center, float(math.hypot(ux, uy))


def angle_at(apex: PointLike, u: PointLike, v: PointLike) -> float:
    """Angle in [0, pi] between the rays apex->u and apex->v."""
    apex = as_point(apex)
    x = as_point(u, apex.shape[0]) - apex
    y = as_point(v, apex.shape[0]) - apex
    nx, ny = np.linalg.norm(x), np.linalg.norm(y)
    if nx == 0.0 or ny == 0.0:
        raise InvalidInputError("zero-length ray in angle_at")
    x, y = x / nx, y / ny
    # atan2 of (|x cross y|, x.y) equals arccos of the clamped dot product
    # but keeps full precision near 0 and pi.
    if x.shape[0] == 2:
        s = abs(cross2(x, y))
    else:
        s = float(np.linalg.norm(np.cross(x, y)))
    c = float(np.clip(np.dot(x, y), -1.0, 1.0))
    return math.atan2(s, c)


def triangle_angles(tri: np.ndarray) -> np.ndarray:
    """The three corner angles of a triangle given as a (3, d) array."""
    return np.array([angle_at(tri[i], tri[(i + 1) % 3], tri[(i + 2) % 3]) for i in range(3)])


def unfold_point(
    edge2d: tuple[PointLike, PointLike],
    edge3d: tuple[PointLike, PointLike],
    w: PointLike,
    side: Literal["left", "right"] = "left",
    tol: Tolerance = DEFAULT_TOL,
) -> np.ndarray:
    """Rotate ``w`` about a 3D edge into the plane of its 2D image.

    Returns the planar point w' with |w' - e2d[0]| = |w - e3d[0]| and
    |w' - e2d[1]| = |w - e3d[1]|, on the requested side of the directed
    2D edge.
    """
    a2, b2 = as_point(edge2d[0], 2), as_point(edge2d[1], 2)
    a3, b3 = as_point(edge3d[0], 3), as_point(edge3d[1], 3)
    w = as_point(w, 3)
    if side not in ("left", "right"):
        raise InvalidInputError(f"side must be 'left' or 'right', got {side!r}")

    e3 = b3 - a3
    len3 = float(np.linalg.norm(e3))
    len2 = float(np.linalg.norm(b2 - a2))
    if len3 == 0.0 or abs(len2 - len3) > tol.length(len3) + tol.eps_rel * len3:
        raise InvalidInputError(f"edge lengths differ: 2D {len2!r} vs 3D {len3!r}")

    aw = w - a3
    t = float(np.dot(aw, e3)) / len3
    h = float(np.linalg.norm(aw - (t / len3) * e3))
    if h <= tol.length(len3):
        raise DegenerateError("point lies on the line of the edge being unfolded")

    ex = (b2 - a2) / len2
    ey = np.array([-ex[1], ex[0]])
    if side == "right":
        ey = -ey
    out = a2 + t * ex + h * ey

    # isometry certificate
    for p2, p3 in ((a2, a3), (b2, b3)):
        d2 = np.linalg.norm(out - p2)
        d3 = np.linalg.norm(w - p3)
        if abs(d2 - d3) > tol.length(d3) + 1e3 * tol.eps_rel * d3:
            raise DegenerateError(f"unfolding lost isometry: {d2!r} vs {d3!r}")
    return out
