"""Geometric dilation of convex cycles and cycles inscribed in an annulus."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import ConstructionError, DegenerateCycleError, DomainError, InvalidInputError
from .geometry import DEFAULT_TOL, Tolerance, as_points

DEFAULT_ARC_RESOLUTION = 4096


def f_ratio(x):
    """sqrt(x^2 - 1) + x asin(1/x), the worst dilation in an annulus of ratio x."""
    a = np.asarray(x, dtype=float)
    if np.any(a < 1.0) or np.any(np.isnan(a)):
        raise DomainError("f is defined for x >= 1")
    out = np.sqrt(a * a - 1.0) + a * np.arcsin(1.0 / a)
    return float(out) if out.ndim == 0 else out


def f_ratio_derivative(x):
    """f'(x) = (x - 1)/sqrt(x^2 - 1) + asin(1/x), for x > 1."""
    a = np.asarray(x, dtype=float)
    if np.any(a <= 1.0):
        raise DomainError("f' is evaluated for x > 1")
    # (x - 1)/sqrt(x^2 - 1) = sqrt((x - 1)/(x + 1)) avoids cancellation near 1
    out = np.sqrt((a - 1.0) / (a + 1.0)) + np.arcsin(1.0 / a)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class Annulus:
    r: float
    R: float

    def __post_init__(self):
        if not (0.0 < self.r < self.R) or not math.isfinite(self.R):
            raise DomainError(f"need 0 < r < R, got r={self.r!r}, R={self.R!r}")

    @property
    def ratio(self) -> float:
        return self.R / self.r

    @property
    def bound(self) -> float:
        return f_ratio(self.R / self.r)


@dataclass(frozen=True, eq=False)
class ConvexCycle:
    """Closed convex polygon, counterclockwise, with its arclength table.

    Repeated consecutive vertices are dropped and a clockwise input is
    reversed.  ``arc_resolution`` records the chords-per-circle used when
    the cycle discretizes circular arcs (None for exact polygons).
    """

    vertices: np.ndarray
    arc_resolution: int | None = None
    cum: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        v = as_points(self.vertices, 2)
        scale = float(np.max(np.abs(v))) if len(v) else 0.0
        keep = np.linalg.norm(np.roll(v, -1, axis=0) - v, axis=1) > 1e-14 * max(scale, 1.0)
        v = v[keep]
        if len(v) < 3:
            raise InvalidInputError("a cycle needs at least three distinct vertices")
        x, y = v[:, 0], v[:, 1]
        area2 = float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))
        if area2 == 0.0:
            raise DegenerateCycleError("cycle encloses no area")
        if area2 < 0:
            v = v[::-1].copy()
        e = np.roll(v, -1, axis=0) - v
        en = np.roll(e, -1, axis=0)
        lens = np.linalg.norm(e, axis=1)
        turn = e[:, 0] * en[:, 1] - e[:, 1] * en[:, 0]
        if np.any(turn < -DEFAULT_TOL.eps_abs * lens * np.roll(lens, -1)):
            raise InvalidInputError("cycle is not convex")
        ang = np.arctan2(turn, np.einsum("ij,ij->i", e, en))
        if abs(ang.sum() - 2 * math.pi) > 1e-6:
            raise InvalidInputError("cycle winds more than once")
        cum = np.concatenate(([0.0], np.cumsum(lens)))
        for a in (v, cum):
            a.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "cum", cum)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def perimeter(self) -> float:
        return float(self.cum[-1])


def point_at(C: ConvexCycle, s: float) -> np.ndarray:
    """Point at arclength s from vertex 0 (s taken modulo the perimeter)."""
    s = float(s) % C.perimeter
    i = int(np.searchsorted(C.cum, s, side="right")) - 1
    i = min(max(i, 0), C.n - 1)
    a, b = C.vertices[i], C.vertices[(i + 1) % C.n]
    seg = C.cum[i + 1] - C.cum[i]
    return a + (s - C.cum[i]) / seg * (b - a)


def min_halving_distance(C: ConvexCycle) -> tuple[float, float]:
    """Exact minimum distance over halving pairs, and the arclength where it occurs."""
    pts = np.ascontiguousarray(C.vertices, dtype=np.float64)
    cum = np.ascontiguousarray(C.cum, dtype=np.float64)
    h, s = kernels.halving_sweep(cum, pts)
    return float(h), float(s)


@dataclass(frozen=True)
class DilationReport:
    dilation: float
    h: float
    s: float
    witness: tuple[tuple[float, float], tuple[float, float]]
    perimeter: float

    def to_dict(self) -> dict:
        return {
            "dilation": self.dilation,
            "h": self.h,
            "s": self.s,
            "witness": [list(self.witness[0]), list(self.witness[1])],
            "perimeter": self.perimeter,
        }


def dilation(C: ConvexCycle, tol: Tolerance = DEFAULT_TOL) -> DilationReport:
    """Geometric dilation (|C|/2)/h with h the smallest halving-pair distance."""
    h, s = min_halving_distance(C)
    scale = float(np.max(np.abs(C.vertices)))
    if h <= tol.length(scale):
        raise DegenerateCycleError(f"halving distance {h!r} is too small; cycle is flat")
    half = 0.5 * C.perimeter
    a, b = point_at(C, s), point_at(C, s + half)
    return DilationReport(half / h, h, s, (tuple(map(float, a)), tuple(map(float, b))), C.perimeter)


def _arc(R: float, a0: float, a1: float, resolution: int) -> np.ndarray:
    """Points on the circle of radius R from angle a0 ccw to a1, excluding a1."""
    m = max(1, math.ceil((a1 - a0) * resolution / (2 * math.pi) - 1e-9))
    t = a0 + (a1 - a0) * np.arange(m) / m
    return R * np.column_stack([np.cos(t), np.sin(t)])


def _chords_and_arcs(R: float, chords: list[tuple[float, float]], resolution: int) -> np.ndarray:
    """Cycle on the outer circle that replaces each angular interval in ``chords`` by its chord.

    Intervals are (start, end) angles, increasing and non-overlapping
    within one turn; each chord runs straight from start to end.
    """
    pts = []
    for i, (s0, e0) in enumerate(chords):
        s1 = chords[(i + 1) % len(chords)][0]
        if i == len(chords) - 1:
            s1 += 2 * math.pi
        pts.append(R * np.array([[math.cos(s0), math.sin(s0)]]))
        if s1 - e0 > 1e-15:
            pts.append(_arc(R, e0, s1, resolution))
        else:
            pts.append(R * np.array([[math.cos(e0), math.sin(e0)]]))
    return np.concatenate(pts)


def _check_annulus(r: float, R: float, resolution: int) -> None:
    Annulus(r, R)
    if resolution < 16:
        raise DomainError("arc_resolution must be at least 16")


def cstar(r: float, R: float, arc_resolution: int = DEFAULT_ARC_RESOLUTION) -> ConvexCycle:
    """Cycle bounded by the vertical tangents x = +-r and the outer circle between them."""
    _check_annulus(r, R, arc_resolution)
    phi = math.acos(r / R)
    pts = _chords_and_arcs(R, [(-phi, phi), (math.pi - phi, math.pi + phi)], arc_resolution)
    return ConvexCycle(pts, arc_resolution)


def cstar_perimeter(r: float, R: float) -> float:
    return 4.0 * math.sqrt(R * R - r * r) + 4.0 * R * math.asin(r / R)


def fixture_cycle(
    kind: str, r: float, R: float, arc_resolution: int = DEFAULT_ARC_RESOLUTION, **params
) -> ConvexCycle:
    """Annulus cycles built from tangents to the inner circle and outer arcs.

    ``tangent_chord``: the chord y = -r and the longer outer arc.
    ``vee``: segments from b = (0, -d) tangent to the inner circle, ending on
    the outer circle below the x-axis, closed by the longer outer arc
    (parameter ``d`` with r < d <= R and d < ``vee_max_d``).
    ``two_tangents``: chords tangent at angles tau and pi - tau (parameter
    ``tau`` with |tau| <= asin(r/R)), joined by outer arcs.
    """
    _check_annulus(r, R, arc_resolution)
    phi = math.acos(r / R)
    if kind == "tangent_chord":
        pts = _chords_and_arcs(R, [(-math.pi / 2 - phi, -math.pi / 2 + phi)], arc_resolution)
    elif kind == "two_tangents":
        tau = float(params.get("tau", 0.0))
        if abs(tau) > math.asin(r / R) + 1e-12:
            raise ConstructionError(f"tangents cross for tau={tau!r}")
        pts = _chords_and_arcs(R, [(tau - phi, tau + phi), (math.pi - tau - phi, math.pi - tau + phi)], arc_resolution)
    elif kind == "vee":
        a, b, c = _vee_points(r, R, float(params.get("d", vee_default_d(r, R))))
        a0 = math.atan2(c[1], c[0])
        a1 = math.atan2(a[1], a[0]) + 2 * math.pi  # ccw from c over the top to a
        pts = np.concatenate([b[None], c[None], _arc(R, a0, a1, arc_resolution)[1:], a[None]])
    else:
        raise InvalidInputError(f"unknown fixture kind {kind!r}")
    return ConvexCycle(pts, arc_resolution)


def vee_max_d(r: float, R: float) -> float:
    """Largest apex distance whose tangent endpoints stay below the x-axis (exclusive)."""
    return min(R, math.sqrt(r * r + r**4 / (R * R - r * r)))


def vee_default_d(r: float, R: float) -> float:
    return 0.5 * (r + vee_max_d(r, R))


def _vee_points(r: float, R: float, d: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if not (r < d <= R):
        raise ConstructionError(f"vee apex distance must satisfy r < d <= R, got {d!r}")
    w = math.sqrt(R * R - r * r)
    t = math.sqrt(d * d - r * r)
    g = math.asin(r / d)
    b = np.array([0.0, -d])
    u = np.array([-math.sin(g), math.cos(g)])
    a = b + (t + w) * u
    if a[1] >= 0.0:
        raise ConstructionError("vee endpoints must lie below the x-axis")
    c = np.array([-a[0], a[1]])
    return a, b, c


def fixture_perimeter(kind: str, r: float, R: float, **params) -> float:
    """Closed-form perimeter of the smooth cycle that ``fixture_cycle`` discretizes."""
    w = math.sqrt(R * R - r * r)
    if kind == "tangent_chord":
        return 2 * w + 2 * R * math.asin(r / R) + math.pi * R
    if kind == "two_tangents":
        return cstar_perimeter(r, R)
    if kind == "vee":
        d = float(params.get("d", vee_default_d(r, R)))
        a, _, _ = _vee_points(r, R, d)
        arc = math.pi - 2 * math.atan2(a[1], -a[0])  # angle of c is atan2(a_y, -a_x)
        return 2 * (math.sqrt(d * d - r * r) + w) + R * arc
    raise InvalidInputError(f"unknown fixture kind {kind!r}")


@dataclass(frozen=True)
class AnnulusReport:
    min_radius: float
    max_radius: float
    outside_inner: bool
    inside_outer: bool
    origin_interior: bool

    @property
    def passed(self) -> bool:
        return self.outside_inner and self.inside_outer and self.origin_interior


def annulus_check(C: ConvexCycle, ann: Annulus, tol: Tolerance = DEFAULT_TOL) -> AnnulusReport:
    """Whole-boundary containment in the annulus and origin interiority."""
    v = C.vertices
    w = np.roll(v, -1, axis=0)
    e = w - v
    t = np.clip(-np.einsum("ij,ij->i", v, e) / np.einsum("ij,ij->i", e, e), 0.0, 1.0)
    closest = v + t[:, None] * e
    rmin = float(np.min(np.linalg.norm(closest, axis=1)))
    rmax = float(np.max(np.linalg.norm(v, axis=1)))
    band = tol.length(ann.R)
    side = e[:, 0] * (-v[:, 1]) - e[:, 1] * (-v[:, 0])
    return AnnulusReport(
        min_radius=rmin,
        max_radius=rmax,
        outside_inner=rmin >= ann.r - band,
        inside_outer=rmax <= ann.R + band,
        origin_interior=bool(np.all(side > band * np.linalg.norm(e, axis=1))),
    )


def chord_distance_sq(a, r: float, R: float):
    """(a + R sin(a/R))^2 + (r + R cos(a/R))^2: squared halving distance from the chord point (-a, -r)."""
    a = np.asarray(a, dtype=float)
    return (a + R * np.sin(a / R)) ** 2 + (r + R * np.cos(a / R)) ** 2


def tangent_polygon(angles, rho: float) -> ConvexCycle:
    """Polygon circumscribed about the circle of radius rho, tangent at the given angles."""
    t = np.sort(np.mod(np.asarray(angles, dtype=float), 2 * math.pi))
    if len(t) < 3:
        raise ConstructionError("need at least three tangents")
    gaps = np.diff(np.concatenate([t, [t[0] + 2 * math.pi]]))
    if np.any(gaps >= math.pi):
        raise ConstructionError("tangent angles leave a gap of at least pi")
    mid = t + 0.5 * gaps
    dist = rho / np.cos(0.5 * gaps)
    return ConvexCycle(np.column_stack([dist * np.cos(mid), dist * np.sin(mid)]))


def as_cycle(points) -> ConvexCycle:
    return ConvexCycle(as_points(points, 2))

