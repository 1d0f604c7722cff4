from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hullspan.errors import DegenerateError, DegenerateTriangleError, InvalidInputError
from hullspan.geometry import (
    Tolerance,
    angle_at,
    circumcircle2d,
    orientation2d,
    orientation3d,
    triangle_angles,
    unfold_point,
)

coord = st.floats(-10, 10, allow_nan=False)
pt2 = st.tuples(coord, coord)
pt3 = st.tuples(coord, coord, coord)


def test_tolerance_validation():
    assert Tolerance().eps_abs == 1e-9 and Tolerance().eps_rel == 1e-12
    with pytest.raises(InvalidInputError):
        Tolerance(eps_abs=0.0)
    with pytest.raises(InvalidInputError):
        Tolerance(eps_rel=1.0)
    assert Tolerance().length(0.5) == 1e-9
    assert Tolerance().length(100.0) == pytest.approx(1e-7)


@pytest.mark.parametrize(
    "d, sign", [((0, 0, 1), 1), ((1, 1, 0), 0), ((0, 0, -1), -1)]
)
def test_orientation3d_examples(d, sign):
    assert orientation3d((0, 0, 0), (1, 0, 0), (0, 1, 0), d) == sign


def test_orientation3d_scale_free():
    # a nearly flat tetrahedron is flat at any scale
    for s in (1e-6, 1.0, 1e6):
        pts = s * np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0.3, 0.3, 1e-12]])
        assert orientation3d(*pts) == 0
        pts[3, 2] = s * 1e-3
        assert orientation3d(*pts) == 1


def test_orientation2d():
    assert orientation2d((0, 0), (1, 0), (0, 1)) == 1
    assert orientation2d((0, 0), (0, 1), (1, 0)) == -1
    assert orientation2d((0, 0), (1, 0), (2, 1e-12)) == 0


def test_circumcircle_examples():
    c, r = circumcircle2d((1, 0), (-1, 0), (0, 1))
    assert np.allclose(c, (0, 0), atol=1e-15) and r == pytest.approx(1.0)
    c, r = circumcircle2d((0, 0), (2, 0), (1, 1))
    assert np.allclose(c, (1, 0)) and r == pytest.approx(1.0)
    with pytest.raises(DegenerateTriangleError):
        circumcircle2d((0, 0), (1, 0), (0.5, 1e-15))


@given(pt2, pt2, pt2)
def test_circumcircle_equidistant(a, b, c):
    a, b, c = map(np.array, (a, b, c))
    try:
        center, r = circumcircle2d(a, b, c)
    except DegenerateTriangleError:
        return
    ang = triangle_angles(np.array([a, b, c]))
    # conditioning degrades as the triangle flattens; stay in the well-posed regime
    if ang.min() < 1e-3:
        return
    for x in (a, b, c):
        assert abs(np.linalg.norm(x - center) - r) <= 1e-12 * r / ang.min() + 1e-12


def test_angle_at_examples():
    assert angle_at((0, 0), (1, 0), (0, 1)) == pytest.approx(math.pi / 2)
    assert angle_at((0, 0), (1, 0), (-1, 0)) == pytest.approx(math.pi)
    assert angle_at((0, 0, 0), (1, 1, 0), (1, 0, 0)) == pytest.approx(math.pi / 4)
    with pytest.raises(InvalidInputError):
        angle_at((0, 0), (0, 0), (1, 0))


@given(pt3, pt3, pt3, st.floats(0.01, 100))
def test_angle_at_symmetric_and_scale_invariant(a, u, v, s):
    a, u, v = map(np.array, (a, u, v))
    if np.linalg.norm(u - a) < 1e-3 or np.linalg.norm(v - a) < 1e-3:
        return
    t = angle_at(a, u, v)
    assert 0.0 <= t <= math.pi
    assert t == angle_at(a, v, u)
    assert angle_at(a, a + s * (u - a), a + s * (v - a)) == pytest.approx(t, abs=1e-12)


@given(pt2, pt2, pt2)
def test_triangle_angles_sum_to_pi(a, b, c):
    tri = np.array([a, b, c], dtype=float)
    if min(np.linalg.norm(tri[i] - tri[j]) for i, j in ((0, 1), (1, 2), (0, 2))) < 1e-3:
        return
    assert triangle_angles(tri).sum() == pytest.approx(math.pi, abs=1e-9)


def test_unfold_point_examples():
    e2, e3 = ((0, 0), (1, 0)), ((0, 0, 0), (1, 0, 0))
    assert np.allclose(unfold_point(e2, e3, (0, 1, 0)), (0, 1))
    assert np.allclose(unfold_point(e2, e3, (0, 0, 1)), (0, 1))
    assert np.allclose(unfold_point(e2, e3, (0, 0, 1), side="right"), (0, -1))
    with pytest.raises(InvalidInputError):
        unfold_point(((0, 0), (2, 0)), e3, (0, 1, 0))
    with pytest.raises(DegenerateError):
        unfold_point(e2, e3, (0.5, 0, 0))


@given(pt3, pt3, pt3, st.floats(0, 2 * math.pi), pt2)
def test_unfold_point_is_isometric(a, b, w, phi, shift):
    a, b, w = map(np.array, (a, b, w))
    L = np.linalg.norm(b - a)
    if L < 1e-2:
        return
    h = np.linalg.norm(np.cross(w - a, (b - a) / L))
    if h < 1e-2:
        return
    a2 = np.array(shift)
    b2 = a2 + L * np.array([math.cos(phi), math.sin(phi)])
    out = unfold_point((a2, b2), (a, b), w)
    assert np.linalg.norm(out - a2) == pytest.approx(np.linalg.norm(w - a), rel=1e-9)
    assert np.linalg.norm(out - b2) == pytest.approx(np.linalg.norm(w - b), rel=1e-9)
    assert orientation2d(a2, b2, out) == 1
