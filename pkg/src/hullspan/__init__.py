"""Stretch factors of convex polyhedra and geometric dilation of convex cycles."""

from __future__ import annotations

__version__ = "0.1.0"

from .annulus import Annulus, ConvexCycle, cstar, dilation, f_ratio, fixture_cycle
from .cross_section import great_arc, section
from .disk_chain import SPHERE_STRETCH_BOUND, circumdisk_chain, pair_certificate, unfold
from .geometry import DEFAULT_TOL, Tolerance
from .hull import Polyhedron, convex_hull, validate_assumptions
from .spanner import skeleton, stretch_factor
from .triangle_chain import TriangleChain, chain_bound, shortcut_path, zigzag_path

__all__ = [
    "DEFAULT_TOL",
    "SPHERE_STRETCH_BOUND",
    "Annulus",
    "ConvexCycle",
    "Polyhedron",
    "Tolerance",
    "TriangleChain",
    "chain_bound",
    "circumdisk_chain",
    "convex_hull",
    "cstar",
    "dilation",
    "f_ratio",
    "fixture_cycle",
    "great_arc",
    "pair_certificate",
    "section",
    "shortcut_path",
    "skeleton",
    "stretch_factor",
    "unfold",
    "validate_assumptions",
    "zigzag_path",
]
