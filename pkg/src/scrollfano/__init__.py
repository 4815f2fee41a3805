"""Exact computations for Fano varieties of lines on cubic fourfolds with cubic scrolls."""

__version__ = "0.1.0"

from .lattice import GramLattice, IntersectionLattice, abel_jacobi, discriminant_group
from .isometry import GeneratorTable, Isometry, reflection_in, word_eval
from .walls import WallDivisor, WallKind, enumerate_walls_in_region, represents
from .chambers import Chamber, carve_chamber, census, cross_wall, mov_membership
from .birgroup import bir_criterion, find_relations, orbit_count, orbit_reduce, solve_involution
from .scenarios import Scenario, load_scenario

__all__ = [
    "Chamber",
    "GeneratorTable",
    "GramLattice",
    "IntersectionLattice",
    "Isometry",
    "Scenario",
    "WallDivisor",
    "WallKind",
    "abel_jacobi",
    "bir_criterion",
    "carve_chamber",
    "census",
    "cross_wall",
    "discriminant_group",
    "enumerate_walls_in_region",
    "find_relations",
    "load_scenario",
    "mov_membership",
    "orbit_count",
    "orbit_reduce",
    "reflection_in",
    "represents",
    "solve_involution",
    "word_eval",
]
