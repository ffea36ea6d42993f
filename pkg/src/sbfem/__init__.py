"""Scaled boundary finite elements with a finite-difference radial solve.

The radial direction of each star-convex subdomain is discretized with
central differences and condensed by a block Thomas sweep, giving a
frequency-dependent dynamic stiffness on the boundary. Bounded and
unbounded (damped, truncated) subdomains couple through shared nodes.
"""

from .assembly import BOUNDED, UNBOUNDED, Subdomain, assemble_coefficients, dof_map
from .geometry import BoundaryElement, jacobian, map_point
from .gll import gll_rule, shape_functions
from .halfspace import HalfspaceProblem, simpson38, surface_displacement
from .material import DampingProfile, Material, elasticity_matrix
from .mesh import Mesh, halfspace_mesh, surface_nodes
from .radial import RadialGrid, build_rows, condense, recover_interior
from .recovery import phase_snapshot, recover_all, sample
from .solver import LoadCase, assemble_global, condense_subdomain, solve, strip_load_vector

__all__ = [
    "BOUNDED", "UNBOUNDED", "Subdomain", "assemble_coefficients", "dof_map",
    "BoundaryElement", "jacobian", "map_point", "gll_rule", "shape_functions",
    "HalfspaceProblem", "simpson38", "surface_displacement",
    "DampingProfile", "Material", "elasticity_matrix",
    "Mesh", "halfspace_mesh", "surface_nodes",
    "RadialGrid", "build_rows", "condense", "recover_interior",
    "phase_snapshot", "recover_all", "sample",
    "LoadCase", "assemble_global", "condense_subdomain", "solve", "strip_load_vector",
]
