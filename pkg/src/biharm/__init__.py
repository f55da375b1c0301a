"""Boundary-integral solver for the planar biharmonic equation.

Solutions are represented as monogenic functions with values in a
two-dimensional commutative algebra over C and recovered from a
Cauchy-type integral whose density solves a second-kind system on the
boundary.
"""

from .algebra import E1, E2, RHO, BElement, ComponentQuad, PlanePoint, components, embed_point, inv, mul
from .cauchy import (DensityPair, eval_boundary_minus, eval_boundary_plus, eval_exterior,
                     eval_interior)
from .conformal import (BoundaryChart, ConformalMap, QuadratureGrid, make_map, quad_nodes,
                        sigma_eval, tau_eval)
from .errors import (BiharmError, ConfigInvalid, DataLengthMismatch, DegenerateTangent,
                     DisconnectedLattice, IllConditioned, InvalidNodeCount, MapInvalid, NotANode,
                     NotInvertible, PointOutsideRequestedRegion, PointTooCloseToBoundary)
from .fredholm import (DiscreteSystem, SolveDiagnostics, assemble, build_rhs, solvability_defect,
                       solve, transpose_residual)
from .kernels import KernelValue, k1_eval, k2_eval

__all__ = [
    "E1", "E2", "RHO", "BElement", "ComponentQuad", "PlanePoint", "components", "embed_point",
    "inv", "mul", "DensityPair", "eval_boundary_minus", "eval_boundary_plus", "eval_exterior",
    "eval_interior", "BoundaryChart", "ConformalMap", "QuadratureGrid", "make_map", "quad_nodes",
    "sigma_eval", "tau_eval", "DiscreteSystem", "SolveDiagnostics", "assemble", "build_rhs",
    "solvability_defect", "solve", "transpose_residual", "KernelValue", "k1_eval", "k2_eval",
    "BiharmError", "ConfigInvalid", "DataLengthMismatch", "DegenerateTangent", "DisconnectedLattice",
    "IllConditioned", "InvalidNodeCount", "MapInvalid", "NotANode", "NotInvertible",
    "PointOutsideRequestedRegion", "PointTooCloseToBoundary",
]
