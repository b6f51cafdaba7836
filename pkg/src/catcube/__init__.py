"""Finite machinery for CAT(0) cube complexes, right-angled Coxeter groups
and the grid cocycles built from their hyperplanes."""

__version__ = "0.1.0"

from .complex import (
    CubeComplex,
    NpcReport,
    ScaleParams,
    SimplicialComplex,
    ball,
    check_npc,
    dump_complex,
    dump_simplicial,
    induced_subcomplex,
    is_flag,
    load_complex,
    load_simplicial,
    vertex_link,
)
from .curves import (
    ArcSystem,
    Bypass,
    CurveModel,
    Detour,
    Region,
    covering_detour,
    delta_cover,
    maximal_bypass,
    successor_chain,
)
from .gf2 import Gf2System, Inconsistency, Solution, kernel_basis, solve
from .grid import (
    Connector,
    EdgeCocycle,
    Grid,
    Orientation,
    ParityFunction,
    TypePair,
    add_grids,
    assemble_cocycle,
    check_admissible,
    connector_census,
    connector_type,
    delta_parity,
    orient_hyperplane,
    solve_parity,
    verify_cocycle,
)
from .hyperplanes import (
    HalfspacePair,
    Hyperplane,
    IntersectionComponent,
    crossing_graph,
    halfspaces,
    hyperplane_complex,
    hyperplanes,
    intersection_components,
)
from .racg import (
    GroupElement,
    RacgPresentation,
    davis_ball,
    normal_form,
    torus_triangulation,
    validate_counterexample_link,
)

__all__ = [
    "ArcSystem",
    "Bypass",
    "Connector",
    "CubeComplex",
    "CurveModel",
    "Detour",
    "EdgeCocycle",
    "Gf2System",
    "Grid",
    "GroupElement",
    "HalfspacePair",
    "Hyperplane",
    "Inconsistency",
    "IntersectionComponent",
    "NpcReport",
    "Orientation",
    "ParityFunction",
    "RacgPresentation",
    "Region",
    "ScaleParams",
    "SimplicialComplex",
    "Solution",
    "TypePair",
    "add_grids",
    "assemble_cocycle",
    "ball",
    "check_admissible",
    "check_npc",
    "connector_census",
    "connector_type",
    "covering_detour",
    "crossing_graph",
    "davis_ball",
    "delta_cover",
    "delta_parity",
    "dump_complex",
    "dump_simplicial",
    "halfspaces",
    "hyperplane_complex",
    "hyperplanes",
    "induced_subcomplex",
    "intersection_components",
    "is_flag",
    "kernel_basis",
    "load_complex",
    "load_simplicial",
    "maximal_bypass",
    "normal_form",
    "orient_hyperplane",
    "solve",
    "solve_parity",
    "successor_chain",
    "torus_triangulation",
    "validate_counterexample_link",
    "verify_cocycle",
    "vertex_link",
]
