"""Conformal widths, canonical laminations, and thin-thick decompositions.

Exact and numerical machinery for extremal widths of boundary
quadrilaterals on the hyperbolic disk, weighted arc diagrams of ideal
markings, pair-of-pants boundary weights, elephant-eye Hubbard-tree
combinatorics, and chord-model pull-off dynamics of angle-doubling
orbits.
"""

from .widths import (
    BoundaryCondenser,
    CapacityGrid,
    CircleArc,
    Quadrilateral,
    capacity_width,
    quad_width_exact,
    truncate_width,
)
from .lamination import (
    IdealMarking,
    WeightedArcDiagram,
    canonical_diagram,
    gap_flux,
    thin_thick_report,
    total_weight,
)
from .fuchsian import PantsGroup, build_pants, thin_thick_surface_report
from .elephant import (
    ElephantParams,
    admissible_placements,
    build_model,
    check_bounded_degree,
    flux_comparability,
    hubbard_matrix,
)
from .pullback import (
    AngleOrbit,
    Chord,
    WeightLedger,
    chord,
    find_admissible_orbits,
    newborn_vertical_ledger,
    proof_branch_chain,
    pulloff_time,
    two_to_one_check,
    vertical_arc_exists,
)

__version__ = "0.1.0"

__all__ = [
    "AngleOrbit",
    "BoundaryCondenser",
    "CapacityGrid",
    "Chord",
    "CircleArc",
    "ElephantParams",
    "IdealMarking",
    "PantsGroup",
    "Quadrilateral",
    "WeightLedger",
    "WeightedArcDiagram",
    "admissible_placements",
    "build_model",
    "build_pants",
    "canonical_diagram",
    "capacity_width",
    "check_bounded_degree",
    "chord",
    "find_admissible_orbits",
    "flux_comparability",
    "gap_flux",
    "hubbard_matrix",
    "newborn_vertical_ledger",
    "proof_branch_chain",
    "pulloff_time",
    "quad_width_exact",
    "thin_thick_report",
    "thin_thick_surface_report",
    "total_weight",
    "truncate_width",
    "two_to_one_check",
    "vertical_arc_exists",
]
