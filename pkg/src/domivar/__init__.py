"""Vector optimization under variable domination structures.

Finite-dimensional payoffs, polyhedral domination sets, nonlinear
scalarization and a Picard-type solver for approximate efficient and
nondominated points on finite quasimetric ground sets.
"""
__version__ = "0.1.0"

from .geometry import (
    GeneratorCone,
    Halfspace,
    LinearConstraint,
    PolyhedralSet,
    cone_contains,
    contains,
    generators_to_halfspaces_2d,
    lp_feasible,
    pareto_cone,
    pointedness_pair,
    zero_cone,
)
from .scalarization import ScalarizationSpec, check_scalarization_conditions, gerstewitz, gerstewitz_oracle, psi
from .domination import DominationStructure, SetTemplate, check_F3, leq_E, leq_N
from .quasispace import (
    GroundSet,
    ScaledMetric,
    Table,
    WeightedAsymmetric,
    forward_hausdorff_check,
    is_forward_cauchy,
    q,
    validate_axioms,
)
from .instance import ProblemInstance, SolverConfig
from .analysis import (
    check_pointedness_condition,
    classify,
    epsilon_efficient,
    epsilon_nondominated,
    theta_sets,
    verify_relationship_propositions,
)
from .evp import (
    AssumptionError,
    SolverResult,
    Variant,
    brute_force_fixed_points,
    solve,
    validate_assumptions,
    verify_certificates,
    worthwhile_set,
)
from .behavioral import TrapCertificate, TrapKind, evaluate_move, find_trap, verify_trap
from .io import InstanceError, load_instance, parse_instance, serialize_instance, instance_digest
