"""Finite structural causal models with exact-arithmetic abstraction checks.

The library decides, by exhaustive enumeration over finite domains and
exact rational probability, whether one causal model abstracts another:
exact transformation, distribution-free (uniform) transformation,
tau-abstraction, strong abstraction, and constructive abstraction.
"""

from .abstraction import (
    ComponentMaps,
    Partition,
    check_constructive,
    check_strong_abstraction,
    check_tau_abstraction,
    compute_induced_sets,
    derive_component_maps,
    derive_omega_tau,
    omega_tau_order_preserving,
    rst,
    search_constructive_partition,
)
from .errors import (
    CakError,
    CyclicModelError,
    EvaluationError,
    InputError,
    ParseError,
    SizeCapExceeded,
)
from .expr import parse_expr, to_source
from .interventions import (
    InterventionMap,
    check_omega,
    enumerate_interventions,
    natural_leq,
    natural_lt,
)
from .maps import ContextMap, StateMap, materialize_state_map
from .model import (
    ALL,
    EMPTY,
    And,
    Assignment,
    CausalFormula,
    CausalModel,
    Context,
    Diagnostic,
    EndoState,
    Event,
    Intervention,
    Not,
    Or,
    Signature,
    VariableDecl,
    apply_intervention,
    check_uev,
    dependency_order,
    enumerate_contexts,
    enumerate_states,
    eval_formula,
    solve,
    solve_under,
    validate,
)
from .prob import (
    RationalDist,
    RationalDistribution,
    StateDistribution,
    context_pushforward,
    equivalent,
    interventional_dist,
    push_to_states,
    tau_pushforward,
    to_uev,
)
from .report import CheckReport
from .transform import (
    check_compatible,
    check_exact,
    check_uniform,
    compose_transformations,
    find_compatible_tau_u,
    iter_compatible_tau_u,
    sample_rational_dist,
    uniform_distribution_probe,
)

__version__ = "0.1.0"

__all__ = [
    "ALL",
    "And",
    "Assignment",
    "CakError",
    "CausalFormula",
    "CausalModel",
    "CheckReport",
    "ComponentMaps",
    "Context",
    "ContextMap",
    "CyclicModelError",
    "Diagnostic",
    "EMPTY",
    "EndoState",
    "EvaluationError",
    "Event",
    "InputError",
    "Intervention",
    "InterventionMap",
    "Not",
    "Or",
    "ParseError",
    "Partition",
    "RationalDist",
    "RationalDistribution",
    "Signature",
    "SizeCapExceeded",
    "StateDistribution",
    "StateMap",
    "VariableDecl",
    "apply_intervention",
    "check_compatible",
    "check_constructive",
    "check_exact",
    "check_omega",
    "check_strong_abstraction",
    "check_tau_abstraction",
    "check_uev",
    "check_uniform",
    "compose_transformations",
    "compute_induced_sets",
    "context_pushforward",
    "dependency_order",
    "derive_component_maps",
    "derive_omega_tau",
    "enumerate_contexts",
    "enumerate_interventions",
    "enumerate_states",
    "equivalent",
    "eval_formula",
    "find_compatible_tau_u",
    "interventional_dist",
    "iter_compatible_tau_u",
    "materialize_state_map",
    "natural_leq",
    "natural_lt",
    "omega_tau_order_preserving",
    "parse_expr",
    "push_to_states",
    "rst",
    "sample_rational_dist",
    "search_constructive_partition",
    "solve",
    "solve_under",
    "tau_pushforward",
    "to_source",
    "to_uev",
    "uniform_distribution_probe",
    "validate",
]
