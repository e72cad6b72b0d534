"""Exact invariant-ideal toolkit for unguarded (probabilistic) loops."""

from .algebra import (
    MonomialOrder,
    Polynomial,
    Rational,
    VarRing,
    multivariate_divide,
    poly_parse,
)
from .cfinite import (
    ExpPoly,
    UniPoly,
    expoly_eval,
    minimal_recurrence,
    rational_roots,
    solve_closed_form,
)
from .errors import (
    ArityMismatch,
    BudgetExceeded,
    ClosureBudgetExceeded,
    GuardUnsupported,
    IrrationalEigenvalue,
    NoRecurrenceFound,
    NotASkolemReduction,
    NotDeterministic,
    NotIntegerInstance,
    OrderMismatch,
    ParseError,
    ProbabilitySumError,
    SupportBudgetExceeded,
    ToolkitError,
    UnknownVariable,
)
from .groebner import (
    IdealBasis,
    buchberger,
    eliminate,
    ideal_equal,
    ideal_intersect,
    ideal_member,
    variety_is_finite,
)
from .loops import (
    Assignment,
    LoopProgram,
    LRSInstance,
    enumerate_distribution,
    expected_moment,
    format_loop,
    lrs_eval,
    parse_loop,
    simulate,
)
from .moments import (
    MomentSystem,
    degree_targets,
    lift_polynomial_expectation,
    moment_closure,
)
from .reductions import (
    P2PInstance,
    WitnessReport,
    WitnessSystem,
    augment_witness,
    detect_eventual_zero,
    p2p_to_spinv,
    skolem_to_p2p,
    skolem_to_spinv_direct,
    verify_witness_identities,
)
from .relations import (
    BaseLattice,
    MomentRing,
    empirical_relations,
    moment_invariant_ideal,
    moment_ring,
    multiplicative_lattice,
    psi_map,
    relations_ideal,
    restrict_to_order_one,
)

__all__ = [
    "ArityMismatch",
    "Assignment",
    "BaseLattice",
    "BudgetExceeded",
    "ClosureBudgetExceeded",
    "ExpPoly",
    "GuardUnsupported",
    "IdealBasis",
    "IrrationalEigenvalue",
    "LRSInstance",
    "LoopProgram",
    "MomentRing",
    "MomentSystem",
    "MonomialOrder",
    "NoRecurrenceFound",
    "NotASkolemReduction",
    "NotDeterministic",
    "NotIntegerInstance",
    "OrderMismatch",
    "P2PInstance",
    "ParseError",
    "Polynomial",
    "ProbabilitySumError",
    "Rational",
    "SupportBudgetExceeded",
    "ToolkitError",
    "UniPoly",
    "UnknownVariable",
    "VarRing",
    "WitnessReport",
    "WitnessSystem",
    "augment_witness",
    "buchberger",
    "degree_targets",
    "detect_eventual_zero",
    "eliminate",
    "empirical_relations",
    "enumerate_distribution",
    "expected_moment",
    "expoly_eval",
    "format_loop",
    "ideal_equal",
    "ideal_intersect",
    "ideal_member",
    "lift_polynomial_expectation",
    "lrs_eval",
    "minimal_recurrence",
    "moment_closure",
    "moment_invariant_ideal",
    "moment_ring",
    "multiplicative_lattice",
    "multivariate_divide",
    "p2p_to_spinv",
    "parse_loop",
    "poly_parse",
    "psi_map",
    "rational_roots",
    "relations_ideal",
    "restrict_to_order_one",
    "simulate",
    "skolem_to_p2p",
    "skolem_to_spinv_direct",
    "solve_closed_form",
    "variety_is_finite",
    "verify_witness_identities",
]
