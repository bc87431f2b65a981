"""Constant tables, sampled property checks and constructed counterexamples."""
from .checks import (
    CheckReport,
    check_alpha_monotonicity,
    check_axioms,
    check_complexity_triangle_condition,
    check_identities,
    check_ordering_chain,
    check_p3bis,
    check_redundancy_bound,
    check_redundancy_bounds,
    check_triangle,
    check_triangles,
    complexity_condition_slack,
    in_gamma2,
    in_upsilon,
)
from .constants import (
    BoundConstants,
    RedundancyConstants,
    ThetaInterval,
    p3bis_constants,
    p6bis_constant,
    redundancy_constants,
    sharp_power_k1c,
)
from .harness import run_verification
from .sampling import sample_joints, sample_qualifying, sample_triples
