"""Incremental maximization: strategies, instance builders, and certificates."""

from .continuous import (
    GOLDEN_RATIO_PLUS_ONE,
    PiecewiseLinearValue,
    capped_identity,
    check_competitive,
    discretize,
    from_separable,
    greedy_scaling,
    identity_curve,
    tilted_identity,
)
from .core import (
    ObjectiveOracle,
    accountable_ordering,
    is_accountable,
    lift_solution,
    opt_profile,
    reduce_to_separable,
)
from .errors import IncmaxError
from .lower_bounds import (
    build_det_lb_instance,
    build_exclusion_instance,
    certify_no_solution,
    chain_exclusions,
    characteristic_analysis,
    recurrence_a,
    recurrence_b,
    rho_star,
)
from .randomized import (
    expected_ratio_lb_smallC,
    g_of,
    integral_bound,
    optimal_r,
    run_randomized,
    schedule,
)
from .separable import SeparableInstance, best_deterministic, normalize
from .yao import YaoCertificate, reference_certificate, search_certificate, yao_bound

__version__ = "0.1.0"

__all__ = [
    "GOLDEN_RATIO_PLUS_ONE",
    "IncmaxError",
    "ObjectiveOracle",
    "PiecewiseLinearValue",
    "SeparableInstance",
    "YaoCertificate",
    "accountable_ordering",
    "best_deterministic",
    "build_det_lb_instance",
    "build_exclusion_instance",
    "capped_identity",
    "certify_no_solution",
    "chain_exclusions",
    "characteristic_analysis",
    "check_competitive",
    "discretize",
    "expected_ratio_lb_smallC",
    "from_separable",
    "g_of",
    "greedy_scaling",
    "identity_curve",
    "integral_bound",
    "is_accountable",
    "lift_solution",
    "normalize",
    "opt_profile",
    "optimal_r",
    "recurrence_a",
    "recurrence_b",
    "reduce_to_separable",
    "reference_certificate",
    "rho_star",
    "run_randomized",
    "schedule",
    "search_certificate",
    "tilted_identity",
    "yao_bound",
]
