"""Two platforms compete for customers and workers by posting a low or high price."""

from .allocation import (
    Allocation,
    PerTransactionUtility,
    UtilityParams,
    brute_force_allocation,
    default_utility_params,
    feasibility_violations,
    optimal_allocation,
    per_transaction_utility,
    validate_assumption3,
    welfare,
)
from .exceptions import (
    AssumptionError,
    ConfigurationError,
    ConvergenceError,
    DomainError,
    DuopolyError,
    NonPositiveJoinUtility,
    UnsupportedModelError,
)
from .games import (
    H,
    L,
    PROFILES,
    NESet,
    Objective,
    PayoffMatrix,
    Strategy,
    check_cross_objective_implications,
    predicted_ne,
    pure_nash,
    revenue_payoffs,
    throughput_payoffs,
    verify_existence_lemmas,
    winner_takes_all_ne,
)
from .loyalty import Fixed, PriceSensitive, WinnerTakesAll, degenerate_allocation, resolve_beta
from .market import (
    Curve,
    DerivedRatios,
    MarketConfig,
    Regime,
    classify_regime,
    clearing_price,
    derived_ratios,
    eval_demand,
    eval_supply,
)

__version__ = "0.1.0"
