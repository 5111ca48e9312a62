"""Closed-form allocation next to the grid-search oracle at every price profile."""

from fractions import Fraction

from platform_duopoly import (
    Curve,
    MarketConfig,
    brute_force_allocation,
    default_utility_params,
    optimal_allocation,
    per_transaction_utility,
    welfare,
)
from platform_duopoly.allocation import grid_step
from platform_duopoly.games import PROFILES, price_of, profile_name

cfg = MarketConfig(Curve.linear(100, -1), Curve.linear(0, 1), Fraction(1, 2), 50, 90, (0, 100))
beta = Fraction(3, 10)

for profile in PROFILES:
    p1, p2 = (price_of(cfg, s) for s in profile)
    params = default_utility_params(cfg.gamma, beta, p1, p2)
    u = per_transaction_utility(params, cfg.gamma, p1, p2)
    closed = optimal_allocation(cfg, p1, p2, beta, params)
    fcfg = cfg.as_float()
    brute = brute_force_allocation(
        fcfg, float(p1), float(p2), float(beta), u, params.d_worker, params.d_customer, 200
    )
    h = grid_step(fcfg, float(p1), float(p2), 200)
    gap = max(abs(float(a) - b) for a, b in zip(closed.as_tuple(), brute.as_tuple()))
    print(f"{profile_name(profile)}: c1={closed.c1} c2={closed.c2}  "
          f"welfare {float(welfare(closed, u, params.d_worker, params.d_customer)):.3f} "
          f"vs grid {welfare(brute, u, params.d_worker, params.d_customer):.3f}, "
          f"gap {gap / h:.2f} steps")
