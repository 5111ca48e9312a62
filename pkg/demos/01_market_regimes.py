"""Clearing price and regime for three linear markets that differ only in the price ladder."""

from fractions import Fraction

from platform_duopoly import Curve, MarketConfig, classify_regime, derived_ratios

demand = Curve.linear(100, -1)
supply = Curve.linear(0, 1)
gamma = Fraction(1, 2)

for p_low, p_high in ((40, 60), (50, 90), (70, 90)):
    cfg = MarketConfig(demand, supply, gamma, p_low, p_high, (0, 100))
    r = derived_ratios(cfg)
    print(f"ladder ({p_low}, {p_high}): p_bal={r.p_bal}  regime={classify_regime(cfg).value}")
    print(f"  rho={r.rho}  f={r.f}  rho_w={r.rho_w}  rho_c={r.rho_c}")
