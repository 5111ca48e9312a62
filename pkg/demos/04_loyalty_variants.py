"""Revenue and throughput equilibria under fixed, price-sensitive and winner-takes-all loyalty."""

from fractions import Fraction

from platform_duopoly import (
    Fixed,
    PriceSensitive,
    Regime,
    WinnerTakesAll,
    classify_regime,
    pure_nash,
    revenue_payoffs,
    throughput_payoffs,
)
from platform_duopoly.sweep import default_ratios, realize_ratios

models = (Fixed(Fraction(1, 2)), PriceSensitive(Fraction(1, 5)), WinnerTakesAll())

for regime in Regime:
    r = default_ratios(regime)
    cfg = realize_ratios(regime, r["rho"], r["f"], r["rho_w"], r["rho_c"])
    print(f"{classify_regime(cfg).value}: rho={r['rho']} f={r['f']} rho_w={r['rho_w']} rho_c={r['rho_c']}")
    for model in models:
        tm = throughput_payoffs(cfg, model)
        rm = revenue_payoffs(cfg, model, tm)
        print(f"  {model!r:<32} throughput NE {pure_nash(tm).names()}  revenue NE {pure_nash(rm).names()}")
