"""Invariant suites behind ``platform-duopoly selftest``.

Each check returns a :class:`CheckResult`; sizes are kept small so the whole
suite runs in a few seconds. The test suite runs the full-size versions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .allocation import (
    brute_force_allocation,
    default_utility_params,
    feasibility_violations,
    grid_step,
    optimal_allocation,
    per_transaction_utility,
    welfare,
    welfare_lipschitz,
)
from .exceptions import ConfigurationError
from .games import (
    PROFILES,
    PayoffMatrix,
    check_cross_objective_implications,
    lemma_pure_forbidden,
    lemma_throughput_game,
    price_of,
    pure_nash,
    revenue_payoffs,
    throughput_payoffs,
    verify_existence_lemmas,
    winner_takes_all_ne,
)
from .loyalty import Fixed, PriceSensitive, WinnerTakesAll
from .market import MarketConfig, Regime
from .sweep import SweepSpec, flag_changes, frange, realize_ratios, run_sweep


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


def random_market(rng: np.random.Generator, regime: Regime | None = None) -> MarketConfig:
    """A random exact affine market in the requested (or a random) regime."""
    regimes = list(Regime)
    for _ in range(100):
        reg = regime or regimes[rng.integers(len(regimes))]
        f, rho_w, rho_c = (Fraction(int(rng.integers(1, 20)), 20) for _ in range(3))
        k = Fraction(int(rng.integers(1, 20)), 20)
        if reg is Regime.MIXED:
            rho = rho_c + k * (1 / rho_w - rho_c)
            if rho == 1 / rho_w:
                continue
        elif reg is Regime.SUPPLY_LIMITED:
            rho = (1 + 2 * k) / rho_w
        else:
            rho = k * rho_c
        try:
            return realize_ratios(reg, rho, f, rho_w, rho_c)
        except ConfigurationError:
            continue
    raise RuntimeError("could not draw a realizable market")


def check_allocation_oracle(rng, n=20, resolution=200) -> CheckResult:
    worst = 0.0
    for _ in range(n):
        cfg = random_market(rng).as_float()
        beta = float(rng.uniform(0.05, 0.95))
        k, l = PROFILES[rng.integers(4)]
        p1, p2 = price_of(cfg, k), price_of(cfg, l)
        params = default_utility_params(cfg.gamma, beta, p1, p2)
        u = per_transaction_utility(params, cfg.gamma, p1, p2)
        closed = optimal_allocation(cfg, p1, p2, beta, params)
        brute = brute_force_allocation(
            cfg, p1, p2, beta, u, params.d_worker, params.d_customer, resolution
        )
        h = grid_step(cfg, p1, p2, resolution)
        w_closed = welfare(closed, u, params.d_worker, params.d_customer)
        w_brute = welfare(brute, u, params.d_worker, params.d_customer)
        gap = max(abs(a - b) for a, b in zip(closed.as_tuple(), brute.as_tuple())) / h
        worst = max(worst, gap)
        if w_closed < w_brute - 1e-9 * max(1.0, abs(w_brute)) or gap > 1.5:
            return CheckResult("allocation oracle", False, f"gap {gap:.3f} steps at beta={beta}")
        if w_brute < w_closed - 3 * h * welfare_lipschitz(u, params.d_worker, params.d_customer):
            return CheckResult("allocation oracle", False, "grid optimum far below closed form")
    return CheckResult("allocation oracle", True, f"{n} configs, worst gap {worst:.3f} grid steps")


def check_structure(rng, n=50) -> CheckResult:
    for _ in range(n):
        cfg = random_market(rng)
        beta = Fraction(int(rng.integers(1, 100)), 100)
        for k, l in PROFILES:
            p1, p2 = price_of(cfg, k), price_of(cfg, l)
            a = optimal_allocation(cfg, p1, p2, beta)
            bad = feasibility_violations(cfg, p1, p2, beta, a)
            if bad or a.c1 != a.w1 or a.c2 != a.w2:
                return CheckResult("allocation structure", False, f"{bad} at beta={beta}")
    return CheckResult("allocation structure", True, f"{n} configs x 4 profiles, exact")


def check_sweeps(step="0.05") -> list[CheckResult]:
    betas = frange(step, 1 - Fraction(step), step)
    specs = {
        "throughput mixed": SweepSpec(betas, values=frange("0.1", "3.0", "0.1")),
        "both supply-limited": SweepSpec(
            betas, axis="rho_w", values=frange("0.1", "0.9", "0.1"), template="ratios",
            regime=Regime.SUPPLY_LIMITED, objective="both"),
        "both demand-limited": SweepSpec(
            betas, axis="rho_c", values=frange("0.1", "0.9", "0.1"), template="ratios",
            regime=Regime.DEMAND_LIMITED, objective="both"),
        "revenue mixed": SweepSpec(
            betas, axis="f", values=frange("0.1", "0.9", "0.1"), template="ratios",
            regime=Regime.MIXED, objective="revenue", fixed={"rho": Fraction(3, 5)}),
    }
    out = []
    for name, spec in specs.items():
        recs = run_sweep(spec)
        bad = [r for r in recs if not r.agree or r.error]
        empty = [r for r in recs if r.ne_enumerated and not any(r.ne_enumerated)]
        out.append(CheckResult(
            f"sweep {name}", not bad and not empty,
            f"{len(recs)} points, {len(bad)} disagreements, {len(empty)} empty",
        ))
    return out


def check_cross_objective(rng, n=50) -> CheckResult:
    for _ in range(n):
        cfg = random_market(rng)
        loyalty = Fixed(Fraction(int(rng.integers(1, 100)), 100))
        tm = throughput_payoffs(cfg, loyalty)
        report = check_cross_objective_implications(tm, revenue_payoffs(cfg, loyalty, tm))
        if not report.ok:
            return CheckResult("throughput/revenue implications", False, report.violations[0])
    return CheckResult("throughput/revenue implications", True, f"{n} configs")


def check_loyalty_variants(rng, n=30) -> CheckResult:
    models = (PriceSensitive(Fraction(1, 20)), PriceSensitive(Fraction(9, 20)), WinnerTakesAll())
    for _ in range(n):
        cfg = random_market(rng)
        for model in models:
            tm = throughput_payoffs(cfg, model)
            for obj, m in (("throughput", tm), ("revenue", revenue_payoffs(cfg, model, tm))):
                ne = pure_nash(m)
                if not ne:
                    return CheckResult("loyalty variants", False, f"empty {obj} NE under {model}")
                if isinstance(model, WinnerTakesAll) and ne.flags() != winner_takes_all_ne(obj, cfg).flags():
                    return CheckResult("loyalty variants", False, f"winner-takes-all {obj} mismatch")
    return CheckResult("loyalty variants", True, f"{n} configs, {len(models)} loyalty models")


def check_lemmas(rng, n_games=1000, grid=50) -> CheckResult:
    ks = [Fraction(k, grid + 1) for k in range(1, grid + 1)]
    for r in ks:
        for beta in ks:
            direct = pure_nash(lemma_throughput_game(r, 1, beta))
            if direct.flags() != verify_existence_lemmas(r, 1, beta).flags():
                return CheckResult("lemma games", False, f"a1/a2={r}, beta={beta}")
    for _ in range(n_games):
        a = rng.integers(-3, 4, size=(2, 2)).tolist()
        b = rng.integers(-3, 4, size=(2, 2)).tolist()
        m = PayoffMatrix.from_tables(a, b)
        if not lemma_pure_forbidden(m) and not pure_nash(m):
            return CheckResult("lemma games", False, f"no pure NE for {a}, {b}")
    return CheckResult("lemma games", True, f"{grid}x{grid} grid, {n_games} random bimatrix games")


def check_figure2(rhos=(Fraction(3, 10), Fraction(7, 10), Fraction(3, 2))) -> CheckResult:
    step = Fraction(1, 100)
    for rho in rhos:
        recs = run_sweep(SweepSpec(frange("0.01", "0.99", "0.01"), values=(rho,)))
        bounds = [b for b in (rho, 1 - rho, 1 / rho, 1 - 1 / rho) if 0 < b < 1]
        for i in range(4):
            for b in flag_changes(recs, i):
                if not any(abs(b - x) <= step for x in bounds):
                    return CheckResult("region boundaries", False, f"rho={rho}: change at beta={b}")
    return CheckResult("region boundaries", True, f"rho in {[str(r) for r in rhos]}")


def run_selftest(seed: int = 0, quick: bool = True) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    results = [
        check_allocation_oracle(rng, n=10 if quick else 200),
        check_structure(rng),
        *check_sweeps("0.05" if quick else "0.01"),
        check_cross_objective(rng),
        check_loyalty_variants(rng),
        check_lemmas(rng, n_games=200 if quick else 1000, grid=20 if quick else 50),
        check_figure2(),
    ]
    return results


__all__ = ["CheckResult", "random_market", "run_selftest"]
