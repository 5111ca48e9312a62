"""The binary price game between the two platforms.

Payoff matrices are indexed ``[k, l]`` where ``k`` is platform 1's strategy
and ``l`` platform 2's, with ``L = 0`` and ``H = 1``. Entries stay exact when
the market configuration is rational, so :func:`pure_nash` can decide weak
best-response inequalities with ``eps = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum, IntEnum
from fractions import Fraction

import numpy as np

from .allocation import optimal_allocation
from .exceptions import DomainError, UnsupportedModelError
from .loyalty import Fixed, LoyaltyModel, PriceSensitive, WinnerTakesAll, degenerate_allocation, resolve_beta
from .market import DerivedRatios, MarketConfig, Regime, classify_regime, exact_div, is_exact


class Strategy(IntEnum):
    L = 0
    H = 1

    def __str__(self):
        return self.name


class Objective(str, Enum):
    THROUGHPUT = "throughput"
    REVENUE = "revenue"


L, H = Strategy.L, Strategy.H
PROFILES = ((L, L), (L, H), (H, L), (H, H))


def profile_name(profile) -> str:
    return "".join(Strategy(s).name for s in profile)


def price_of(cfg: MarketConfig, s: Strategy):
    return cfg.p_high if s == H else cfg.p_low


@dataclass(frozen=True, eq=False)
class PayoffMatrix:
    """Payoffs of both platforms for each of the four price profiles."""

    pay1: np.ndarray
    pay2: np.ndarray
    objective: Objective | None = None
    cfg: MarketConfig | None = None
    loyalty: LoyaltyModel | None = None

    @classmethod
    def from_tables(cls, pay1, pay2, objective=None) -> "PayoffMatrix":
        return cls(_as_matrix(pay1), _as_matrix(pay2), objective)

    @property
    def exact(self) -> bool:
        return all(is_exact(v) for v in (*self.pay1.flat, *self.pay2.flat))

    def scaled(self, k1, k2=None) -> "PayoffMatrix":
        k2 = k1 if k2 is None else k2
        return PayoffMatrix(self.pay1 * k1, self.pay2 * k2, self.objective, self.cfg, self.loyalty)

    def __getitem__(self, profile):
        k, l = profile
        return self.pay1[k, l], self.pay2[k, l]


def _as_matrix(values) -> np.ndarray:
    out = np.empty((2, 2), dtype=object)
    for k in range(2):
        for l in range(2):
            out[k, l] = values[k][l]
    if not all(is_exact(v) for v in out.flat):
        out = out.astype(float)
    return out


@dataclass(frozen=True)
class NESet:
    """Pure-strategy equilibria, kept in the order LL, LH, HL, HH."""

    profiles: tuple = ()
    eps: object = 0

    def __contains__(self, profile):
        return tuple(profile) in self.profiles

    def __iter__(self):
        return iter(self.profiles)

    def __len__(self):
        return len(self.profiles)

    def as_set(self) -> frozenset:
        return frozenset(self.profiles)

    def flags(self) -> tuple[bool, bool, bool, bool]:
        return tuple(p in self.profiles for p in PROFILES)

    def names(self) -> list[str]:
        return [profile_name(p) for p in self.profiles]

    @classmethod
    def from_flags(cls, flags, eps=0) -> "NESet":
        return cls(tuple(p for p, on in zip(PROFILES, flags) if on), eps)


def _rational(x):
    # Promote plain ints so later divisions stay exact.
    return Fraction(x) if is_exact(x) else x


def _allocation_for(cfg: MarketConfig, p1, p2, beta):
    if beta == 0 or beta == 1:
        return degenerate_allocation(cfg, p1, p2, beta)
    return optimal_allocation(cfg, p1, p2, beta)


def throughput_payoffs(cfg: MarketConfig, loyalty: LoyaltyModel) -> PayoffMatrix:
    """Transactions served by each platform at every price profile."""
    pay1 = [[None, None], [None, None]]
    pay2 = [[None, None], [None, None]]
    for k, l in PROFILES:
        p1, p2 = price_of(cfg, k), price_of(cfg, l)
        a = _allocation_for(cfg, p1, p2, resolve_beta(loyalty, p1, p2))
        pay1[k][l], pay2[k][l] = a.c1, a.c2
    return PayoffMatrix(
        _as_matrix(pay1), _as_matrix(pay2), Objective.THROUGHPUT, cfg, loyalty
    )


def revenue_payoffs(
    cfg: MarketConfig, loyalty: LoyaltyModel, throughput: PayoffMatrix | None = None
) -> PayoffMatrix:
    """Commission revenue ``(1 - gamma) p_i N_i`` for each platform."""
    tm = throughput if throughput is not None else throughput_payoffs(cfg, loyalty)
    keep = 1 - cfg.gamma
    pay1 = [[keep * price_of(cfg, k) * tm.pay1[k, l] for l in (L, H)] for k in (L, H)]
    pay2 = [[keep * price_of(cfg, l) * tm.pay2[k, l] for l in (L, H)] for k in (L, H)]
    return PayoffMatrix(
        _as_matrix(pay1), _as_matrix(pay2), Objective.REVENUE, cfg, loyalty
    )


def default_eps(m: PayoffMatrix):
    """Zero for exact payoffs, else ``1e-9`` times the largest payoff magnitude."""
    if m.exact:
        return 0
    scale = max(float(np.max(np.abs(m.pay1.astype(float)))),
                float(np.max(np.abs(m.pay2.astype(float)))))
    return 1e-9 * scale


def pure_nash(m: PayoffMatrix, eps=None) -> NESet:
    """Profiles where neither platform gains more than ``eps`` by switching price."""
    if eps is None:
        eps = default_eps(m)
    if eps < 0:
        raise DomainError("eps must be nonnegative")
    found = []
    for k, l in PROFILES:
        stays1 = m.pay1[k, l] >= m.pay1[1 - k, l] - eps
        stays2 = m.pay2[k, l] >= m.pay2[k, 1 - l] - eps
        if stays1 and stays2:
            found.append((k, l))
    return NESet(tuple(found), eps)


def _throughput_mixed(rho, beta):
    one = beta * 0 + 1
    inv = one / rho
    return (
        max(rho, 0) <= beta <= min(1 - rho, 1),
        max(1 - rho, 0) <= beta <= min(inv, 1),
        max(1 - inv, 0) <= beta <= min(rho, 1),
        max(inv, 0) <= beta <= min(1 - inv, 1),
    )


def _throughput_supply_limited(rho_w, beta):
    return (
        False,
        0 < beta <= min(1, rho_w),
        max(1 - rho_w, 0) <= beta < 1,
        True,
    )


def _throughput_demand_limited(rho_c, beta):
    return (
        True,
        max(1 - rho_c, 0) <= beta < 1,
        0 < beta <= min(1, rho_c),
        False,
    )


def _revenue_demand_limited(rho_c, f, beta):
    one = f * 0 + 1
    inv_f = one / f
    return (
        f >= min(rho_c / beta, 1) and f >= min(rho_c / (1 - beta), 1),
        inv_f <= min(one / (1 - beta), one / rho_c) and f <= min(rho_c / (1 - beta), 1),
        inv_f <= min(one / beta, one / rho_c) and f <= min(rho_c / beta, 1),
        inv_f >= min(one / (1 - beta), one / rho_c) and inv_f >= min(one / beta, one / rho_c),
    )


def _revenue_mixed(rho, rho_w, rho_c, f, beta):
    one = f * 0 + 1
    inv_f = one / f
    p1_bound = min(one / (1 - beta), one / rho_c, one / (rho * beta), one / (rho * rho_w))
    p2_bound = min(one / beta, one / rho_c, one / (rho * (1 - beta)), one / (rho * rho_w))
    return (
        f >= rho / (1 - beta) and f >= rho / beta,
        inv_f <= p1_bound and f <= rho / (1 - beta),
        inv_f <= p2_bound and f <= rho / beta,
        inv_f >= p1_bound and inv_f >= p2_bound,
    )


def predicted_ne(objective, regime: Regime, ratios: DerivedRatios, beta) -> NESet:
    """Equilibria implied by the closed-form characterization for fixed loyalty.

    Each condition is evaluated as stated, weak inequalities kept weak; an
    empty clamp interval simply means the profile is never an equilibrium.
    """
    if isinstance(beta, Fixed):
        beta = beta.beta
    elif isinstance(beta, (PriceSensitive, WinnerTakesAll)):
        raise UnsupportedModelError("closed-form prediction needs a fixed loyalty beta")
    if not 0 < beta < 1:
        raise DomainError(f"beta must lie in (0, 1), got {beta}")
    objective = Objective(objective)
    regime = Regime(regime)
    beta = _rational(beta)
    r = DerivedRatios(
        ratios.p_bal, *(_rational(v) for v in (
            ratios.rho, ratios.f, ratios.rho_w, ratios.rho_c, ratios.revenue_ratio))
    )
    if objective is Objective.THROUGHPUT:
        if regime is Regime.MIXED:
            flags = _throughput_mixed(r.rho, beta)
        elif regime is Regime.SUPPLY_LIMITED:
            flags = _throughput_supply_limited(r.rho_w, beta)
        else:
            flags = _throughput_demand_limited(r.rho_c, beta)
    else:
        if regime is Regime.SUPPLY_LIMITED:
            flags = (False, False, False, True)
        elif regime is Regime.DEMAND_LIMITED:
            flags = _revenue_demand_limited(r.rho_c, r.f, beta)
        else:
            flags = _revenue_mixed(r.rho, r.rho_w, r.rho_c, r.f, beta)
    return NESet.from_flags(flags)


def revenue_ne_from_revenue_ratio(beta, f, revenue_ratio) -> NESet:
    """Demand-limited revenue equilibria restated via ``R_H / R_L`` and ``p_H / p_L``.

    Used only to confirm equivalence with :func:`predicted_ne`.
    """
    beta, f, rr = (_rational(v) for v in (beta, f, revenue_ratio))
    one = f * 0 + 1
    inv_f = one / f
    return NESet.from_flags((
        rr <= beta and rr <= 1 - beta,
        inv_f <= one / (1 - beta) and 1 - beta <= rr <= 1,
        inv_f <= one / beta and beta <= rr <= 1,
        rr >= 1 or (inv_f >= one / (1 - beta) and inv_f >= one / beta),
    ))


def winner_takes_all_ne(objective, cfg: MarketConfig) -> NESet:
    """Equilibria when every customer joins the strictly cheaper platform."""
    objective = Objective(objective)
    regime = classify_regime(cfg)
    g, pl, ph = cfg.gamma, cfg.p_low, cfg.p_high
    c_l, c_h = cfg.demand(pl), cfg.demand(ph)
    w_l, w_h = cfg.supply(g * pl), cfg.supply(g * ph)
    if objective is Objective.THROUGHPUT:
        if regime is Regime.SUPPLY_LIMITED:
            hh = w_h >= 2 * w_l
        elif regime is Regime.MIXED:
            hh = c_h >= 2 * w_l
        else:
            hh = False
    else:
        if regime is Regime.SUPPLY_LIMITED:
            hh = ph * w_h >= 2 * pl * w_l
        elif regime is Regime.MIXED:
            hh = ph * c_h >= 2 * pl * w_l
        else:
            hh = ph * c_h >= 2 * pl * c_l
    return NESet.from_flags((True, False, False, hh))


@dataclass
class CrossObjectiveReport:
    throughput_ne: NESet
    revenue_ne: NESet
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_cross_objective_implications(tm: PayoffMatrix, rm: PayoffMatrix) -> CrossObjectiveReport:
    """Check that HH carries over from throughput to revenue and LL from revenue to throughput."""
    if tm.cfg is not rm.cfg or tm.loyalty != rm.loyalty:
        if tm.cfg != rm.cfg or tm.loyalty != rm.loyalty:
            raise DomainError("payoff matrices come from different configurations")
    t_ne, r_ne = pure_nash(tm), pure_nash(rm)
    report = CrossObjectiveReport(t_ne, r_ne)
    if (H, H) in t_ne and (H, H) not in r_ne:
        report.violations.append(
            f"HH is a throughput NE but not a revenue NE: revenue payoffs {rm[H, H]} "
            f"vs deviations {rm.pay1[L, H]}, {rm.pay2[H, L]}"
        )
    if (L, L) in r_ne and (L, L) not in t_ne:
        report.violations.append(
            f"LL is a revenue NE but not a throughput NE: throughput payoffs {tm[L, L]} "
            f"vs deviations {tm.pay1[H, L]}, {tm.pay2[L, H]}"
        )
    return report


def lemma_throughput_game(a1, a2, beta) -> PayoffMatrix:
    """Abstract game behind the supply- and demand-limited throughput results.

    Row payoffs follow the lemma's table; the column player's payoffs are the
    same entries scaled by ``(1 - beta) / beta``.
    """
    _check_lemma_args(a1, a2, beta)
    a1, a2, beta = (_rational(v) for v in (a1, a2, beta))
    table = [
        [beta * a1, min(a1, beta * a2)],
        [min(beta / (1 - beta) * a1, beta * a2), beta * a2],
    ]
    scale = (1 - beta) / beta
    return PayoffMatrix.from_tables(table, [[scale * v for v in row] for row in table])


def _check_lemma_args(a1, a2, beta):
    if not 0 < beta < 1:
        raise DomainError(f"beta must lie in (0, 1), got {beta}")
    if not 0 < a1 <= a2:
        raise DomainError(f"need 0 < a1 <= a2, got a1={a1}, a2={a2}")


def verify_existence_lemmas(a1, a2, beta) -> NESet:
    """Equilibria of :func:`lemma_throughput_game` according to the lemma's four clauses."""
    _check_lemma_args(a1, a2, beta)
    ratio = exact_div(a1, a2)
    return NESet.from_flags((
        False,
        0 < beta <= min(1, ratio),
        1 - ratio <= beta,
        True,
    ))


def lemma_pure_forbidden(m: PayoffMatrix) -> bool:
    """True if the payoffs form one of the two best-response cycles without a pure NE."""
    a, b = m.pay1, m.pay2
    a11, a12, a21, a22 = a[0, 0], a[0, 1], a[1, 0], a[1, 1]
    b11, b12, b21, b22 = b[0, 0], b[0, 1], b[1, 0], b[1, 1]
    cycle = a22 < a12 and b22 > b21 and b11 > b12 and a11 < a21
    reverse = a22 > a12 and b22 < b21 and b11 < b12 and a11 > a21
    return bool(cycle or reverse)
