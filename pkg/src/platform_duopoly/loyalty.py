"""Customer loyalty models: how served customers split between the platforms."""

from __future__ import annotations

from dataclasses import dataclass

from .allocation import Allocation, _check_ladder
from .exceptions import DomainError
from .market import MarketConfig, half_of


@dataclass(frozen=True)
class Fixed:
    """Platform 1 serves the fraction ``beta`` of customers at every price profile."""

    beta: object

    def __post_init__(self):
        if not 0 < self.beta < 1:
            raise DomainError(f"fixed loyalty must lie in (0, 1), got {self.beta}")


@dataclass(frozen=True)
class PriceSensitive:
    """The cheaper platform gains a share ``t`` over an even split."""

    t: object

    def __post_init__(self):
        if not 0 < self.t < half_of(self.t):
            raise DomainError(f"price sensitivity t must lie in (0, 1/2), got {self.t}")


@dataclass(frozen=True)
class WinnerTakesAll:
    """Every customer goes to the strictly cheaper platform; ties split evenly."""


LoyaltyModel = Fixed | PriceSensitive | WinnerTakesAll


def resolve_beta(model: LoyaltyModel, p1, p2):
    """Fraction of served customers that platform 1 receives at prices ``(p1, p2)``."""
    if isinstance(model, Fixed):
        return model.beta
    if isinstance(model, PriceSensitive):
        half = half_of(model.t, p1, p2)
        if p1 == p2:
            return half
        return half + model.t if p1 < p2 else half - model.t
    if isinstance(model, WinnerTakesAll):
        if p1 == p2:
            return half_of(p1, p2)
        return 1 if p1 < p2 else 0
    raise DomainError(f"unknown loyalty model {model!r}")


def degenerate_allocation(cfg: MarketConfig, p1, p2, beta) -> Allocation:
    """Allocation when all customers prefer one platform (``beta`` is 0 or 1).

    The favored platform serves as many users as its own caps and the market
    totals allow; the other platform serves nobody.
    """
    if beta not in (0, 1):
        raise DomainError(f"degenerate allocation needs beta in {{0, 1}}, got {beta}")
    _check_ladder(cfg, p1, p2)
    if p1 == p2:
        raise DomainError("equal prices split customers evenly; use optimal_allocation")
    g = cfg.gamma
    p_fav = p1 if beta == 1 else p2
    n = min(
        cfg.supply(g * p_fav),
        cfg.demand(p_fav),
        cfg.demand(min(p1, p2)),
        cfg.supply(max(g * p1, g * p2)),
    )
    zero = n * 0
    if beta == 1:
        return Allocation(w1=n, w2=zero, c1=n, c2=zero)
    return Allocation(w1=zero, w2=n, c1=zero, c2=n)
