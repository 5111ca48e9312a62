"""Welfare-optimal routing of workers and customers to the two platforms.

:func:`optimal_allocation` is the closed-form optimum under fixed loyalty.
:func:`brute_force_allocation` maximizes the same welfare objective on a
lattice and serves as an independent check of the closed form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import AssumptionError, DomainError, NonPositiveJoinUtility
from .market import Curve, MarketConfig, exact_div


@dataclass(frozen=True)
class UtilityParams:
    worker_benefit: Curve
    customer_benefit: Curve
    maintenance_m: object
    d_worker: object
    d_customer: object

    def __post_init__(self):
        if self.maintenance_m < 0:
            raise DomainError("maintenance cost must be nonnegative")
        if self.d_worker <= 0 or self.d_customer <= 0:
            raise DomainError("unmatched disutilities must be positive")


@dataclass(frozen=True)
class PerTransactionUtility:
    u1: object
    u2: object


@dataclass(frozen=True)
class Allocation:
    w1: object
    w2: object
    c1: object
    c2: object
    # "checked" when the full-service condition (see validate_assumption3) was audited,
    # "assumed" when the closed form was applied without them.
    assumption3: str | None = None

    def as_tuple(self) -> tuple:
        return (self.w1, self.w2, self.c1, self.c2)


def default_utility_params(gamma, beta, p1, p2, m=1) -> UtilityParams:
    """Utility parameters that satisfy every assumption by construction.

    Benefits ``b_w(x) = x + m + 1`` and ``b_c(p) = p + 1``, ``d_w = 1`` and
    ``d_c`` one unit above the full-service bound of :func:`validate_assumption3`.
    """
    worker = Curve.linear(m + 1, 1)
    customer = Curve.linear(1, 1)
    u1 = gamma * p1 + 2
    u2 = gamma * p2 + 2
    d_c = 1 + max(beta / (1 - beta) * u1, (1 - beta) / beta * u2)
    return UtilityParams(worker, customer, m, 1, d_c)


def per_transaction_utility(params: UtilityParams, gamma, p1, p2) -> PerTransactionUtility:
    """Joint worker-customer benefit of one transaction on each platform."""
    us = []
    for platform, p in ((1, p1), (2, p2)):
        worker_gain = params.worker_benefit(gamma * p) - params.maintenance_m
        customer_gain = params.customer_benefit(p) - p
        if worker_gain <= 0:
            raise NonPositiveJoinUtility("worker", platform, worker_gain)
        if customer_gain <= 0:
            raise NonPositiveJoinUtility("customer", platform, customer_gain)
        us.append(worker_gain + customer_gain)
    return PerTransactionUtility(*us)


def validate_assumption3(u: PerTransactionUtility, d_customer, beta) -> bool:
    """True iff the unmatched-customer disutility dominates both loyalty-weighted gains."""
    if not 0 < beta < 1:
        raise DomainError(f"beta must lie in (0, 1), got {beta}")
    return d_customer > beta / (1 - beta) * u.u1 and d_customer > (1 - beta) / beta * u.u2


def _check_ladder(cfg: MarketConfig, *prices):
    for p in prices:
        if p != cfg.p_low and p != cfg.p_high:
            raise DomainError(f"price {p} is not on the ladder ({cfg.p_low}, {cfg.p_high})")


def optimal_allocation(
    cfg: MarketConfig, p1, p2, beta, params: UtilityParams | None = None
) -> Allocation:
    """Closed-form maximizer of aggregate user welfare for loyalty ``beta``.

    Platform 1 serves the tightest of six caps; platform 2 serves
    ``(1 - beta) / beta`` times as many, and every user is matched.
    """
    _check_ladder(cfg, p1, p2)
    if not 0 < beta < 1:
        raise DomainError(
            f"beta={beta} is degenerate; use loyalty.degenerate_allocation for beta in {{0, 1}}"
        )
    status = "assumed"
    if params is not None:
        u = per_transaction_utility(params, cfg.gamma, p1, p2)
        if not validate_assumption3(u, params.d_customer, beta):
            raise AssumptionError(
                f"d_c={params.d_customer} too small for beta={beta}, u=({u.u1}, {u.u2})"
            )
        status = "checked"
    c1_cap, w1_cap = cfg.at(p1)
    c2_cap, w2_cap = cfg.at(p2)
    odds = exact_div(beta, 1 - beta)
    c1 = min(
        w1_cap,
        odds * w2_cap,
        c1_cap,
        odds * c2_cap,
        beta * cfg.at(min(p1, p2))[0],
        beta * cfg.at(max(p1, p2))[1],
    )
    c2 = exact_div(1 - beta, beta) * c1
    return Allocation(w1=c1, w2=c2, c1=c1, c2=c2, assumption3=status)


def welfare(a: Allocation, u: PerTransactionUtility, d_worker, d_customer):
    """Aggregate user utility of an allocation, net of unmatched-user losses."""
    m1, m2 = min(a.c1, a.w1), min(a.c2, a.w2)
    idle_workers = a.w1 - m1 + a.w2 - m2
    unserved = a.c1 - m1 + a.c2 - m2
    return u.u1 * m1 + u.u2 * m2 - d_worker * idle_workers - d_customer * unserved


def feasibility_violations(cfg: MarketConfig, p1, p2, beta, a: Allocation, tol=0) -> list[str]:
    """Names of the allocation-problem constraints that ``a`` breaks."""
    g = cfg.gamma
    checks = {
        "w1 <= w(g p1)": a.w1 <= cfg.supply(g * p1) + tol,
        "w2 <= w(g p2)": a.w2 <= cfg.supply(g * p2) + tol,
        "w1 + w2 <= w(max g p)": a.w1 + a.w2 <= cfg.supply(max(g * p1, g * p2)) + tol,
        "c1 <= c(p1)": a.c1 <= cfg.demand(p1) + tol,
        "c2 <= c(p2)": a.c2 <= cfg.demand(p2) + tol,
        "c1 + c2 <= c(min p)": a.c1 + a.c2 <= cfg.demand(min(p1, p2)) + tol,
        "nonnegative": min(a.as_tuple()[:4]) >= -tol,
        "c1 = beta (c1 + c2)": abs(a.c1 - beta * (a.c1 + a.c2)) <= tol,
    }
    return [name for name, ok in checks.items() if not ok]


def grid_step(cfg: MarketConfig, p1, p2, resolution: int) -> float:
    """Customer-total lattice spacing used by :func:`brute_force_allocation`.

    The largest of the three axis ranges divided by ``resolution``.
    """
    g = cfg.gamma
    span = max(
        float(cfg.demand(min(p1, p2))),
        float(cfg.supply(g * p1)),
        float(cfg.supply(g * p2)),
    )
    return span / resolution


def brute_force_allocation(
    cfg: MarketConfig,
    p1,
    p2,
    beta,
    u: PerTransactionUtility,
    d_w,
    d_c,
    resolution: int = 200,
) -> Allocation:
    """Grid-search maximizer of :func:`welfare` over the feasible set.

    Customers are parameterized by their total ``x`` on a lattice of step
    ``h = grid_step(...)``, split ``beta : 1 - beta``. Worker lattices use
    steps ``beta * h`` and ``(1 - beta) * h`` so that every matched
    allocation on the customer lattice is representable. Exact ties keep the
    first point found scanning ``x``, then ``w1``, then ``w2`` ascending.
    """
    if resolution < 50:
        raise DomainError("resolution must be at least 50")
    _check_ladder(cfg, p1, p2)
    g = cfg.gamma
    beta = float(beta)
    if not 0 < beta < 1:
        raise DomainError(f"beta must lie in (0, 1), got {beta}")
    h = grid_step(cfg, p1, p2, resolution)
    step1, step2 = beta * h, (1 - beta) * h
    c_total = float(cfg.demand(min(p1, p2)))
    c1_cap, c2_cap = float(cfg.demand(p1)), float(cfg.demand(p2))
    w1_cap, w2_cap = float(cfg.supply(g * p1)), float(cfg.supply(g * p2))
    w_total = float(cfg.supply(max(g * p1, g * p2)))
    u1, u2, d_w, d_c = float(u.u1), float(u.u2), float(d_w), float(d_c)

    # Small slack so lattice points sitting exactly on a cap stay feasible.
    slack = 1e-12 * max(h, 1.0)

    def lattice(cap, step):
        return np.arange(0, int(np.floor(cap / step + 1e-9)) + 1) * step

    w1s, w2s = lattice(w1_cap, step1), lattice(w2_cap, step2)
    W1, W2 = np.meshgrid(w1s, w2s, indexing="ij")
    pair_ok = W1 + W2 <= w_total + slack

    best_val, best = -np.inf, None
    for i in range(int(np.floor(c_total / h + 1e-9)) + 1):
        c1, c2 = i * step1, i * step2
        if c1 > c1_cap + slack or c2 > c2_cap + slack:
            continue
        m1 = np.minimum(c1, W1)
        m2 = np.minimum(c2, W2)
        val = (
            u1 * m1 + u2 * m2
            - d_w * (W1 - m1 + W2 - m2)
            - d_c * (c1 - m1 + c2 - m2)
        )
        val = np.where(pair_ok, val, -np.inf)
        k = int(np.argmax(val))  # first maximum in (w1, w2) row-major order
        v = val.flat[k]
        if v > best_val:
            a, b = np.unravel_index(k, val.shape)
            best_val, best = v, Allocation(w1=W1[a, b], w2=W2[a, b], c1=c1, c2=c2)
    return best


def welfare_lipschitz(u: PerTransactionUtility, d_w, d_c) -> float:
    """Bound on welfare change per unit move of any single coordinate."""
    return float(max(abs(u.u1), abs(u.u2)) + d_w + d_c)
