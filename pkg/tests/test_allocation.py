from fractions import Fraction

import numpy as np
import pytest

from platform_duopoly import (
    Allocation,
    AssumptionError,
    Curve,
    DomainError,
    NonPositiveJoinUtility,
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
from platform_duopoly.allocation import grid_step, welfare_lipschitz

from conftest import linear_market

HALF = Fraction(1, 2)


def test_per_transaction_utility_substitution():
    params = UtilityParams(Curve.linear(5, 1), Curve.linear(3, 1), 2, 1, 100)
    u = per_transaction_utility(params, HALF, 40, 40)
    assert u.u1 == 26 and u.u2 == 26


def test_per_transaction_utility_symbolic_form():
    params = UtilityParams(Curve.linear(1, 1), Curve.linear(1, 1), 0, 1, 100)
    for p in (3, 17, Fraction(81, 2)):
        u = per_transaction_utility(params, HALF, p, p)
        assert u.u1 == HALF * p + 2


def test_per_transaction_utility_rejects_zero_customer_gain():
    params = UtilityParams(Curve.linear(0, 1), Curve.linear(0, 1), 2, 1, 100)
    with pytest.raises(NonPositiveJoinUtility) as info:
        per_transaction_utility(params, HALF, 10, 10)
    assert info.value.side == "customer"
    assert info.value.platform == 1


def test_per_transaction_utility_rejects_worker_side():
    params = UtilityParams(Curve.linear(0, 1), Curve.linear(5, 1), 10, 1, 100)
    with pytest.raises(NonPositiveJoinUtility) as info:
        per_transaction_utility(params, HALF, 40, 10)
    assert info.value.side == "worker" and info.value.platform == 2


@pytest.mark.parametrize("u1,u2,beta,d_c,expected", [
    (10, 10, HALF, 11, True),
    (10, 10, HALF, 10, False),
    (1, 1, Fraction(9, 10), Fraction(19, 2), True),
])
def test_validate_assumption3(u1, u2, beta, d_c, expected):
    assert validate_assumption3(PerTransactionUtility(u1, u2), d_c, beta) is expected


@pytest.mark.parametrize("beta", [0, 1, -0.1, 1.5])
def test_validate_assumption3_domain(beta):
    with pytest.raises(DomainError):
        validate_assumption3(PerTransactionUtility(1, 1), 5, beta)


def test_symmetric_prices_split_binding_side():
    cfg = linear_market(60, 90)
    a = optimal_allocation(cfg, 60, 60, HALF)
    assert a.as_tuple() == (15, 15, 15, 15)


def test_low_high_profile_value(mixed_cfg):
    # Caps: w(25)=25, 45, c(50)=50, c(90)=10, 25, 22.5; the c(p_H) cap binds.
    a = optimal_allocation(mixed_cfg, 50, 90, HALF)
    assert a.as_tuple() == (10, 10, 10, 10)


def test_low_high_profile_matches_oracle(mixed_cfg):
    cfg = mixed_cfg.as_float()
    params = default_utility_params(cfg.gamma, 0.5, 50.0, 90.0)
    u = per_transaction_utility(params, cfg.gamma, 50.0, 90.0)
    brute = brute_force_allocation(cfg, 50.0, 90.0, 0.5, u, params.d_worker, params.d_customer, 200)
    h = grid_step(cfg, 50.0, 90.0, 200)
    closed = optimal_allocation(mixed_cfg, 50, 90, HALF)
    assert np.allclose(brute.as_tuple(), [float(v) for v in closed.as_tuple()], atol=h)


@pytest.mark.parametrize("beta", [Fraction(1, 10), Fraction(37, 100), HALF, Fraction(9, 10)])
def test_loyalty_share_is_beta(mixed_cfg, beta):
    for p1, p2 in [(50, 50), (50, 90), (90, 50), (90, 90)]:
        a = optimal_allocation(mixed_cfg, p1, p2, beta)
        assert a.c1 / (a.c1 + a.c2) == beta
        assert a.c1 == a.w1 and a.c2 == a.w2
        assert feasibility_violations(mixed_cfg, p1, p2, beta, a) == []


def test_off_ladder_price_rejected(mixed_cfg):
    with pytest.raises(DomainError):
        optimal_allocation(mixed_cfg, 60, 90, HALF)


@pytest.mark.parametrize("beta", [0, 1])
def test_degenerate_beta_rejected(mixed_cfg, beta):
    with pytest.raises(DomainError):
        optimal_allocation(mixed_cfg, 50, 90, beta)


def test_assumption3_audit(mixed_cfg):
    params = default_utility_params(HALF, HALF, 50, 90)
    assert optimal_allocation(mixed_cfg, 50, 90, HALF, params).assumption3 == "checked"
    assert optimal_allocation(mixed_cfg, 50, 90, HALF).assumption3 == "assumed"
    weak = UtilityParams(params.worker_benefit, params.customer_benefit, 1, 1, 1)
    with pytest.raises(AssumptionError):
        optimal_allocation(mixed_cfg, 50, 90, HALF, weak)


def test_default_params_satisfy_assumptions():
    for beta in (Fraction(1, 100), HALF, Fraction(99, 100)):
        params = default_utility_params(HALF, beta, 50, 90)
        u = per_transaction_utility(params, HALF, 50, 90)
        assert (u.u1, u.u2) == (HALF * 50 + 2, HALF * 90 + 2)
        assert validate_assumption3(u, params.d_customer, beta)


def test_welfare_examples():
    u = PerTransactionUtility(5, 7)
    assert welfare(Allocation(3, 4, 3, 4), u, 2, 3) == 5 * 3 + 7 * 4
    assert welfare(Allocation(10, 0, 8, 0), PerTransactionUtility(5, 0), 2, 3) == 36
    assert welfare(Allocation(0, 0, 0, 0), u, 2, 3) == 0


def test_oracle_symmetric_case():
    cfg = linear_market(60, 90).as_float()
    params = default_utility_params(0.5, 0.5, 60.0, 60.0)
    u = per_transaction_utility(params, 0.5, 60.0, 60.0)
    a = brute_force_allocation(cfg, 60.0, 60.0, 0.5, u, 1, params.d_customer, 100)
    assert a.c1 == pytest.approx(a.c2)
    assert a.w1 == pytest.approx(a.w2)


def test_oracle_resolution_floor(mixed_cfg):
    u = PerTransactionUtility(1, 1)
    with pytest.raises(DomainError):
        brute_force_allocation(mixed_cfg, 50, 90, 0.5, u, 1, 10, 49)


def test_unmatched_customers_without_assumption3():
    # Platform 1's workers are scarce; a tiny d_c makes it worth leaving
    # platform 1 customers unmatched to grow platform 2 throughput.
    cfg = linear_market(10, 90).as_float()
    u = PerTransactionUtility(7.0, 47.0)
    a = brute_force_allocation(cfg, 10.0, 90.0, 0.5, u, 1.0, 0.01, 200)
    assert a.c1 > a.w1 + 1
    assert not validate_assumption3(u, 0.01, 0.5)


def test_beta_monotonicity(mixed_cfg):
    grid = [Fraction(k, 50) for k in range(1, 50)]
    for p1, p2 in [(50, 50), (50, 90), (90, 50), (90, 90)]:
        vals = [optimal_allocation(mixed_cfg, p1, p2, b).c1 for b in grid]
        assert all(a <= b for a, b in zip(vals, vals[1:]))


def test_scale_equivariance(mixed_cfg):
    k = Fraction(7, 3)
    for p1, p2 in [(50, 50), (50, 90), (90, 50), (90, 90)]:
        a = optimal_allocation(mixed_cfg, p1, p2, Fraction(3, 10))
        b = optimal_allocation(mixed_cfg.scaled(k), p1, p2, Fraction(3, 10))
        assert b.as_tuple() == tuple(k * v for v in a.as_tuple())


def test_oracle_gap_and_lipschitz_bound(mixed_cfg):
    cfg = mixed_cfg.as_float()
    for beta in (0.2, 0.5, 0.8):
        params = default_utility_params(0.5, beta, 90.0, 50.0)
        u = per_transaction_utility(params, 0.5, 90.0, 50.0)
        brute = brute_force_allocation(cfg, 90.0, 50.0, beta, u, 1, params.d_customer, 200)
        closed = optimal_allocation(cfg, 90.0, 50.0, beta)
        h = grid_step(cfg, 90.0, 50.0, 200)
        wc = welfare(closed, u, 1, params.d_customer)
        wb = welfare(brute, u, 1, params.d_customer)
        assert wb <= wc + 1e-9 * abs(wc)
        assert wb >= wc - 3 * h * welfare_lipschitz(u, 1, params.d_customer)
        assert max(abs(x - y) for x, y in zip(closed.as_tuple(), brute.as_tuple())) <= 1.5 * h
