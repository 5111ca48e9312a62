from fractions import Fraction

import pytest

from platform_duopoly import (
    DomainError,
    Fixed,
    PriceSensitive,
    WinnerTakesAll,
    degenerate_allocation,
    optimal_allocation,
    resolve_beta,
)

from conftest import linear_market

HALF = Fraction(1, 2)


def test_price_sensitive_low_high():
    assert resolve_beta(PriceSensitive(Fraction(1, 5)), 50, 90) == Fraction(7, 10)
    assert resolve_beta(PriceSensitive(0.2), 50, 90) == pytest.approx(0.7)


def test_winner_takes_all():
    m = WinnerTakesAll()
    assert resolve_beta(m, 90, 50) == 0
    assert resolve_beta(m, 50, 90) == 1
    assert resolve_beta(m, 50, 50) == HALF


def test_fixed_ignores_prices():
    for p1, p2 in [(50, 90), (90, 50), (90, 90)]:
        assert resolve_beta(Fixed(0.37), p1, p2) == 0.37


@pytest.mark.parametrize("model", [PriceSensitive(Fraction(1, 10)), PriceSensitive(Fraction(9, 20)), WinnerTakesAll()])
def test_price_symmetry(model):
    for p1, p2 in [(50, 90), (90, 50), (50, 50)]:
        assert resolve_beta(model, p1, p2) == 1 - resolve_beta(model, p2, p1)


@pytest.mark.parametrize("bad", [0, 1, -0.2, 1.01])
def test_fixed_bounds(bad):
    with pytest.raises(DomainError):
        Fixed(bad)


@pytest.mark.parametrize("bad", [0, HALF, 0.6, -0.1])
def test_price_sensitive_bounds(bad):
    with pytest.raises(DomainError):
        PriceSensitive(bad)


def test_small_t_approaches_even_split(mixed_cfg):
    t = Fraction(1, 10**9)
    for p1, p2 in [(50, 90), (90, 50), (90, 90), (50, 50)]:
        near = optimal_allocation(mixed_cfg, p1, p2, resolve_beta(PriceSensitive(t), p1, p2))
        even = optimal_allocation(mixed_cfg, p1, p2, HALF)
        assert all(abs(a - b) < 1e-6 for a, b in zip(near.as_tuple(), even.as_tuple()))


def test_degenerate_supply_limited(supply_limited_cfg):
    a = degenerate_allocation(supply_limited_cfg, 40, 60, 1)
    assert a.as_tuple() == (20, 0, 20, 0)


def test_degenerate_demand_limited(demand_limited_cfg):
    a = degenerate_allocation(demand_limited_cfg, 70, 90, 1)
    assert a.c1 == demand_limited_cfg.demand(70) == 30
    assert a.c2 == 0


def test_degenerate_mirror(mixed_cfg):
    a = degenerate_allocation(mixed_cfg, 50, 90, 1)
    b = degenerate_allocation(mixed_cfg, 90, 50, 0)
    assert (a.w1, a.c1) == (b.w2, b.c2)
    assert (a.w2, a.c2) == (b.w1, b.c1)


def test_degenerate_rejects_interior_beta_and_equal_prices(mixed_cfg):
    with pytest.raises(DomainError):
        degenerate_allocation(mixed_cfg, 50, 90, HALF)
    with pytest.raises(DomainError):
        degenerate_allocation(mixed_cfg, 50, 50, 1)


@pytest.mark.parametrize("fixture", ["supply_limited_cfg", "demand_limited_cfg", "mixed_cfg"])
def test_degenerate_total_is_single_platform_throughput(fixture, request):
    # With the cheaper platform favored, its own caps are the binding ones.
    cfg = request.getfixturevalue(fixture)
    lo, hi = cfg.p_low, cfg.p_high
    a = degenerate_allocation(cfg, lo, hi, 1)
    assert a.c1 == min(cfg.demand(lo), cfg.supply(cfg.gamma * lo))
