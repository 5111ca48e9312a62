import sys
from fractions import Fraction

import pytest
from hypothesis import assume
from hypothesis import strategies as st

from platform_duopoly import Curve, MarketConfig, Regime
from platform_duopoly.exceptions import ConfigurationError
from platform_duopoly.sweep import realize_ratios

HALF = Fraction(1, 2)


def linear_market(p_low, p_high, supply_slope=1, gamma=HALF, hi=100):
    """c(p) = 100 - p against w(x) = supply_slope * x."""
    return MarketConfig(
        Curve.linear(100, -1), Curve.linear(0, supply_slope), gamma, p_low, p_high, (0, hi)
    )


@pytest.fixture
def mixed_cfg():
    return linear_market(50, 90)


@pytest.fixture
def supply_limited_cfg():
    return linear_market(40, 60)


@pytest.fixture
def demand_limited_cfg():
    return linear_market(70, 90)


def unit_fractions(denominator=40, lo=1, hi=None):
    hi = denominator - 1 if hi is None else hi
    return st.integers(lo, hi).map(lambda k: Fraction(k, denominator))


@st.composite
def markets(draw, regime=None):
    """Exact affine markets in any regime, built from target ladder ratios."""
    reg = draw(st.sampled_from(list(Regime))) if regime is None else regime
    f, rho_w, rho_c = draw(unit_fractions()), draw(unit_fractions()), draw(unit_fractions())
    k = draw(unit_fractions())
    if reg is Regime.MIXED:
        rho = rho_c + k * (1 / rho_w - rho_c)
    elif reg is Regime.SUPPLY_LIMITED:
        rho = (1 + 3 * k) / rho_w
    else:
        rho = k * rho_c
    try:
        return realize_ratios(reg, rho, f, rho_w, rho_c)
    except ConfigurationError:
        assume(False)


betas = unit_fractions(100)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is not None and mod.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.RESULTS, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
