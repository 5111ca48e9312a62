"""Supply and demand curves, market clearing and price regimes.

Quantities may be floats or exact rationals (:class:`fractions.Fraction`).
Linear and table curves keep rational inputs rational, which lets the game
layer decide equilibrium boundary ties without rounding.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import Sequence

import numpy as np
from scipy import optimize

from .exceptions import ConfigurationError, ConvergenceError, DomainError

VALIDATION_SAMPLES = 64


def is_exact(x) -> bool:
    return isinstance(x, Rational) and not isinstance(x, bool)


def exact_div(a, b):
    """``a / b``, kept rational when both operands are exact."""
    if is_exact(a) and is_exact(b):
        return Fraction(a) / Fraction(b)
    return a / b


def half_of(*values):
    """Return 1/2 in the arithmetic of ``values`` (exact if all are exact)."""
    return Fraction(1, 2) if all(is_exact(v) for v in values) else 0.5


class Direction(str, Enum):
    DECREASING = "decreasing"
    INCREASING = "increasing"


class Regime(str, Enum):
    SUPPLY_LIMITED = "supply_limited"
    DEMAND_LIMITED = "demand_limited"
    MIXED = "mixed"


@dataclass(frozen=True)
class Curve:
    """A strictly monotone quantity-of-price curve.

    Build instances with :meth:`linear`, :meth:`exponential` or :meth:`table`.
    ``params`` is ``(intercept, slope)``, ``(scale, rate)`` or a tuple of
    ``(price, quantity)`` knots respectively.
    """

    family: str
    params: tuple
    direction: Direction

    @classmethod
    def linear(cls, intercept, slope, direction: Direction | None = None) -> "Curve":
        if slope == 0:
            raise ConfigurationError("linear curve needs a nonzero slope")
        if direction is None:
            direction = Direction.INCREASING if slope > 0 else Direction.DECREASING
        return cls("linear", (intercept, slope), Direction(direction))

    @classmethod
    def exponential(cls, scale, rate, direction: Direction | None = None) -> "Curve":
        if scale <= 0 or rate == 0:
            raise ConfigurationError("exponential curve needs scale > 0 and rate != 0")
        if direction is None:
            direction = Direction.INCREASING if rate > 0 else Direction.DECREASING
        return cls("exponential", (scale, rate), Direction(direction))

    @classmethod
    def table(cls, knots: Sequence[tuple], direction: Direction | None = None) -> "Curve":
        knots = tuple((p, q) for p, q in sorted(knots))
        if len(knots) < 2:
            raise ConfigurationError("table curve needs at least two knots")
        prices = [p for p, _ in knots]
        if any(b <= a for a, b in zip(prices, prices[1:])):
            raise ConfigurationError("table knot prices must be distinct")
        if direction is None:
            direction = (
                Direction.INCREASING if knots[-1][1] > knots[0][1] else Direction.DECREASING
            )
        return cls("table", knots, Direction(direction))

    def __call__(self, p):
        if self.family == "linear":
            intercept, slope = self.params
            return intercept + slope * p
        if self.family == "exponential":
            scale, rate = self.params
            return float(scale) * math.exp(float(rate) * float(p))
        if self.family == "table":
            return self._interpolate(p)
        raise ConfigurationError(f"unknown curve family {self.family!r}")

    def _interpolate(self, p):
        knots = self.params
        if p < knots[0][0] or p > knots[-1][0]:
            raise DomainError(
                f"price {p} outside table range [{knots[0][0]}, {knots[-1][0]}]"
            )
        i = bisect.bisect_right([k[0] for k in knots], p)
        if i >= len(knots):
            return knots[-1][1]
        (p0, q0), (p1, q1) = knots[i - 1], knots[i]
        return q0 + (q1 - q0) * (p - p0) / (p1 - p0)

    @property
    def exact(self) -> bool:
        if self.family == "exponential":
            return False
        flat = self.params if self.family == "linear" else [v for k in self.params for v in k]
        return all(is_exact(v) for v in flat)

    def scaled(self, k) -> "Curve":
        """The same curve with every quantity multiplied by ``k > 0``."""
        if k <= 0:
            raise DomainError("scale factor must be positive")
        if self.family == "linear":
            a, b = self.params
            return Curve("linear", (k * a, k * b), self.direction)
        if self.family == "exponential":
            a, r = self.params
            return Curve("exponential", (k * a, r), self.direction)
        return Curve("table", tuple((p, k * q) for p, q in self.params), self.direction)

    def as_float(self) -> "Curve":
        if self.family == "table":
            params = tuple((float(p), float(q)) for p, q in self.params)
        else:
            params = tuple(float(v) for v in self.params)
        return Curve(self.family, params, self.direction)

    def validate(self, lo, hi, samples: int = VALIDATION_SAMPLES) -> None:
        """Check strict monotonicity and nonnegativity on ``[lo, hi]`` by sampling."""
        grid = np.linspace(float(lo), float(hi), max(samples, VALIDATION_SAMPLES))
        # Pin the endpoints exactly; linspace rounding could step outside a table.
        values = np.array([float(self(p)) for p in (lo, *grid[1:-1], hi)])
        # Allow rounding noise where a curve reaches zero at a bracket end.
        floor = -1e-12 * max(1.0, float(np.max(np.abs(values))))
        if np.any(values < floor):
            raise ConfigurationError(
                f"{self.family} curve is negative on [{float(lo)}, {float(hi)}]"
            )
        steps = np.diff(values)
        ok = steps < 0 if self.direction is Direction.DECREASING else steps > 0
        if not np.all(ok):
            raise ConfigurationError(
                f"{self.family} curve is not strictly {self.direction.value} "
                f"on [{float(lo)}, {float(hi)}]"
            )


@dataclass(frozen=True)
class MarketConfig:
    """Demand, supply, the worker share ``gamma`` and the two-price ladder.

    ``bracket`` is the working interval of customer prices; supply is
    evaluated at worker payments ``gamma * p`` for ``p`` in the bracket. It
    defaults to ``[0, 2 * p_high]`` and must contain the clearing price.
    """

    demand: Curve
    supply: Curve
    gamma: object
    p_low: object
    p_high: object
    bracket: tuple | None = field(default=None)

    def __post_init__(self):
        if not 0 < self.gamma < 1:
            raise ConfigurationError(f"gamma must lie in (0, 1), got {self.gamma}")
        if not 0 < self.p_low < self.p_high:
            raise ConfigurationError(
                f"need 0 < p_low < p_high, got p_low={self.p_low}, p_high={self.p_high}"
            )
        if self.demand.direction is not Direction.DECREASING:
            raise ConfigurationError("demand must be a decreasing curve")
        if self.supply.direction is not Direction.INCREASING:
            raise ConfigurationError("supply must be an increasing curve")
        lo, hi = self.bracket if self.bracket is not None else (0, 2 * self.p_high)
        if not (lo <= self.p_low and self.p_high <= hi):
            raise ConfigurationError(
                f"bracket [{lo}, {hi}] must contain the price ladder"
            )
        if lo < 0:
            raise ConfigurationError("bracket must lie in nonnegative prices")
        object.__setattr__(self, "bracket", (lo, hi))
        try:
            self.demand.validate(lo, hi)
            self.supply.validate(self.gamma * lo, self.gamma * hi)
        except DomainError as exc:
            raise ConfigurationError(str(exc)) from exc
        if not (self.excess_supply(lo) <= 0 <= self.excess_supply(hi)):
            raise ConfigurationError(
                f"w(gamma p) - c(p) does not change sign on [{lo}, {hi}]; "
                "no clearing price in the bracket"
            )

    @property
    def exact(self) -> bool:
        scalars = (self.gamma, self.p_low, self.p_high)
        return self.demand.exact and self.supply.exact and all(is_exact(v) for v in scalars)

    def excess_supply(self, p):
        """``w(gamma p) - c(p)``; strictly increasing in ``p``."""
        return self.supply(self.gamma * p) - self.demand(p)

    @cached_property
    def _ladder(self) -> dict:
        g = self.gamma
        return {p: (self.demand(p), self.supply(g * p)) for p in (self.p_low, self.p_high)}

    def at(self, p) -> tuple:
        """``(c(p), w(gamma p))`` for a ladder price, cached."""
        try:
            return self._ladder[p]
        except KeyError:
            raise DomainError(f"price {p} is not on the ladder ({self.p_low}, {self.p_high})") from None

    @cached_property
    def p_bal(self) -> float:
        return clearing_price(self)

    def as_float(self) -> "MarketConfig":
        """Floating-point copy, used to cross-check exact computations."""
        lo, hi = self.bracket
        return MarketConfig(
            self.demand.as_float(), self.supply.as_float(), float(self.gamma),
            float(self.p_low), float(self.p_high), (float(lo), float(hi)),
        )

    def scaled(self, k) -> "MarketConfig":
        """Scale both curves by ``k``; prices and regime are unchanged."""
        return MarketConfig(
            self.demand.scaled(k), self.supply.scaled(k), self.gamma,
            self.p_low, self.p_high, self.bracket,
        )


@dataclass(frozen=True)
class DerivedRatios:
    p_bal: float
    rho: object
    f: object
    rho_w: object
    rho_c: object
    revenue_ratio: object


def eval_demand(cfg: MarketConfig, p):
    """Number of customers willing to pay ``p``."""
    lo, hi = cfg.bracket
    if not lo <= p <= hi:
        raise DomainError(f"price {p} outside working interval [{lo}, {hi}]")
    return cfg.demand(p)


def eval_supply(cfg: MarketConfig, p):
    """Number of workers willing to work for a payment of ``p``."""
    lo, hi = cfg.bracket
    if not cfg.gamma * lo <= p <= cfg.gamma * hi:
        raise DomainError(
            f"worker payment {p} outside [{cfg.gamma * lo}, {cfg.gamma * hi}]"
        )
    return cfg.supply(p)


def clearing_price(cfg: MarketConfig, tol: float | None = None, max_iter: int = 200):
    """Root of ``w(gamma p) = c(p)`` on the configured bracket.

    Exact linear markets are solved in closed form and return a ``Fraction``;
    everything else is bisected to ``tol`` and returns a float.
    """
    if cfg.exact and cfg.demand.family == cfg.supply.family == "linear":
        (d0, d1), (s0, s1) = cfg.demand.params, cfg.supply.params
        root = Fraction(d0 - s0) / (s1 * cfg.gamma - d1)
        if not cfg.bracket[0] <= root <= cfg.bracket[1]:
            raise ConfigurationError("no sign change of w(gamma p) - c(p) on the bracket")
        return root
    lo, hi = (float(v) for v in cfg.bracket)
    if tol is None:
        tol = 1e-9 * float(cfg.p_high)

    def g(p):
        return float(cfg.excess_supply(p))

    g_lo, g_hi = g(lo), g(hi)
    if g_lo == 0:
        return lo
    if g_hi == 0:
        return hi
    if g_lo > 0 or g_hi < 0:
        raise ConfigurationError("no sign change of w(gamma p) - c(p) on the bracket")
    root, info = optimize.bisect(
        g, lo, hi, xtol=tol, maxiter=max_iter, full_output=True, disp=False
    )
    if not info.converged:
        raise ConvergenceError(
            f"bisection did not reach tol={tol} in {max_iter} iterations"
        )
    return root


def classify_regime(cfg: MarketConfig) -> Regime:
    """Locate the ladder relative to the clearing price.

    Uses the sign of the excess supply at each ladder price, which is
    equivalent to comparing with ``p_bal`` (the excess is strictly increasing)
    and stays exact on rational configurations.
    """
    if cfg.excess_supply(cfg.p_high) <= 0:
        return Regime.SUPPLY_LIMITED
    if cfg.excess_supply(cfg.p_low) >= 0:
        return Regime.DEMAND_LIMITED
    return Regime.MIXED


def derived_ratios(cfg: MarketConfig) -> DerivedRatios:
    c_low, c_high = cfg.demand(cfg.p_low), cfg.demand(cfg.p_high)
    w_low, w_high = cfg.supply(cfg.gamma * cfg.p_low), cfg.supply(cfg.gamma * cfg.p_high)
    if w_low == 0 or c_low == 0 or w_high == 0:
        raise ConfigurationError("ratios undefined: zero supply or demand at the low price")
    f = exact_div(cfg.p_low, cfg.p_high)
    rho_w = exact_div(w_low, w_high)
    rho_c = exact_div(c_high, c_low)
    if not (0 < f < 1 and 0 < rho_w < 1 and 0 < rho_c < 1):
        raise ConfigurationError(
            f"ratios out of range: f={f}, rho_w={rho_w}, rho_c={rho_c}"
        )
    return DerivedRatios(
        p_bal=cfg.p_bal,
        rho=exact_div(c_high, w_low),
        f=f,
        rho_w=rho_w,
        rho_c=rho_c,
        revenue_ratio=rho_c / f,
    )
