"""INI loaders for market configurations and sweep specifications.

Numbers are read as exact rationals (``0.1`` and ``1/10`` both become
``Fraction(1, 10)``) so equilibrium boundaries are decided without rounding.
Example market file::

    [demand]
    family = linear
    intercept = 100
    slope = -1

    [supply]
    family = linear
    intercept = 0
    slope = 1

    [market]
    gamma = 1/2
    p_low = 50
    p_high = 90
    bracket = 0, 100

    [loyalty]
    model = fixed
    beta = 1/2
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .allocation import UtilityParams, default_utility_params
from .exceptions import ConfigurationError, DomainError
from .loyalty import Fixed, LoyaltyModel, PriceSensitive, WinnerTakesAll
from .market import Curve, MarketConfig, Regime
from .sweep import Figure2Template, SweepSpec, frange


def parse_number(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigurationError(f"not a number: {text!r}") from exc


def parse_list(text: str) -> tuple[Fraction, ...]:
    """Comma-separated numbers, or an inclusive ``start:stop:step`` range."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigurationError(f"range must be start:stop:step, got {text!r}")
        return frange(*(str(parse_number(p)) for p in parts))
    return tuple(parse_number(p) for p in text.split(",") if p.strip())


def _read(source) -> configparser.ConfigParser:
    cp = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    if isinstance(source, (str, Path)) and Path(source).exists():
        with open(source, encoding="utf-8") as fh:
            cp.read_file(fh)
    elif isinstance(source, str) and "[" in source:
        cp.read_string(source)
    else:
        raise ConfigurationError(f"config file not found: {source}")
    return cp


def _section(cp, name):
    if not cp.has_section(name):
        raise ConfigurationError(f"missing [{name}] section")
    return cp[name]


def _curve(sec) -> Curve:
    family = sec.get("family", "linear").strip()
    try:
        if family == "linear":
            return Curve.linear(parse_number(sec["intercept"]), parse_number(sec["slope"]))
        if family == "exponential":
            return Curve.exponential(parse_number(sec["scale"]), parse_number(sec["rate"]))
        if family == "table":
            knots = []
            for item in sec["knots"].split(","):
                p, q = item.split(":")
                knots.append((parse_number(p), parse_number(q)))
            return Curve.table(knots)
    except KeyError as exc:
        raise ConfigurationError(f"[{sec.name}] is missing key {exc}") from exc
    except ValueError as exc:
        raise ConfigurationError(f"[{sec.name}] knots must look like 'p:q, p:q'") from exc
    raise ConfigurationError(f"unknown curve family {family!r}")


def _loyalty(cp) -> LoyaltyModel | None:
    if not cp.has_section("loyalty"):
        return None
    sec = cp["loyalty"]
    model = sec.get("model", "fixed").strip()
    try:
        if model == "fixed":
            return Fixed(parse_number(sec["beta"])) if "beta" in sec else None
        if model == "price_sensitive":
            return PriceSensitive(parse_number(sec["t"]))
        if model == "winner_takes_all":
            return WinnerTakesAll()
    except KeyError as exc:
        raise ConfigurationError(f"[loyalty] is missing key {exc}") from exc
    except DomainError as exc:
        raise ConfigurationError(str(exc)) from exc
    raise ConfigurationError(f"unknown loyalty model {model!r}")


@dataclass(frozen=True)
class LoadedConfig:
    market: MarketConfig
    loyalty: LoyaltyModel | None
    utility: dict

    def utility_params(self, beta, p1, p2) -> UtilityParams:
        """Default utility parameters with any ``[utility]`` overrides applied."""
        base = default_utility_params(self.market.gamma, beta, p1, p2, self.utility.get("m", 1))
        try:
            return UtilityParams(
                base.worker_benefit,
                base.customer_benefit,
                base.maintenance_m,
                self.utility.get("d_worker", base.d_worker),
                self.utility.get("d_customer", base.d_customer),
            )
        except DomainError as exc:
            raise ConfigurationError(str(exc)) from exc


def load_market(source) -> LoadedConfig:
    """Read a market file (path or INI text)."""
    cp = _read(source)
    sec = _section(cp, "market")
    try:
        gamma = parse_number(sec["gamma"])
        p_low, p_high = parse_number(sec["p_low"]), parse_number(sec["p_high"])
    except KeyError as exc:
        raise ConfigurationError(f"[market] is missing key {exc}") from exc
    bracket = None
    if "bracket" in sec:
        bracket = parse_list(sec["bracket"])
        if len(bracket) != 2:
            raise ConfigurationError("bracket needs two numbers: lo, hi")
    market = MarketConfig(
        _curve(_section(cp, "demand")), _curve(_section(cp, "supply")),
        gamma, p_low, p_high, bracket,
    )
    utility = {}
    if cp.has_section("utility"):
        utility = {k: parse_number(v) for k, v in cp["utility"].items()}
        unknown = set(utility) - {"m", "d_worker", "d_customer"}
        if unknown:
            raise ConfigurationError(f"unknown [utility] keys: {sorted(unknown)}")
    return LoadedConfig(market, _loyalty(cp), utility)


def load_sweep(source, output_path=None) -> SweepSpec:
    """Read a sweep file with a ``[sweep]`` section and optional ``[loyalty]``/``[template]``.

    ``[sweep]`` keys: ``beta`` (grid), ``axis``, ``values``, ``template``
    (``figure2`` or ``ratios``), ``regime``, ``objective`` and fixed ratio
    values ``rho``, ``f``, ``rho_w``, ``rho_c``.
    """
    cp = _read(source)
    sec = _section(cp, "sweep")
    fixed = {k: parse_number(sec[k]) for k in ("rho", "f", "rho_w", "rho_c") if k in sec}
    figure2 = Figure2Template()
    if cp.has_section("template"):
        t = cp["template"]
        figure2 = Figure2Template(**{
            k: parse_number(t[k]) for k in
            ("demand_intercept", "demand_slope", "gamma", "p_low", "p_high") if k in t
        })
    loyalty = _loyalty(cp)
    if isinstance(loyalty, Fixed):
        raise ConfigurationError("sweeps take fixed loyalty from the beta grid")
    axis = sec.get("axis", "rho").strip()
    try:
        return SweepSpec(
            beta_grid=parse_list(sec.get("beta", "0.01:0.99:0.01")),
            axis=axis,
            values=parse_list(sec["values"]) if "values" in sec else (fixed.pop(axis),),
            template=sec.get("template", "figure2").strip(),
            regime=Regime(sec.get("regime", "mixed").strip()),
            fixed={k: v for k, v in fixed.items() if k != axis},
            objective=sec.get("objective", "throughput").strip(),
            loyalty=loyalty,
            output_path=output_path or sec.get("out"),
            figure2=figure2,
        )
    except KeyError as exc:
        raise ConfigurationError(f"[sweep] needs 'values' or a fixed {exc}") from exc
    except ValueError as exc:
        raise ConfigurationError(str(exc)) from exc
