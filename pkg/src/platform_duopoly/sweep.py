"""Parameter sweeps that map equilibrium regions over loyalty and market ratios.

A sweep fixes all but one ratio, builds a market whose curves realize the
requested ratios exactly, and compares enumerated equilibria with the
closed-form prediction at every loyalty value on the grid.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .exceptions import ConfigurationError, DuopolyError
from .games import (
    NESet,
    Objective,
    predicted_ne,
    pure_nash,
    revenue_payoffs,
    throughput_payoffs,
    winner_takes_all_ne,
)
from .loyalty import Fixed, LoyaltyModel, WinnerTakesAll
from .market import Curve, DerivedRatios, MarketConfig, Regime, classify_regime, derived_ratios

CSV_HEADER = (
    "beta", "rho", "f", "rho_w", "rho_c", "regime", "objective",
    "ne_LL_enum", "ne_LH_enum", "ne_HL_enum", "ne_HH_enum",
    "ne_LL_pred", "ne_LH_pred", "ne_HL_pred", "ne_HH_pred", "agree",
)
RATIO_AXES = ("rho", "f", "rho_w", "rho_c")
TEMPLATES = ("figure2", "ratios")


def frange(start, stop, step) -> tuple[Fraction, ...]:
    """Inclusive arithmetic grid in exact rationals, e.g. ``frange("0.01", "0.99", "0.01")``."""
    start, stop, step = (Fraction(str(v)) for v in (start, stop, step))
    if step <= 0:
        raise ConfigurationError("grid step must be positive")
    n = (stop - start) / step
    if n < 0:
        raise ConfigurationError(f"empty grid {start}:{stop}:{step}")
    return tuple(start + i * step for i in range(int(n) + 1))


@dataclass(frozen=True)
class Figure2Template:
    """Fixed linear demand and ladder; supply ``w(x) = s x`` with ``s`` solved from ``rho``."""

    demand_intercept: Fraction = Fraction(100)
    demand_slope: Fraction = Fraction(-2)
    gamma: Fraction = Fraction(1, 2)
    p_low: Fraction = Fraction(5)
    p_high: Fraction = Fraction(48)

    def realize(self, rho) -> MarketConfig:
        demand = Curve.linear(self.demand_intercept, self.demand_slope)
        c_high = demand(self.p_high)
        if rho <= 0 or c_high <= 0:
            raise ConfigurationError(f"rho={rho} is not realizable: need rho > 0 and c(p_H) > 0")
        slope = c_high / (rho * self.gamma * self.p_low)
        hi = -self.demand_intercept / self.demand_slope
        return MarketConfig(
            demand, Curve.linear(0 * slope, slope), self.gamma, self.p_low, self.p_high, (0, hi)
        )


def realize_ratios(
    regime, rho, f, rho_w, rho_c, gamma=Fraction(1, 2), p_high=Fraction(100)
) -> MarketConfig:
    """Affine demand and supply whose ladder ratios equal the given targets exactly.

    Supply is normalized to ``w(gamma p_L) = 1``, so ``c(p_H) = rho``,
    ``w(gamma p_H) = 1 / rho_w`` and ``c(p_L) = rho / rho_c``. The bracket
    runs from where supply (or price) hits zero to where demand does.
    """
    regime = Regime(regime)
    rho, f, rho_w, rho_c = (Fraction(str(v)) if isinstance(v, float) else Fraction(v)
                            for v in (rho, f, rho_w, rho_c))
    for name, v in (("f", f), ("rho_w", rho_w), ("rho_c", rho_c)):
        if not 0 < v < 1:
            raise ConfigurationError(f"{name}={v} must lie in (0, 1)")
    if rho <= 0:
        raise ConfigurationError(f"rho={rho} must be positive")
    ok = {
        Regime.MIXED: rho > rho_c and rho * rho_w < 1,
        Regime.SUPPLY_LIMITED: rho * rho_w >= 1,
        Regime.DEMAND_LIMITED: rho <= rho_c,
    }[regime]
    if not ok:
        raise ConfigurationError(
            f"ratios rho={rho}, rho_w={rho_w}, rho_c={rho_c} are inconsistent with {regime.value}"
        )
    p_low = f * p_high
    w_low, w_high = Fraction(1), 1 / rho_w
    c_low, c_high = rho / rho_c, rho
    s_w = (w_high - w_low) / (gamma * (p_high - p_low))
    supply = Curve.linear(w_low - s_w * gamma * p_low, s_w)
    s_c = (c_high - c_low) / (p_high - p_low)
    demand = Curve.linear(c_low - s_c * p_low, s_c)
    lo = max(Fraction(0), -supply.params[0] / s_w / gamma)
    hi = p_low - c_low / s_c
    cfg_excess_lo = supply(gamma * lo) - demand(lo)
    if cfg_excess_lo > 0:
        raise ConfigurationError(
            "ratios need a negative clearing price with affine curves; not realizable"
        )
    cfg = MarketConfig(demand, supply, gamma, p_low, p_high, (lo, hi))
    if classify_regime(cfg) is not regime:
        raise ConfigurationError(f"realized market is {classify_regime(cfg).value}, not {regime.value}")
    return cfg


def default_ratios(regime, **given) -> dict:
    """Fill unspecified ratios with values that keep ``regime`` realizable."""
    regime = Regime(regime)
    out = {k: Fraction(str(v)) for k, v in given.items() if v is not None}
    half = Fraction(1, 2)
    out.setdefault("f", half)
    if regime is Regime.MIXED:
        out.setdefault("rho", Fraction(2, 5))
        out.setdefault("rho_c", min(out["rho"] / 2, half))
        out.setdefault("rho_w", min(half, 1 / (2 * out["rho"])))
    elif regime is Regime.SUPPLY_LIMITED:
        out.setdefault("rho_w", half)
        out.setdefault("rho", 2 / out["rho_w"])
        out.setdefault("rho_c", half)
    else:
        out.setdefault("rho_c", half)
        out.setdefault("rho", out["rho_c"] * Fraction(9, 10))
        out.setdefault("rho_w", half)
    return out


@dataclass(frozen=True)
class SweepSpec:
    """Grid definition: ``axis`` takes each value in ``values``; the other ratios stay fixed.

    ``loyalty`` is ``None`` for fixed loyalty swept over ``beta_grid``;
    otherwise the given model is used once per axis value.
    """

    beta_grid: tuple
    axis: str = "rho"
    values: tuple = ()
    template: str = "figure2"
    regime: Regime = Regime.MIXED
    fixed: dict = field(default_factory=dict)
    objective: str = "throughput"
    loyalty: LoyaltyModel | None = None
    output_path: str | None = None
    figure2: Figure2Template = field(default_factory=Figure2Template)
    float_check: bool = True

    def __post_init__(self):
        if self.loyalty is None and not self.beta_grid:
            raise ConfigurationError("beta grid is empty")
        if not self.values:
            raise ConfigurationError("swept axis has no values")
        if self.template not in TEMPLATES:
            raise ConfigurationError(f"template must be one of {TEMPLATES}")
        if self.axis not in RATIO_AXES:
            raise ConfigurationError(f"axis must be one of {RATIO_AXES}")
        if self.template == "figure2" and self.axis != "rho":
            raise ConfigurationError("the figure2 template sweeps rho only")
        if self.objective not in ("throughput", "revenue", "both"):
            raise ConfigurationError("objective must be throughput, revenue or both")
        if isinstance(self.loyalty, Fixed):
            raise ConfigurationError("fixed loyalty is swept through beta_grid; leave loyalty unset")
        object.__setattr__(self, "regime", Regime(self.regime))

    @property
    def objectives(self) -> tuple[Objective, ...]:
        if self.objective == "both":
            return (Objective.THROUGHPUT, Objective.REVENUE)
        return (Objective(self.objective),)

    def realize(self, value) -> MarketConfig:
        if self.template == "figure2":
            return self.figure2.realize(Fraction(value))
        ratios = default_ratios(self.regime, **{**self.fixed, self.axis: value})
        return realize_ratios(self.regime, ratios["rho"], ratios["f"], ratios["rho_w"], ratios["rho_c"])


@dataclass(frozen=True)
class RegionRecord:
    """One grid point. ``ne_predicted`` is ``None`` when no closed form applies."""

    beta: object
    rho: object
    f: object
    rho_w: object
    rho_c: object
    regime: Regime | None
    objective: Objective
    ne_enumerated: tuple | None
    ne_predicted: tuple | None
    agree: bool
    # Float enumeration disagreed with the exact result (a boundary tie).
    boundary: bool = False
    error: str | None = None

    def csv_row(self) -> list[str]:
        def num(x):
            return "" if x is None else f"{float(x):.12g}"

        def bits(flags):
            return ["", "", "", ""] if flags is None else [str(int(b)) for b in flags]

        return [
            num(self.beta), num(self.rho), num(self.f), num(self.rho_w), num(self.rho_c),
            "error" if self.regime is None else self.regime.value, self.objective.value,
            *bits(self.ne_enumerated), *bits(self.ne_predicted), str(int(self.agree)),
        ]


def _prediction(objective, regime, ratios, cfg, loyalty, beta) -> NESet | None:
    if loyalty is None:
        return predicted_ne(objective, regime, ratios, beta)
    if isinstance(loyalty, WinnerTakesAll):
        return winner_takes_all_ne(objective, cfg)
    return None


def _matrices(cfg, model, objectives) -> dict:
    tm = throughput_payoffs(cfg, model)
    out = {Objective.THROUGHPUT: tm}
    if Objective.REVENUE in objectives:
        out[Objective.REVENUE] = revenue_payoffs(cfg, model, tm)
    return out


def evaluate_config(
    cfg: MarketConfig,
    objectives,
    beta=None,
    loyalty: LoyaltyModel | None = None,
    ratios: DerivedRatios | None = None,
    float_cfg: MarketConfig | None = None,
) -> list[RegionRecord]:
    """Enumerate and predict equilibria of one market at one loyalty setting.

    When ``float_cfg`` is given, enumeration is repeated in floating point
    with the default tolerance; a differing result marks the record as a
    boundary tie. The exact result is the one reported.
    """
    objectives = tuple(Objective(o) for o in objectives)
    regime = classify_regime(cfg)
    ratios = ratios if ratios is not None else derived_ratios(cfg)
    model = Fixed(beta) if loyalty is None else loyalty
    mats = _matrices(cfg, model, objectives)
    fmats = None
    if float_cfg is not None:
        fmodel = Fixed(float(beta)) if loyalty is None else loyalty
        fmats = _matrices(float_cfg, fmodel, objectives)
    out = []
    for objective in objectives:
        enum = pure_nash(mats[objective])
        pred = _prediction(objective, regime, ratios, cfg, loyalty, beta)
        agree = len(enum) > 0 if pred is None else enum.flags() == pred.flags()
        boundary = fmats is not None and pure_nash(fmats[objective]).flags() != enum.flags()
        out.append(RegionRecord(
            beta, ratios.rho, ratios.f, ratios.rho_w, ratios.rho_c, regime, objective,
            enum.flags(), None if pred is None else pred.flags(), agree, boundary,
        ))
    return out


def evaluate_point(cfg: MarketConfig, objective, beta=None, loyalty=None, float_check=True) -> RegionRecord:
    """Single-objective convenience wrapper around :func:`evaluate_config`."""
    fcfg = cfg.as_float() if float_check and cfg.exact else None
    return evaluate_config(cfg, (objective,), beta, loyalty, float_cfg=fcfg)[0]


def iter_sweep(spec: SweepSpec) -> Iterator[RegionRecord]:
    """Records in grid order: axis value ascending, then beta ascending, then objective."""
    betas = (None,) if spec.loyalty is not None else tuple(sorted(spec.beta_grid))
    for value in sorted(spec.values):
        try:
            cfg = spec.realize(value)
            ratios = derived_ratios(cfg)
        except DuopolyError as exc:
            target = {spec.axis: value}
            for beta in betas:
                for objective in spec.objectives:
                    yield RegionRecord(
                        beta, target.get("rho"), target.get("f"), target.get("rho_w"),
                        target.get("rho_c"), None, objective, None, None, False, error=str(exc),
                    )
            continue
        fcfg = cfg.as_float() if spec.float_check and cfg.exact else None
        for beta in betas:
            yield from evaluate_config(cfg, spec.objectives, beta, spec.loyalty, ratios, fcfg)


def run_sweep(spec: SweepSpec) -> list[RegionRecord]:
    records = list(iter_sweep(spec))
    if spec.output_path:
        write_csv(records, spec.output_path)
    return records


def records_to_csv(records: Sequence[RegionRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in records:
        writer.writerow(r.csv_row())
    return buf.getvalue()


def write_csv(records: Sequence[RegionRecord], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(records_to_csv(records))


def flag_changes(records: Sequence[RegionRecord], profile_index: int) -> list:
    """Beta values where the enumerated flag of one profile differs from the previous point."""
    pts = sorted((r.beta, r.ne_enumerated[profile_index]) for r in records if r.error is None)
    return [b for (_, prev), (b, cur) in zip(pts, pts[1:]) if prev != cur]


def summarize(records: Sequence[RegionRecord]) -> dict:
    return {
        "points": len(records),
        "errors": sum(r.error is not None for r in records),
        "disagreements": sum(r.error is None and not r.agree for r in records),
        "boundary_ties": sum(r.boundary for r in records),
    }


__all__ = [
    "CSV_HEADER", "Figure2Template", "RegionRecord", "SweepSpec", "default_ratios",
    "evaluate_config", "evaluate_point", "flag_changes", "frange", "iter_sweep", "realize_ratios",
    "records_to_csv", "run_sweep", "summarize", "write_csv",
]
