from fractions import Fraction

import pytest

from platform_duopoly import ConfigurationError, PriceSensitive, Regime, WinnerTakesAll, classify_regime, derived_ratios
from platform_duopoly.sweep import (
    CSV_HEADER,
    Figure2Template,
    SweepSpec,
    flag_changes,
    frange,
    realize_ratios,
    records_to_csv,
    run_sweep,
    summarize,
)

HALF = Fraction(1, 2)
BETA_TENTHS = frange("0.1", "0.9", "0.1")


def test_frange_is_exact_and_inclusive():
    g = frange("0.01", "0.99", "0.01")
    assert len(g) == 99 and g[0] == Fraction(1, 100) and g[-1] == Fraction(99, 100)


def test_frange_rejects_bad_step():
    with pytest.raises(ConfigurationError):
        frange(0, 1, 0)


def test_figure2_template_realizes_rho():
    for rho in (Fraction(1, 10), Fraction(7, 10), 3):
        cfg = Figure2Template().realize(rho)
        assert derived_ratios(cfg).rho == rho
        assert classify_regime(cfg) is Regime.MIXED


@pytest.mark.parametrize("regime,rho,rho_w,rho_c", [
    (Regime.MIXED, Fraction(2, 5), HALF, Fraction(1, 5)),
    (Regime.SUPPLY_LIMITED, 4, HALF, HALF),
    (Regime.DEMAND_LIMITED, Fraction(9, 25), HALF, Fraction(2, 5)),
])
def test_realize_ratios_exact(regime, rho, rho_w, rho_c):
    cfg = realize_ratios(regime, rho, Fraction(3, 10), rho_w, rho_c)
    r = derived_ratios(cfg)
    assert (r.rho, r.f, r.rho_w, r.rho_c) == (rho, Fraction(3, 10), rho_w, rho_c)
    assert classify_regime(cfg) is regime


def test_realize_ratios_rejects_inconsistent_targets():
    with pytest.raises(ConfigurationError):
        realize_ratios(Regime.MIXED, Fraction(1, 10), HALF, HALF, Fraction(1, 5))
    with pytest.raises(ConfigurationError):
        realize_ratios(Regime.SUPPLY_LIMITED, 1, HALF, HALF, HALF)


def test_mixed_throughput_regions_at_rho_04():
    recs = run_sweep(SweepSpec(BETA_TENTHS, values=(Fraction(2, 5),)))
    ll = {r.beta for r in recs if r.ne_enumerated[0]}
    lh = {r.beta for r in recs if r.ne_enumerated[1]}
    assert ll == {Fraction(k, 10) for k in (4, 5, 6)}
    assert lh == {Fraction(k, 10) for k in (6, 7, 8, 9)}
    assert all(r.agree for r in recs)


def test_revenue_supply_limited_only_hh():
    spec = SweepSpec(
        BETA_TENTHS, axis="rho_w", values=frange("0.1", "0.9", "0.2"), template="ratios",
        regime=Regime.SUPPLY_LIMITED, objective="revenue",
    )
    for r in run_sweep(spec):
        assert r.ne_enumerated == (False, False, False, True)
        assert r.agree


def test_ordering_outer_ratio_inner_beta():
    spec = SweepSpec((Fraction(3, 5), Fraction(1, 5)), values=(Fraction(7, 10), Fraction(3, 10)), objective="both")
    keys = [(r.rho, r.beta, r.objective.value) for r in run_sweep(spec)]
    assert keys == sorted(keys, key=lambda k: (k[0], k[1], k[2] != "throughput"))


def test_unrealizable_point_becomes_error_record():
    spec = SweepSpec(
        (HALF,), axis="rho", values=(Fraction(1, 10), Fraction(2, 5)), template="ratios",
        regime=Regime.MIXED, fixed={"rho_c": Fraction(1, 5), "rho_w": HALF},
    )
    recs = run_sweep(spec)
    assert recs[0].error is not None and not recs[0].agree
    assert recs[1].error is None and recs[1].agree
    assert summarize(recs)["errors"] == 1
    assert records_to_csv(recs).splitlines()[1].split(",")[5] == "error"


def test_csv_header_and_format():
    recs = run_sweep(SweepSpec((Fraction(1, 3),), values=(Fraction(2, 5),)))
    lines = records_to_csv(recs).splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    row = lines[1].split(",")
    assert row[0] == "0.333333333333"
    assert row[5] == "mixed" and row[6] == "throughput"
    assert set(row[7:]) <= {"0", "1"}


def test_csv_deterministic(tmp_path):
    spec = SweepSpec(frange("0.05", "0.95", "0.05"), values=frange("0.2", "2", "0.3"), objective="both")
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run_sweep(SweepSpec(**{**spec.__dict__, "output_path": str(a)}))
    run_sweep(SweepSpec(**{**spec.__dict__, "output_path": str(b)}))
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("rho", [Fraction(3, 10), Fraction(7, 10), Fraction(3, 2), Fraction(5, 2)])
def test_flag_changes_only_at_predicted_boundaries(rho):
    step = Fraction(1, 100)
    recs = run_sweep(SweepSpec(frange("0.01", "0.99", "0.01"), values=(rho,)))
    bounds = [b for b in (rho, 1 - rho, 1 / rho, 1 - 1 / rho) if 0 < b < 1]
    for i in range(4):
        for b in flag_changes(recs, i):
            assert any(abs(b - x) <= step for x in bounds), (rho, i, b)


def test_price_sensitive_sweep_reports_existence():
    spec = SweepSpec((), values=frange("0.2", "2", "0.6"), loyalty=PriceSensitive(Fraction(1, 5)), objective="both")
    recs = run_sweep(spec)
    assert all(r.beta is None and r.ne_predicted is None and r.agree for r in recs)
    assert records_to_csv(recs).splitlines()[1].startswith(",")


def test_winner_takes_all_sweep_has_predictions():
    spec = SweepSpec((), axis="rho_w", values=frange("0.1", "0.9", "0.1"), template="ratios",
                     regime=Regime.SUPPLY_LIMITED, loyalty=WinnerTakesAll(), objective="both")
    recs = run_sweep(spec)
    assert all(r.ne_predicted is not None and r.agree for r in recs)


def test_sweepspec_validation():
    with pytest.raises(ConfigurationError):
        SweepSpec((), values=(1,))
    with pytest.raises(ConfigurationError):
        SweepSpec((HALF,), values=())
    with pytest.raises(ConfigurationError):
        SweepSpec((HALF,), axis="f", values=(HALF,))
    with pytest.raises(ConfigurationError):
        SweepSpec((HALF,), values=(1,), objective="profit")


def test_region_boundary_ties_carry_both_flags():
    recs = run_sweep(SweepSpec((Fraction(2, 5), Fraction(3, 5)), values=(Fraction(2, 5),)))
    at_04, at_06 = recs
    assert at_04.ne_enumerated[0] and at_04.ne_enumerated[2]  # LL and HL
    assert at_06.ne_enumerated[0] and at_06.ne_enumerated[1]  # LL and LH
