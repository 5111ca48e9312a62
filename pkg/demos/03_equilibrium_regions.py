"""Throughput equilibria across loyalty for the three ratios of the reference region map."""

from fractions import Fraction

from platform_duopoly.sweep import SweepSpec, flag_changes, frange, run_sweep

names = ("LL", "LH", "HL", "HH")
betas = frange("0.01", "0.99", "0.01")

for rho in (Fraction(3, 10), Fraction(7, 10), Fraction(3, 2)):
    recs = run_sweep(SweepSpec(betas, values=(rho,)))
    assert all(r.agree for r in recs)
    print(f"rho={rho}")
    start = recs[0]
    for prev, cur in zip(recs, recs[1:] + [None]):
        if cur is None or cur.ne_enumerated != prev.ne_enumerated:
            ne = [n for n, on in zip(names, prev.ne_enumerated) if on]
            print(f"  beta {float(start.beta):.2f}..{float(prev.beta):.2f}: NE {ne}")
            start = cur
    changes = sorted({b for i in range(4) for b in flag_changes(recs, i)})
    print(f"  region changes at beta = {[float(b) for b in changes]}")
