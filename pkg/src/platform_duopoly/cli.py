"""Command line entry point: ``platform-duopoly {analyze,allocate,sweep,selftest}``.

Exit codes: 0 on success, 1 when an internal invariant fails (for example
enumerated and predicted equilibria disagree), 2 for a bad config or arguments.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .allocation import (
    brute_force_allocation,
    grid_step,
    optimal_allocation,
    per_transaction_utility,
    welfare,
)
from .checks import run_selftest
from .config import load_market, load_sweep, parse_number
from .exceptions import ConfigurationError, DomainError, DuopolyError, UnsupportedModelError
from .games import (
    PROFILES,
    Objective,
    predicted_ne,
    profile_name,
    pure_nash,
    revenue_payoffs,
    throughput_payoffs,
    winner_takes_all_ne,
)
from .loyalty import Fixed, WinnerTakesAll, degenerate_allocation, resolve_beta
from .market import classify_regime, derived_ratios
from .sweep import run_sweep, summarize


def _num(text: str) -> Fraction:
    try:
        return parse_number(text)
    except ConfigurationError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _fmt(x) -> str:
    return f"{float(x):.12g}"


def _matrix_lines(m) -> list[str]:
    lines = [f"  {'profile':<8}{'platform 1':>16}{'platform 2':>16}"]
    for p in PROFILES:
        a, b = m[p]
        lines.append(f"  {profile_name(p):<8}{_fmt(a):>16}{_fmt(b):>16}")
    return lines


def cmd_analyze(args) -> int:
    loaded = load_market(args.config)
    cfg = loaded.market
    loyalty = Fixed(args.beta) if args.beta is not None else loaded.loyalty
    if loyalty is None:
        raise ConfigurationError("no loyalty given: add a [loyalty] section or pass --beta")
    regime = classify_regime(cfg)
    ratios = derived_ratios(cfg)
    tm = throughput_payoffs(cfg, loyalty)
    rm = revenue_payoffs(cfg, loyalty, tm)
    result = {
        "regime": regime.value,
        "p_bal": float(ratios.p_bal),
        "ratios": {k: float(getattr(ratios, k)) for k in ("rho", "f", "rho_w", "rho_c", "revenue_ratio")},
        "loyalty": repr(loyalty),
        "objectives": {},
    }
    ok = True
    for obj, m in ((Objective.THROUGHPUT, tm), (Objective.REVENUE, rm)):
        enum = pure_nash(m, args.eps)
        if isinstance(loyalty, Fixed):
            pred = predicted_ne(obj, regime, ratios, loyalty.beta).names()
        elif isinstance(loyalty, WinnerTakesAll):
            pred = winner_takes_all_ne(obj, cfg).names()
        else:
            pred = None
        agree = enum.names() == pred if pred is not None else len(enum) > 0
        ok = ok and agree
        result["objectives"][obj.value] = {
            "payoffs": {profile_name(p): [float(v) for v in m[p]] for p in PROFILES},
            "ne_enumerated": enum.names(),
            "ne_predicted": pred,
            "agree": agree,
        }
    if args.format == "json":
        print(json.dumps(result, indent=2))
    else:
        print(f"regime: {regime.value}")
        print(f"p_bal: {_fmt(ratios.p_bal)}")
        print("ratios: " + ", ".join(f"{k}={_fmt(v)}" for k, v in result["ratios"].items()))
        print(f"loyalty: {loyalty!r}")
        for obj, m in ((Objective.THROUGHPUT, tm), (Objective.REVENUE, rm)):
            r = result["objectives"][obj.value]
            print(f"\n{obj.value} payoffs:")
            print("\n".join(_matrix_lines(m)))
            pred = "n/a" if r["ne_predicted"] is None else "{" + ", ".join(r["ne_predicted"]) + "}"
            print(f"  NE enumerated: {{{', '.join(r['ne_enumerated'])}}}")
            print(f"  NE predicted:  {pred}")
    if not ok:
        print("enumerated and predicted equilibria disagree", file=sys.stderr)
        return 1
    return 0


def cmd_allocate(args) -> int:
    loaded = load_market(args.config)
    cfg = loaded.market
    p1, p2 = args.p1, args.p2
    if args.beta is not None:
        beta = args.beta
    elif loaded.loyalty is not None:
        beta = resolve_beta(loaded.loyalty, p1, p2)
    else:
        raise ConfigurationError("no loyalty given: add a [loyalty] section or pass --beta")
    if beta in (0, 1):
        a = degenerate_allocation(cfg, p1, p2, beta)
        print(f"beta={beta} (all customers favor one platform)")
        print(f"w1={_fmt(a.w1)} w2={_fmt(a.w2)} c1={_fmt(a.c1)} c2={_fmt(a.c2)}")
        return 0
    params = loaded.utility_params(beta, p1, p2)
    a = optimal_allocation(cfg, p1, p2, beta, params)
    u = per_transaction_utility(params, cfg.gamma, p1, p2)
    brute = brute_force_allocation(
        cfg, p1, p2, beta, u, params.d_worker, params.d_customer, args.resolution
    )
    h = grid_step(cfg, p1, p2, args.resolution)
    gap = max(abs(float(x) - float(y)) for x, y in zip(a.as_tuple(), brute.as_tuple()))
    w_closed = welfare(a, u, params.d_worker, params.d_customer)
    w_brute = welfare(brute, u, params.d_worker, params.d_customer)
    print(f"p1={_fmt(p1)} p2={_fmt(p2)} beta={_fmt(beta)}")
    print(f"w1={_fmt(a.w1)} w2={_fmt(a.w2)} c1={_fmt(a.c1)} c2={_fmt(a.c2)}")
    print(f"welfare={_fmt(w_closed)}")
    print(
        f"oracle (resolution {args.resolution}): welfare={_fmt(w_brute)} "
        f"max coordinate gap={_fmt(gap)} ({gap / h:.3f} grid steps)"
    )
    if float(w_closed) < float(w_brute) - 1e-9 * max(1.0, abs(float(w_brute))) or gap > 1.5 * h:
        print("closed form is not within tolerance of the grid oracle", file=sys.stderr)
        return 1
    return 0


def cmd_sweep(args) -> int:
    spec = load_sweep(args.config, args.out)
    if spec.output_path is None:
        raise ConfigurationError("sweep needs --out or an 'out' key in [sweep]")
    records = run_sweep(spec)
    s = summarize(records)
    print(
        f"wrote {s['points']} records to {spec.output_path}: "
        f"{s['disagreements']} disagreements, {s['errors']} error points, "
        f"{s['boundary_ties']} float/exact boundary ties"
    )
    for r in records:
        if r.error:
            print(f"error at rho={r.rho} f={r.f} rho_w={r.rho_w} rho_c={r.rho_c}: {r.error}",
                  file=sys.stderr)
            break
    return 1 if s["disagreements"] else 0


def cmd_selftest(args) -> int:
    results = run_selftest(args.seed, quick=not args.full)
    for r in results:
        print(r.line())
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="platform-duopoly",
        description="Allocation, price equilibria and region sweeps for two competing platforms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_config(p, help_text):
        p.add_argument("config_pos", nargs="?", metavar="CONFIG", help=help_text)
        p.add_argument("--config", dest="config_opt", metavar="PATH", help=help_text)

    p = sub.add_parser("analyze", help="regime, ratios, payoffs and equilibria of one market")
    add_config(p, "market INI file")
    p.add_argument("--beta", type=_num, help="fixed loyalty, overrides [loyalty]")
    p.add_argument("--eps", type=float, default=None, help="best-response tolerance")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("allocate", help="welfare-optimal allocation at one price profile")
    add_config(p, "market INI file")
    p.add_argument("--p1", type=_num, required=True)
    p.add_argument("--p2", type=_num, required=True)
    p.add_argument("--beta", type=_num)
    p.add_argument("--resolution", type=int, default=200, help="grid oracle resolution")
    p.set_defaults(func=cmd_allocate)

    p = sub.add_parser("sweep", help="write a region-map CSV")
    add_config(p, "sweep INI file")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("selftest", help="run the invariant suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--full", action="store_true", help="full-size suites (slower)")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "config_pos"):
        args.config = args.config_opt or args.config_pos
        if args.config is None:
            parser.error(f"{args.command} needs a config file")
    try:
        return args.func(args)
    except UnsupportedModelError as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return 2
    except (ConfigurationError, DomainError) as exc:
        print(f"bad config: {exc}", file=sys.stderr)
        return 2
    except DuopolyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
