"""Command-line front end.

Subcommands: table, risk, simulate, compare, session, reproduce.  Data goes
to stdout (or --out), diagnostics to stderr.  Every randomized command
requires an explicit --seed; identical argv plus seed give byte-identical
output.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from pollaudit import priors as priors_mod
from pollaudit.priors import Prior
from pollaudit.rules import (
    Bayesian,
    BayesianRla,
    TraditionalRlaWithReplacement,
    TraditionalRlaWithoutReplacement,
    WaldWithReplacement,
    WaldWithoutReplacement,
)
from pollaudit.tables import Schedule, build_table, compare_tables, emit_table, parse_table
from pollaudit import riskeval
from pollaudit.session import Decision, export_trail, new_session, record_round

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2


def parse_prior(spec: str, N: int) -> Prior:
    """beta:a,b | beta-binomial:a,b | uniform-winning | uniform | two-point:x0,x1 | file:PATH"""
    if spec == "uniform-winning":
        return priors_mod.uniform_winning(N)
    if spec == "uniform":
        return priors_mod.uniform_all(N)
    if spec.startswith("beta:"):
        a, b = (float(v) for v in spec[5:].split(","))
        return priors_mod.beta_shape(N, a, b)
    if spec.startswith("beta-binomial:"):
        a, b = (float(v) for v in spec[14:].split(","))
        return priors_mod.beta_shape(N, a, b, beta_binomial=True)
    if spec.startswith("two-point:"):
        x0, x1 = (int(v) for v in spec[10:].split(","))
        return priors_mod.two_point(N, x0, x1)
    if spec.startswith("file:"):
        return Prior.loads(Path(spec[5:]).read_text())
    raise ValueError(f"unknown prior spec: {spec!r}")


def build_rule(args: argparse.Namespace):
    audit = args.audit
    if audit == "wald":
        return WaldWithReplacement(args.p0, args.p1, args.alpha, args.beta)
    if audit == "wald-wor":
        return WaldWithoutReplacement(args.p0, args.p1, args.alpha, args.beta, args.N)
    if audit == "rla":
        return TraditionalRlaWithReplacement(args.p, args.alpha, args.beta)
    if audit == "rla-wor":
        return TraditionalRlaWithoutReplacement(args.p, args.alpha, args.beta, args.N)
    if audit == "bayes":
        if args.gamma is None:
            raise ValueError("--gamma is required for --audit bayes")
        return Bayesian(args.gamma, parse_prior(args.prior, args.N))
    if audit == "bayes-rla":
        return BayesianRla(args.alpha, parse_prior(args.prior, args.N))
    raise ValueError(f"unknown audit family: {audit}")


def _add_rule_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--audit", required=True,
                   choices=["wald", "wald-wor", "rla", "rla-wor", "bayes", "bayes-rla"])
    p.add_argument("--N", type=int, help="ballots cast (required except pure with-replacement)")
    p.add_argument("--alpha", type=float, default=0.05, help="risk limit / type I bound")
    p.add_argument("--beta", type=float, default=0.0, help="unnecessary-hand-count bound (0 = BRAVO-style)")
    p.add_argument("--gamma", type=float, help="Bayesian upset-probability bound")
    p.add_argument("--p", type=float, help="declared winner fraction for traditional RLAs")
    p.add_argument("--p0", type=float, help="losing-tally fraction for Wald tests")
    p.add_argument("--p1", type=float, help="winning-tally fraction for Wald tests")
    p.add_argument("--prior", default="uniform-winning",
                   help="beta:a,b | beta-binomial:a,b | uniform-winning | uniform | "
                        "two-point:x0,x1 | file:PATH")
    p.add_argument("--schedule", default="200x2..51200",
                   help="comma list (10,20,40) or geometric START x FACTOR .. END")
    p.add_argument("--no-hand-count", action="store_true",
                   help="omit the k- column (hand count only by exhaustion)")


def _write_output(data: bytes, out: str | None) -> None:
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)


def cmd_table(args) -> int:
    rule = build_rule(args)
    table = build_table(rule, Schedule.parse(args.schedule), hand_count=not args.no_hand_count)
    _write_output(emit_table(table, args.format), args.out)
    return EXIT_OK


def cmd_risk(args) -> int:
    rule = build_rule(args)
    table = build_table(rule, Schedule.parse(args.schedule), hand_count=not args.no_hand_count)
    N = args.N
    method = "enumeration" if args.enumerate else "exact_dp"
    if args.scan_losing:
        report = riskeval.max_risk(table, N, method=method)
    else:
        if args.x is None:
            raise ValueError("need --x TALLY or --scan-losing")
        fn = riskeval.exact_risk_enum if args.enumerate else riskeval.exact_risk_dp
        value = fn(table, N, args.x)
        report = riskeval.RiskReport(per_x={args.x: value}, max_risk=value,
                                     argmax_x=args.x, method=method)
    if args.format == "json":
        _write_output((json.dumps(report.to_json(), indent=2) + "\n").encode(), args.out)
    else:
        _write_output(report.to_csv(), args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    rule = build_rule(args)
    table = build_table(rule, Schedule.parse(args.schedule), hand_count=not args.no_hand_count)
    x = args.x if args.x is not None else args.N // 2
    est = riskeval.simulate_risk(table, args.N, x, args.trials, args.seed, jobs=args.jobs)
    obj = {"x": x, "estimate": est.estimate, "stderr": est.stderr,
           "trials": est.trials, "stops": est.stops, "seed": est.master_seed}
    if args.format == "json":
        _write_output((json.dumps(obj, indent=2) + "\n").encode(), args.out)
    else:
        _write_output(("x,estimate,stderr,trials,stops,seed\n"
                       f"{x},{est.estimate:.6g},{est.stderr:.6g},{est.trials},{est.stops},"
                       f"{est.master_seed}\n").encode(), args.out)
    return EXIT_OK


def cmd_compare(args) -> int:
    tables = [parse_table(Path(f).read_bytes(), "json") for f in args.table]
    comparison = compare_tables(tables, labels=args.label or None)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "kplus.csv").write_bytes(comparison.to_csv())
    (out_dir / "deltas.csv").write_bytes(comparison.deltas_csv())
    verdict = {"ordered_non_increasing": comparison.ordered_non_increasing,
               "labels": list(comparison.labels)}
    (out_dir / "verdict.json").write_text(json.dumps(verdict, indent=2) + "\n")
    if args.figures:
        from pollaudit import figures

        figures.render_kplus_figure(comparison, out_dir / "kplus.png")
        figures.render_delta_figure(comparison, out_dir / "deltas.png")
    print(f"wrote comparison for {len(tables)} tables to {out_dir}", file=sys.stderr)
    return EXIT_OK


def cmd_session(args) -> int:
    rule = build_rule(args)
    schedule = Schedule.parse(args.schedule)
    session = new_session(args.N, rule, schedule, hand_count=not args.no_hand_count)
    print(f"session {session.session_id}: N={args.N}, rounds {list(schedule)}", file=sys.stderr)
    print("enter 'n k' per round (cumulative); blank line or EOF ends", file=sys.stderr)
    for line in sys.stdin:
        line = line.strip()
        if not line:
            break
        try:
            n_str, k_str = line.split()
            session, verdict = record_round(session, int(n_str), int(k_str))
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            continue
        print(f"{session.rounds[-1].n},{session.rounds[-1].k},{verdict.value}")
        if verdict is not Decision.CONTINUE or session.status.value != "active":
            break
    print(f"status: {session.status.value}")
    if args.export:
        Path(args.export).write_bytes(export_trail(session))
        print(f"trail written to {args.export}", file=sys.stderr)
    return EXIT_OK


def cmd_reproduce(args) -> int:
    """Regenerate the reference threshold tables and comparison figure data."""
    import csv
    import io

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    N = 100_000
    schedule = Schedule.default()
    beta = priors_mod.beta_shape(N, 0.5, 0.5)

    # k+ per upset-probability bound, beta-shaped prior
    gammas = [0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["gamma", *schedule])
    tables1 = {}
    for g in gammas:
        t = build_table(Bayesian(g, beta), schedule, hand_count=False)
        tables1[g] = t
        writer.writerow([g, *(row.k_plus for row in t.rows)])
    (out_dir / "bayes_kplus.csv").write_text(buf.getvalue())

    # standard vs risk-limiting Bayesian k+ (uniform prior), with deltas
    uni = priors_mod.uniform_all(N)
    uni_win = priors_mod.uniform_winning(N)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["gamma", "variant", *schedule])
    comparisons = {}
    for g in [0.1, 0.05, 0.005]:
        std = build_table(Bayesian(g, uni), schedule)
        rla = build_table(BayesianRla(g, uni_win), schedule)
        writer.writerow([g, "standard", *(r.k_plus for r in std.rows)])
        writer.writerow([g, "rla", *(r.k_plus for r in rla.rows)])
        comparisons[g] = compare_tables([std, rla], labels=["standard", "rla"])
    (out_dir / "bayes_rla_kplus.csv").write_text(buf.getvalue())
    for g, comp in comparisons.items():
        (out_dir / f"rla_minus_standard_{g}.csv").write_bytes(comp.deltas_csv())

    # four-audit leniency comparison at N=100
    n_small, p, bound = 100, 0.75, 0.001
    small_schedule = Schedule(tuple(range(9, 79)))
    quad = [
        ("rla_with_replacement", build_table(
            TraditionalRlaWithReplacement(p, bound, bound), small_schedule)),
        ("rla_without_replacement", build_table(
            TraditionalRlaWithoutReplacement(p, bound, bound, n_small), small_schedule)),
        ("bayes_rla", build_table(
            BayesianRla(bound, priors_mod.uniform_winning(n_small)), small_schedule)),
        ("bayes", build_table(
            Bayesian(bound, priors_mod.uniform_all(n_small)), small_schedule)),
    ]
    comp4 = compare_tables([t for _, t in quad], labels=[name for name, _ in quad])
    (out_dir / "leniency_kplus.csv").write_bytes(comp4.to_csv())
    cols = [[r.k_plus for r in t.rows] for _, t in quad]
    pairwise = {}
    for i, (name_a, _) in enumerate(quad):
        for j in range(i + 1, len(quad)):
            name_b = quad[j][0]
            bad = [n for n, a, b in zip(small_schedule, cols[i], cols[j])
                   if a is not None and b is not None and a < b]
            pairwise[f"{name_a}>={name_b}"] = {"holds": not bad, "violations_at_n": bad}
    (out_dir / "leniency_verdict.json").write_text(json.dumps(
        {"ordered_non_increasing": comp4.ordered_non_increasing,
         "labels": list(comp4.labels),
         "pairwise": pairwise}, indent=2) + "\n")

    if args.with_risk:
        if args.seed is None:
            raise ValueError("--with-risk requires --seed")
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["gamma", "max_risk_estimate", "stderr"])
        for g in gammas:
            est = riskeval.simulate_risk(tables1[g], N, N // 2, args.trials, args.seed)
            writer.writerow([g, f"{est.estimate:.4f}", f"{est.stderr:.4f}"])
        (out_dir / "bayes_max_risk.csv").write_text(buf.getvalue())

    if args.figures:
        from pollaudit import figures

        for g, comp in comparisons.items():
            figures.render_delta_figure(comp, out_dir / f"rla_minus_standard_{g}.png")
        figures.render_kplus_figure(comp4, out_dir / "leniency_kplus.png")
    print(f"wrote reference data to {out_dir}", file=sys.stderr)
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pollaudit",
        description="Two-candidate ballot-polling audit engine: thresholds, risk, sessions.")
    parser.add_argument("--config", help="JSON file with default flag values")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", help="build and emit a k+/k- lookup table")
    _add_rule_flags(p)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("risk", help="exact risk by dynamic programming or enumeration")
    _add_rule_flags(p)
    p.add_argument("--x", type=int, help="true winner tally to evaluate")
    p.add_argument("--scan-losing", action="store_true", help="scan all losing tallies")
    p.add_argument("--enumerate", action="store_true", help="use the N<=15 enumeration oracle")
    p.add_argument("--format", choices=["csv", "json"], default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_risk)

    p = sub.add_parser("simulate", help="Monte Carlo max-risk estimate")
    _add_rule_flags(p)
    p.add_argument("--x", type=int, help="true tally (default: the tie)")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", choices=["csv", "json"], default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="compare k+ across prebuilt JSON tables")
    p.add_argument("--table", action="append", required=True, help="table JSON file (repeatable)")
    p.add_argument("--label", action="append", help="label per table (repeatable)")
    p.add_argument("--out-dir", default="comparison")
    p.add_argument("--figures", action="store_true", help="render PNG figures alongside the CSVs")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("session", help="interactive round-by-round audit session")
    _add_rule_flags(p)
    p.add_argument("--export", help="write the audit trail JSON here on exit")
    p.set_defaults(func=cmd_session)

    p = sub.add_parser("reproduce", help="regenerate reference tables and figure data")
    p.add_argument("--out-dir", default="reference")
    p.add_argument("--with-risk", action="store_true", help="also estimate max risk by Monte Carlo")
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--seed", type=int)
    p.add_argument("--figures", action="store_true", help="render PNG figures alongside the CSVs")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(argv)
    if args.config:
        # config supplies defaults; flags given on the command line win
        supplied = {a.split("=", 1)[0].lstrip("-").replace("-", "_")
                    for a in argv if a.startswith("--")}
        defaults = json.loads(Path(args.config).read_text())
        for key, value in defaults.items():
            if key not in supplied and hasattr(args, key):
                setattr(args, key, value)
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
