"""``hyperorbit`` command line.

Exit codes: 0 when a question was decided or witnessed, 2 when the result is
inconclusive or a budget ran out (the report is still written), 1 on bad input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import analysis as an
from . import repro
from .setdyn import default_max_steps, format_set, hausdorff, orbit
from .space import HyperorbitError, InvalidInput, format_rational, parse_rational
from .systems import describe_builtins, load_system

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # usage mistakes are input errors (exit 1); exit 2 is reserved for inconclusive results
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except InvalidInput as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _emit(payload, out: str | None, text: str | None = None) -> None:
    body = text if text is not None else json.dumps(payload, indent=2) + "\n"
    if out:
        Path(out).write_text(body)
    else:
        sys.stdout.write(body)


def _envelope(args, result: dict, exit_code: int) -> dict:
    return {"command": args.command, "system": args.system, "exit_code": exit_code, "result": result}


# --- commands ---------------------------------------------------------------

def cmd_orbit(args) -> int:
    system = load_system(args.system)
    x = system.space.parse_point(args.point)
    steps = args.steps or default_max_steps()
    rec = orbit(system, x, steps, args.max_set_size)
    code = EXIT_INCONCLUSIVE if rec.size_exceeded else EXIT_OK
    other = None
    if args.against is not None:
        y = system.space.parse_point(args.against)
        other = orbit(system, y, rec.steps, None).sets
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        header = ["step", "size", "min", "max", "set"]
        if other is not None:
            header.append("d_H")
        writer.writerow(header)
        for k, S in enumerate(rec.sets, start=1):
            row = [k, len(S), format_rational(S[0]), format_rational(S[-1]), " ".join(format_set(S))]
            if other is not None:
                row.append(format_rational(hausdorff(system.space, S, other[k - 1])) if k <= len(other) else "")
            writer.writerow(row)
        _emit(None, args.out, buf.getvalue())
    else:
        result = rec.to_dict(system.space)
        if other is not None:
            result["against"] = args.against
            result["d_H"] = [format_rational(hausdorff(system.space, S, T)) for S, T in zip(rec.sets, other)]
        _emit(_envelope(args, result, code), args.out)
    return code


def cmd_period(args) -> int:
    system = load_system(args.system)
    x = system.space.parse_point(args.point)
    verdict = an.classify_periodic(system, x, args.steps, args.max_set_size)
    code = EXIT_INCONCLUSIVE if verdict.status == "unknown" else EXIT_OK
    result = verdict.to_dict(system.space)
    result["classical"] = []
    for i, f in enumerate(system.maps, start=1):
        cv = an.classify_periodic_classical(f, system.space, x, args.steps or default_max_steps())
        result["classical"].append({"map": i, "status": cv.status, "period": cv.period})
    _emit(_envelope(args, result, code), args.out)
    return code


def cmd_transitive(args) -> int:
    system = load_system(args.system)
    mode = args.mode
    if mode == "auto":
        mode = "exact" if system.space.is_finite else "witness"
    if mode == "exact":
        if not system.space.is_finite:
            raise InvalidInput(f"exact transitivity needs a finite space, not {system.space}; use --mode witness")
        report = an.is_transitive_finite(system)
    else:
        report = an.transitivity_evidence(system, args.pairs, args.epsilon, args.horizon, args.radius,
                                          args.seed, jobs=args.jobs)
    code = EXIT_INCONCLUSIVE if report.verdict == "inconclusive" else EXIT_OK
    _emit(_envelope(args, report.to_dict(system.space), code), args.out)
    return code


def _open_sets(args, system):
    space = system.space
    if args.subset:
        if not space.is_finite:
            raise InvalidInput("--subset needs a finite space; use --center/--radius or --balls")
        return [an.Subset(tuple(space.parse_point(p) for p in s.split(","))) for s in args.subset]
    if args.center:
        if space.is_finite:
            raise InvalidInput("balls are for continuous spaces; use --subset on finite spaces")
        return [an.Ball(space.parse_point(c), args.radius) for c in args.center]
    if space.is_finite:
        return None
    return an.seeded_balls(space, args.balls, args.radius, args.seed)


def cmd_sensitivity(args) -> int:
    system = load_system(args.system)
    report = an.sensitivity_scan(system, args.delta, _open_sets(args, system), args.horizon,
                                 seed=args.seed, jobs=args.jobs)
    code = EXIT_INCONCLUSIVE if report.verdict == "inconclusive" else EXIT_OK
    result = report.to_dict(system.space)
    result["nonexpanding_certificate"] = an.nonexpanding(system)
    _emit(_envelope(args, result, code), args.out)
    return code


def cmd_expansion(args) -> int:
    system = load_system(args.system)
    config = an.ExpansionCheckConfig(args.lam, args.samples, args.max_gap, not args.no_wrap_guard, args.seed)
    pairs = an.sample_expansion_pairs(system, config)
    result = an.expansion_check(system, config, pairs)
    _emit(_envelope(args, result.to_dict(), EXIT_OK), args.out)
    return EXIT_OK


def cmd_devaney(args) -> int:
    system = load_system(args.system)
    config = an.DevaneyConfig(
        seed=args.seed, transitivity_pairs=args.pairs, transitivity_epsilon=args.epsilon,
        transitivity_horizon=args.horizon, transitivity_radius=args.radius,
        density_epsilon=args.density_epsilon, density_max_denominator=args.max_denominator,
        density_odd_only=args.odd_only, sensitivity_delta=args.delta, sensitivity_balls=args.balls,
        sensitivity_radius=args.ball_radius, sensitivity_horizon=args.sensitivity_horizon, jobs=args.jobs,
    )
    report = an.devaney_report(system, config)
    code = EXIT_INCONCLUSIVE if report.label == "inconclusive" else EXIT_OK
    _emit(_envelope(args, report.to_dict(system.space), code), args.out)
    return code


def cmd_repro(args) -> int:
    results = [repro.run_case(case) for case in repro.select(args.case)]
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.case.id:<28} {r.case.description}")
        if r.error:
            print(f"      error: {r.error}")
        for c in r.checks:
            mark = "ok " if c.passed else "BAD"
            print(f"      [{mark}] {c.name}: expected {json.dumps(c.expected, default=str)}"
                  f" actual {json.dumps(c.actual, default=str)}")
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} cases passed")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        payload = {"passed": passed == len(results), "cases": [r.to_dict() for r in results]}
        (out / "repro.json").write_text(json.dumps(payload, indent=2, default=str) + "\n")
    return EXIT_OK if passed == len(results) else EXIT_ERROR


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hyperorbit", description="Exact set-valued dynamics for finite families of maps.")
    parser.add_argument("--list-systems", action="store_true", help="list builtin systems and exit")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def command(name, func, help_text, system=True):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.set_defaults(func=func)
        if system:
            p.add_argument("--system", required=True, help="system file path or builtin:<name>")
        p.add_argument("--out", help="write the report here instead of stdout")
        return p

    def seeded(p, jobs=True):
        p.add_argument("--seed", type=int, default=0)
        if jobs:
            p.add_argument("--jobs", type=_positive_int, default=1, help="worker threads (results do not depend on it)")

    p = command("orbit", cmd_orbit, "print F^1(x), ..., F^N(x)")
    p.add_argument("--point", required=True)
    p.add_argument("--steps", type=_positive_int, help="default: $HYPERORBIT_DEFAULT_BUDGET or 10000")
    p.add_argument("--max-set-size", type=_positive_int)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--against", metavar="POINT", help="add the series d_H(F^n(x), F^n(POINT))")

    p = command("period", cmd_period, "classify x as fixed, periodic or not periodic")
    p.add_argument("--point", required=True)
    p.add_argument("--steps", type=_positive_int, help="step budget")
    p.add_argument("--max-set-size", type=_positive_int)

    p = command("transitive", cmd_transitive, "exact transitivity on finite spaces, witness search elsewhere")
    p.add_argument("--mode", choices=["auto", "exact", "witness"], default="auto")
    p.add_argument("--pairs", type=_positive_int, default=10)
    p.add_argument("--epsilon", type=_rational, default=Fraction(1, 100))
    p.add_argument("--horizon", type=_positive_int, default=40)
    p.add_argument("--radius", type=_rational, default=Fraction(1, 10))
    seeded(p)

    p = command("sensitivity", cmd_sensitivity, "search sensitivity witnesses in open sets")
    p.add_argument("--delta", type=_rational, required=True)
    p.add_argument("--horizon", type=_positive_int, default=30)
    p.add_argument("--balls", type=_positive_int, default=20, help="number of seeded balls")
    p.add_argument("--radius", type=_rational, default=Fraction(1, 32))
    p.add_argument("--center", action="append", help="explicit ball center (repeatable)")
    p.add_argument("--subset", action="append", help="finite open set, e.g. 0,2 (repeatable)")
    seeded(p)

    p = command("expansion", cmd_expansion, "check the set-valued expansion inequality on seeded pairs")
    p.add_argument("--lambda", dest="lam", type=_rational, required=True)
    p.add_argument("--samples", type=_positive_int, default=500)
    p.add_argument("--max-gap", type=_rational)
    p.add_argument("--no-wrap-guard", action="store_true")
    seeded(p, jobs=False)

    p = command("devaney", cmd_devaney, "transitivity, periodic density and sensitivity in one report")
    p.add_argument("--pairs", type=_positive_int, default=10)
    p.add_argument("--epsilon", type=_rational, default=Fraction(1, 100), help="transitivity epsilon")
    p.add_argument("--horizon", type=_positive_int, default=40, help="transitivity horizon")
    p.add_argument("--radius", type=_rational, default=Fraction(1, 10), help="transitivity ball radius")
    p.add_argument("--density-epsilon", type=_rational, default=Fraction(1, 50))
    p.add_argument("--max-denominator", type=_positive_int, default=101)
    p.add_argument("--odd-only", action="store_true", help="only odd-denominator density candidates")
    p.add_argument("--delta", type=_rational, default=Fraction(1, 5))
    p.add_argument("--balls", type=_positive_int, default=20)
    p.add_argument("--ball-radius", type=_rational, default=Fraction(1, 32))
    p.add_argument("--sensitivity-horizon", type=_positive_int, default=30)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--jobs", type=_positive_int, default=1)

    p = command("repro", cmd_repro, "run the reference cases", system=False)
    p.add_argument("--case", default="all", help=f"all or one of: {', '.join(repro.case_ids())}")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.list_systems:
            for name, text in describe_builtins():
                print(f"builtin:{name:<22} {text}")
            return EXIT_OK
        if not args.command:
            parser.print_usage(sys.stderr)
            return EXIT_ERROR
        return args.func(args)
    except (UsageError, HyperorbitError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
