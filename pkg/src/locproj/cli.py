"""Command-line front end.

Every command parses flags, calls one library function and prints its
report.  Exit codes: 0 match, 2 mismatch, 3 no stabilization, 64 bad config.
"""

import argparse
import json
import sys

from .errors import LocProjError, NoStabilization
from .grassmann import WeightList, euler_report
from .models import EXAMPLES, get_spec, hilbert_grading, jtp_check, load_spec, vanishing_lemma_check
from .plethysm import SymFun
from .projection import Cutoffs, check_conditions, verify_projection

EXIT_OK = 0
EXIT_MISMATCH = 2
EXIT_UNSTABLE = 3
EXIT_CONFIG = 64


class ConfigError(Exception):
    pass


def _ints(text):
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise ConfigError(f"expected comma-separated integers, got {text!r}") from None


def _symfun(text):
    if text is None:
        return None
    try:
        return SymFun.from_json(text)
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"--f must be a JSON list of {{coeff, indices}}: {exc}") from None


def _spec(args):
    if args.spec and args.example:
        raise ConfigError("give either --example or --spec, not both")
    if args.spec:
        try:
            return load_spec(args.spec)
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise ConfigError(f"cannot load spec {args.spec}: {exc}") from None
    name = args.example or "hilbert-plane"
    if name not in EXAMPLES:
        raise ConfigError(f"unknown example {name!r}; choose from {', '.join(sorted(EXAMPLES))}")
    return get_spec(name)


def _grading(args, spec):
    if args.grading:
        g = _ints(args.grading)
        if not any(g):
            raise ConfigError("grading must be nonzero")
        return g
    if spec.name == "hilbert-plane":
        return tuple(hilbert_grading(args.order))
    return None


def _emit(args, payload, text):
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(text)


def _series_line(label, coeffs):
    return f"{label}: " + ", ".join(str(c) for c in coeffs)


def cmd_verify(args):
    spec = _spec(args)
    grading = _grading(args, spec)
    N = args.order * spec.order_scale
    cut = Cutoffs(N, N, N, N, args.window)
    try:
        report = verify_projection(
            spec, n=args.n, m=args.m, f=_symfun(args.f), order=args.order,
            grading=grading, cutoffs=cut, budget=args.budget,
        )
    except NoStabilization as exc:
        _emit(args, {"error": "no-stabilization", "message": str(exc), "trace": exc.trace}, f"no stabilization: {exc}")
        return EXIT_UNSTABLE
    lines = [
        f"{report.example}  n={report.n} m={report.m} grading={tuple(report.grading)} order={report.order}",
    ]
    if report.lhs is not None:
        lines.append(_series_line("lhs", report.series_by_order("lhs")))
        lines.append(_series_line("rhs", report.series_by_order("rhs")))
        c = report.cutoffs
        lines.append(f"stabilized at k={c.k} l={c.l} J={c.J}")
    lines.append("match" if report.match else f"MISMATCH (first degree {report.first_mismatch})")
    lines.extend(f"note: {n}" for n in report.notes)
    _emit(args, report.to_json(), "\n".join(lines))
    return report.exit_code()


def cmd_euler(args):
    if not args.weights:
        raise ConfigError("euler needs --weights, e.g. --weights 0,1 or a JSON list of exponent lists")
    text = args.weights.strip()
    if text.startswith("["):
        Z = WeightList([tuple(w) for w in json.loads(text)])
    else:
        Z = WeightList([(g,) for g in _ints(text)])
    grading = _ints(args.grading) if args.grading else None
    n = 1 if args.n is None else args.n
    m = 0 if args.m is None else args.m
    rep = euler_report(Z, n, m, _symfun(args.f), grading, args.order, args.cross_check)
    lines = [_series_line("chi", [f"{c} t^{d}" for d, c in rep["chi"].items()] or ["0"])]
    if args.cross_check:
        lines.append("cross-check: " + ("match" if rep["match"] else "MISMATCH"))
    _emit(args, rep, "\n".join(lines))
    return EXIT_OK if rep.get("match", True) else EXIT_MISMATCH


def cmd_lemma(args):
    n = 2 if args.n is None else args.n
    rep = vanishing_lemma_check(n, args.k)
    text = (
        f"n={n} k={args.k}: {rep['subsets']} subsets, {rep['zero']} with zero constant term, "
        f"{rep['young']} Young diagrams, " + ("all classified correctly" if rep["pass"] else f"{len(rep['failures'])} FAILURES")
    )
    _emit(args, rep, text)
    return EXIT_OK if rep["pass"] else EXIT_MISMATCH


def cmd_conditions(args):
    spec = _spec(args)
    grading = _grading(args, spec)
    rep = check_conditions(spec, W=args.window, n=args.n, grading=grading)
    lines = [f"{spec.name}  window [-{rep['window']}, {rep['window']}]"]
    for name, v in sorted(rep["conditions"].items()):
        lines.append(f"  ({name}) {'pass' if v['pass'] else 'FAIL'}")
    if rep.get("caveat"):
        lines.append(f"note: {rep['caveat']}")
    _emit(args, rep, "\n".join(lines))
    return EXIT_OK if rep["all_pass"] else EXIT_MISMATCH


def cmd_jtp(args):
    rep = jtp_check(args.range, args.order)
    lines = [f"theta(z^2; q) vs sum over |k| <= {args.range} through q^{args.order}"]
    for row in rep["table"]:
        mark = "" if row["theta"] == row["sum"] else "   <-- differs"
        lines.append(f"  q^{row['q']}: {row['theta']} | {row['sum']}{mark}")
    lines.append("match" if rep["match"] else f"MISMATCH (first q-degree {rep['first_mismatch']})")
    _emit(args, rep, "\n".join(lines))
    return EXIT_OK if rep["match"] else EXIT_MISMATCH


COMMANDS = {
    "verify": cmd_verify,
    "euler": cmd_euler,
    "lemma": cmd_lemma,
    "conditions": cmd_conditions,
    "jtp": cmd_jtp,
}


def build_parser():
    p = argparse.ArgumentParser(prog="locproj", description="Exact checks of localization and projection identities.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--example", choices=sorted(EXAMPLES))
    p.add_argument("--spec", help="path to a JSON spec")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--f", help='symmetric function, e.g. \'[{"coeff": 1, "indices": [1]}]\'')
    p.add_argument("--grading", help="comma-separated integer weights")
    p.add_argument("--order", type=int, help="series order (q-degree for affine-sl2)")
    p.add_argument("--window", type=int, default=40)
    p.add_argument("--budget", type=int, default=8)
    p.add_argument("--weights", help="euler: grades 0,1,3 or JSON exponent lists")
    p.add_argument("--cross-check", action="store_true", help="euler: compare with Martin's formula")
    p.add_argument("--k", type=int, default=4, help="lemma: largest total degree")
    p.add_argument("--range", type=int, default=3, help="jtp: summation range |k|")
    p.add_argument("--json", action="store_true")
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    if args.order is None:
        args.order = 8 if args.command == "jtp" else 10
    try:
        if args.order < 0:
            raise ConfigError("--order must be nonnegative")
        if args.budget < 1:
            raise ConfigError("--budget must be at least 1")
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except LocProjError as exc:
        hint = ""
        if type(exc).__name__ == "DegenerateGrading":
            hint = " (try a more generic --grading, e.g. 1,13)"
        print(f"error: {exc}{hint}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
