"""Command-line interface.

Data goes to standard output, progress and error objects to standard error.
Exit status: 0 success, 1 verification failure, 2 usage error, 3 resource limit.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import cache, gfpipeline, machines
from .errors import OracleScaleError, ResourceLimitError, VerificationError
from .series import TruncatedSeries, format_rational, parse_rational

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3
# series orders (and loop half-lengths) computed without --allow-large
DESK_ORDER = 300

IDENTITIES = ("SinR", "RinS", "TRS", "M", "Q1", "Catalan", "loop-oracle")
ANALYZE_ORDER = 200
METHODS = ("ratio", "hadamard", "da", "constants", "kappa", "subtract", "conjectures", "speculation")


class UsageError(ValueError):
    pass


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a rational p/q: {text!r}") from None


def _degrees(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(d) for d in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"degrees must be comma-separated integers: {text!r}") from None


def _window(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must be lo,hi: {text!r}") from None
    if not lo < hi:
        raise argparse.ArgumentTypeError(f"empty window {text!r}")
    return lo, hi


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be nonnegative: {v}")
    return v


def _positive(text: str) -> int:
    v = _nonneg(text)
    if v == 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", type=_nonneg, help="series order or size N")
    common.add_argument("--a", type=_rational, help="corner weight p/q")
    common.add_argument("--x", type=_rational, help="origin-return weight p/q")
    common.add_argument("--precision", type=_positive, default=50, help="working decimal digits")
    common.add_argument("--order-M", dest="order_M", type=_positive, default=3, help="differential approximant order")
    common.add_argument("--degrees", type=_degrees, help="degree vector d0,...,dM,L")
    common.add_argument("--variant", choices=gfpipeline.VARIANTS, default="corS")
    common.add_argument("--format", dest="fmt", choices=("json", "csv", "text", "lines"), default="json")
    common.add_argument("--cache", type=Path, default=None,
                        help=f"cache directory (default ${cache.CACHE_ENV} or ~/.cache/dequetsip)")
    common.add_argument("--no-cache", action="store_true", help="neither read nor write the cache")
    common.add_argument("--threads", type=_positive, default=1)
    common.add_argument("--quiet", action="store_true", help="no progress on standard error")
    common.add_argument("--allow-large", action="store_true",
                        help=f"compute beyond order {DESK_ORDER} (cached series are always read)")

    parser = argparse.ArgumentParser(prog="dequetsip", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", parents=[common], help="brute-force machine oracles")
    p.add_argument("--oracle", choices=("sortable", "canonical", "eager-standard", "M", "words"),
                   default="sortable")
    p.add_argument("--machine", choices=("deque", "tsip"), default="deque")

    p = sub.add_parser("loops", parents=[common], help="loop tables and Q(a, u)")
    p.add_argument("--what", choices=("Q", "table", "positivity", "Q1", "U"), default="Q")

    p = sub.add_parser("series", parents=[common], help="P and D coefficients")
    p.add_argument("--target", choices=("P", "D", "p"), default="P")

    p = sub.add_parser("verify", parents=[common], help="check an identity coefficient by coefficient")
    p.add_argument("--identity", choices=IDENTITIES, required=True)

    p = sub.add_parser("analyze", parents=[common], help="numerical asymptotics")
    p.add_argument("--series", choices=("P", "D", "Q"), default="P")
    p.add_argument("--method", choices=METHODS, required=True)
    p.add_argument("--tc", type=float, default=None, help="critical point; estimated by DA when omitted")
    p.add_argument("--window", type=_window, default=None, help="lo,hi: only singularities in this interval")

    p = sub.add_parser("cache", parents=[common], help="inspect or normalize cached series")
    p.add_argument("action", choices=("inspect", "convert"))
    p.add_argument("path", type=Path)
    p.add_argument("--output", type=Path, default=None, help="destination of convert (default stdout)")
    p.add_argument("--name", default=None, help="series name written by convert")
    return parser


def _progress(args, label):
    if args.quiet:
        return None
    from .loops.table import stderr_progress
    return stderr_progress(label)


def _cache_dir(args):
    if args.no_cache:
        return None
    return args.cache if args.cache is not None else cache.default_cache_dir()


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise UsageError(f"--{n.replace('_', '-')} is required for {args.command}")


def _emit_values(args, name: str, values, extra: dict | None = None) -> str:
    vals = [format_rational(Fraction(v)) if not isinstance(v, str) else v for v in values]
    if args.fmt == "text":
        return " ".join(vals) + "\n"
    if args.fmt == "lines":
        return "".join(v + "\n" for v in vals)
    if args.fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", name])
        w.writerows(enumerate(vals))
        return buf.getvalue()
    obj = {"name": name, "order": len(vals) - 1, "coeffs": vals}
    obj.update(extra or {})
    return json.dumps(obj) + "\n"


def cmd_enumerate(args) -> tuple[int, str]:
    _need(args, "order")
    n = args.order
    if args.oracle == "words":
        return EXIT_OK, "".join(w + "\n" for w in machines.canonical_sequences(n))
    if args.oracle == "M":
        table = machines.enumerate_M(n)
        if args.fmt == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["m", "q", "r", "count"])
            for m, row in table.items():
                for (q, r), c in sorted(row.items()):
                    w.writerow([m, q, r, c])
            return EXIT_OK, buf.getvalue()
        obj = {str(m): [[q, r, c] for (q, r), c in sorted(row.items())] for m, row in table.items()}
        return EXIT_OK, json.dumps({"name": "M", "order": n, "table": obj}) + "\n"
    if args.oracle == "sortable":
        counts = [machines.count_sortable(k, args.machine) for k in range(n + 1)]
        name = f"sortable-{args.machine}"
    elif args.oracle == "canonical":
        counts = [machines.count_canonical(k) for k in range(n + 1)]
        name = "canonical"
    else:
        counts = [machines.count_eager_standard_tsip(k) for k in range(n + 1)]
        name = "eager-standard-tsip"
    return EXIT_OK, _emit_values(args, name, counts)


def _gate(args, order: int) -> None:
    if order > DESK_ORDER and not args.allow_large:
        raise ResourceLimitError(f"order {order} exceeds the desk limit {DESK_ORDER}; pass --allow-large")


def cmd_loops(args) -> tuple[int, str]:
    from . import loops
    _need(args, "order")
    n = args.order
    _gate(args, n // 2 if args.what == "table" else n)
    prog = _progress(args, "loops")
    if args.what == "table":
        table = loops.build_loop_table(n, threads=args.threads, progress=prog)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "k", "x", "y", "count"])
        for key, v in table.entries():
            w.writerow([*key, v])
        return EXIT_OK, buf.getvalue()
    if args.what in ("Q", "positivity") and args.a is None:
        q = loops.q_series(n, threads=args.threads, progress=prog)
        if args.what == "positivity":
            rep = loops.check_a_plus_one_positivity(q)
            obj = {"positive": rep.positive, "checked_through": rep.checked_through,
                   "first_violation": list(rep.first_violation) if rep.first_violation else None}
            return EXIT_OK, json.dumps(obj) + "\n"
        if args.fmt == "json":
            return EXIT_OK, q.to_json()
        return EXIT_OK, "".join(" ".join(str(c) for c in p.coeffs) + "\n" for p in q.polys)
    if args.what == "positivity":
        raise UsageError("positivity is a statement about the polynomials; drop --a")
    _need(args, "a")
    if args.what == "Q":
        s = loops.q_at(args.a, n, threads=args.threads, progress=prog)
    elif args.what == "U":
        s = loops.u_series(args.a, n, threads=args.threads, progress=prog)
    else:
        _need(args, "x")
        s = loops.q1_series(args.a, args.x, n, threads=args.threads, progress=prog)
    return EXIT_OK, _emit_values(args, args.what, s.coeffs, {"a": format_rational(args.a)})


def _series_P(args, order: int) -> TruncatedSeries:
    if args.variant != "corS":
        from .loops import q_series
        _gate(args, order)
        q = q_series(order, graded=True, threads=args.threads, progress=_progress(args, "Q"))
        return gfpipeline.solve_F(q, order, args.variant)
    return _bundle(args, order).P


def _bundle(args, order: int) -> gfpipeline.GFBundle:
    if cache.find_cached(_cache_dir(args), "P", order) is None:
        _gate(args, order)
    return gfpipeline.compute_bundle(order, cache_dir=_cache_dir(args), threads=args.threads,
                                     progress=_progress(args, "Q"))


def cmd_series(args) -> tuple[int, str]:
    _need(args, "order")
    n = args.order
    if args.target == "P":
        s = _series_P(args, n)
    elif args.variant != "corS":
        raise UsageError("--variant only selects how P is solved; use --target P")
    else:
        b = _bundle(args, n)
        s = b.D if args.target == "D" else b.p
    return EXIT_OK, _emit_values(args, args.target, s.coeffs)


def cmd_verify(args) -> tuple[int, str]:
    _need(args, "order")
    n = args.order
    ident = args.identity
    if ident == "loop-oracle":
        res = gfpipeline.verify_loop_oracle(n)
    elif ident in ("Q1", "Catalan"):
        if ident == "Q1":
            _need(args, "a")
            res = gfpipeline.verify_Q1_at_2(args.a, n)
        else:
            res = gfpipeline.verify_catalan(n)
    else:
        b = _bundle(args, n)
        if ident == "SinR":
            res = gfpipeline.verify_SinR(b.P, b.D)
        elif ident == "RinS":
            res = gfpipeline.verify_RinS(b.P)
        elif ident == "TRS":
            res = gfpipeline.verify_TRS(b.P, b.D)
        else:
            res = gfpipeline.verify_M_relation(machines.enumerate_M(n), b.P, b.D, n)
    if args.fmt == "text":
        out = "OK\n" if res.ok else f"FAIL at {res.first_failure}: {res.detail}\n"
    else:
        out = json.dumps({"identity": ident, "ok": res.ok, "order": res.order,
                          "first_failure": res.first_failure, "detail": res.detail}) + "\n"
    return (EXIT_OK if res.ok else EXIT_VERIFY), out


def _analysis_series(args):
    _need(args, "order")
    if args.series == "Q":
        _need(args, "a")
        from .loops import q_at
        _gate(args, args.order)
        return list(q_at(args.a, args.order, threads=args.threads, progress=_progress(args, "Q")).coeffs)
    b = _bundle(args, args.order)
    return list((b.P if args.series == "P" else b.D).coeffs)


def _survey(args, coeffs):
    from .analysis import DifferentialApproximant
    est = DifferentialApproximant(order=args.order_M, degrees=args.degrees, window=getattr(args, "window", None),
                                  precision=args.precision)
    return est.fit(coeffs)


def _critical_point(args, coeffs):
    if args.tc is not None:
        return args.tc, 0.0, None
    est = _survey(args, coeffs)
    s = est.survey_
    if s is None or s.location is None:
        raise ArithmeticError("no consistent critical point among the approximants")
    return s.location, s.location_spread, s


def cmd_analyze(args) -> tuple[int, str]:
    import mpmath

    from .analysis import report

    method = args.method
    if args.order is None:
        args.order = ANALYZE_ORDER
    if method == "speculation":
        from .analysis import speculation_constant
        return EXIT_OK, report.to_json({"value": report.fmt(speculation_constant(args.precision))})
    if method == "conjectures":
        from .analysis import exponent_study
        _need(args, "order", "a")
        _gate(args, args.order)
        st = exponent_study(args.a, args.order, (args.order_M,), precision=args.precision,
                            threads=args.threads, progress=_progress(args, "Q"))
        obj = {"a": format_rational(st.a), "terms": st.terms, "u_c": report.fmt(st.u_c),
               "rho_Q": report.fmt(st.rho_Q), "exponent": report.fmt(st.exponent), "closest": st.closest,
               "matching": st.matching(), "arccos_winner": st.arccos_winner,
               "candidates": {k: report.fmt(v) for k, v in sorted(st.candidates.items())},
               "surveys": {str(M): report.survey_json(s) for M, s in st.surveys.items() if s is not None}}
        return EXIT_OK, report.to_json(obj)

    with mpmath.workdps(args.precision):
        coeffs = _analysis_series(args)
        if method == "da":
            est = _survey(args, coeffs)
            if est.survey_ is None:
                return EXIT_OK, report.to_json(report.fit_json(est.fits_[0]))
            if args.fmt == "csv":
                return EXIT_OK, report.survey_csv(est.survey_)
            return EXIT_OK, report.to_json(report.survey_json(est.survey_))
        if method in ("ratio", "hadamard"):
            from .analysis import RatioAnalysis
            if method == "hadamard":
                if args.series == "Q":
                    raise UsageError("the Hadamard quotient is defined for P and D")
                b = _bundle(args, args.order)
                other = list((b.D if args.series == "P" else b.P).coeffs)
                ra = RatioAnalysis(mode="hadamard", tail=min(40, args.order // 4), refine=True,
                                   precision=args.precision).fit(coeffs, other)
            else:
                mode = "biased_exponent" if args.tc is not None else "ratios"
                ra = RatioAnalysis(mode=mode, z_c=args.tc, tail=min(40, args.order // 4),
                                   precision=args.precision).fit(coeffs)
            if args.fmt == "csv":
                return EXIT_OK, report.sequence_csv(ra.sequence_, header=("n", ra.mode))
            obj = {"series": args.series, "mode": ra.mode, "limit": report.fmt(ra.limit_),
                   "last": report.fmt(ra.sequence_.last())}
            return EXIT_OK, report.to_json(obj)
        if method == "kappa":
            from .analysis import AmplitudeEstimator
            t_c, _, s = _critical_point(args, coeffs)
            if args.series == "D":
                g = -1.5
            elif s is not None and s.exponent is not None:
                g = -1 - s.exponent
            else:
                raise UsageError("the P exponent comes from the DA survey; omit --tc")
            am = AmplitudeEstimator(t_c=t_c, g=g, precision=args.precision).fit(coeffs)
            return EXIT_OK, report.to_json({"series": args.series, "t_c": report.fmt(t_c), "g": g,
                                            "kappa": report.fmt(am.kappa_), "error": report.fmt(am.error_, 3)})
        if args.series != "P":
            raise UsageError(f"{method} reads both P and D; pass --series P")
        from .analysis import estimate_constants, subtract_singular_and_reestimate
        b = _bundle(args, args.order)
        t_c, err, s = _critical_point(args, coeffs)
        alpha = s.exponent if s is not None else None
        consts = estimate_constants(list(b.P.coeffs), list(b.D.coeffs), t_c, t_c_error=err, alpha=alpha,
                                    precision=args.precision)
        if method == "constants":
            return EXIT_OK, report.to_json(report.constants_json(consts))
        res = subtract_singular_and_reestimate(list(b.D.coeffs), consts, precision=args.precision)
        obj = {"theta_ratio": report.fmt(res.theta_ratio), "theta_da": [report.fmt(v) for v in res.theta_da]}
        return EXIT_OK, report.to_json(obj)


def cmd_cache(args) -> tuple[int, str]:
    fmt = "lines" if args.fmt == "lines" else "json"
    name, s = cache.read_series(args.path, fmt=fmt)
    if args.name:
        name = args.name
    if args.action == "inspect":
        head = [format_rational(c) for c in s.coeffs[:10]]
        obj = {"path": str(args.path), "name": name, "order": s.order,
               "integral": all(c.denominator == 1 for c in s.coeffs), "head": head}
        return EXIT_OK, json.dumps(obj) + "\n"
    if args.output is not None:
        cache.write_series(args.output, name, s)
        return EXIT_OK, ""
    return EXIT_OK, cache.dumps_series(name, s)


COMMANDS = {"enumerate": cmd_enumerate, "loops": cmd_loops, "series": cmd_series, "verify": cmd_verify,
            "analyze": cmd_analyze, "cache": cmd_cache}


def _error(kind: str, message: str, **extra) -> None:
    print(json.dumps({"error": kind, "message": message, **extra}), file=sys.stderr)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        status, out = COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        _error("usage", str(exc))
        return EXIT_USAGE
    except VerificationError as exc:
        _error("verification", str(exc), first_failure=exc.index)
        return EXIT_VERIFY
    except (OracleScaleError, ResourceLimitError, MemoryError) as exc:
        _error("resource", str(exc) or type(exc).__name__)
        return EXIT_RESOURCE
    except cache.CacheFormatError as exc:
        _error("format", str(exc))
        return EXIT_USAGE
    except FileNotFoundError as exc:
        _error("usage", f"no such file: {exc.filename}")
        return EXIT_USAGE
    except (ValueError, ArithmeticError) as exc:
        _error(type(exc).__name__, str(exc))
        return EXIT_VERIFY if isinstance(exc, ArithmeticError) else EXIT_USAGE
    sys.stdout.write(out)
    sys.stdout.flush()
    return status


if __name__ == "__main__":
    sys.exit(main())
