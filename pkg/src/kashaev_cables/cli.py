"""Command-line interface: ``kashaev-cables <command> ...``.

Exit codes: 0 when everything passed (or resolved), 1 on any failure or
input error, 2 when something is unresolved and nothing failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys

import mpmath

from . import __version__
from .asymptotics import DEFAULT_ALPHA, lobachevsky, predict_leading
from .jones import kashaev_knot, knot_to_json, load_knot_file
from .result import fmt
from .suite import (
    PREC_ENV,
    RunConfig,
    check_names,
    compute_cable,
    emit_report,
    env_prec,
    growth_sweep,
    run_verification_suite,
)

RESULT_COLUMNS = ("m", "N", "method", "re", "im", "error_bound", "max_term",
                  "cancellation_ratio", "prec_used", "in_S_m", "is_zero", "status")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def parse_N(text: str) -> list[int]:
    """``"7"`` or ``"a:b:step"`` (inclusive bounds, step defaults to 1)."""
    parts = text.split(":")
    try:
        nums = [int(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad N specification {text!r}") from None
    if len(nums) == 1:
        a = b = nums[0]
        step = 1
    elif len(nums) in (2, 3):
        a, b = nums[:2]
        step = nums[2] if len(nums) == 3 else 1
    else:
        raise argparse.ArgumentTypeError(f"bad N specification {text!r}")
    if a < 1 or b < a or step < 1:
        raise argparse.ArgumentTypeError("N range needs 1 <= a <= b and step >= 1")
    return list(range(a, b + 1, step))


def parse_range(text: str) -> tuple[int, int, int]:
    """Like :func:`parse_N` but returns ``(a, b, step)``."""
    ns = parse_N(text)
    step = ns[1] - ns[0] if len(ns) > 1 else 1
    return ns[0], ns[-1], step


def parse_angle(text: str):
    """A real number, or a rational multiple of pi such as ``pi/6`` or ``5*pi/6``."""
    s = text.replace(" ", "")
    m = re.fullmatch(r"([+-]?\d*)\*?pi(?:/(\d+))?", s)
    if m:
        num = m.group(1)
        num = -1 if num == "-" else (1 if num in ("", "+") else int(num))
        den = int(m.group(2) or 1)
        return mpmath.pi * num / den
    try:
        return mpmath.mpf(s)
    except (ValueError, TypeError):
        raise argparse.ArgumentTypeError(f"bad angle {text!r}") from None


def _rows_out(rows: list[dict], fmt_: str) -> str:
    if fmt_ == "json":
        return json.dumps(rows, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RESULT_COLUMNS)
    for r in rows:
        w.writerow(["" if r.get(c) is None else str(r[c]).lower() if isinstance(r[c], bool) else r[c]
                    for c in RESULT_COLUMNS])
    return buf.getvalue()


def _config(args, **extra) -> RunConfig:
    return RunConfig(
        prec_initial=args.prec,
        prec_cap_multiplier=args.cap,
        alpha=getattr(args, "alpha", DEFAULT_ALPHA),
        knot=args.knot,
        format=args.format,
        **extra,
    )


def cmd_kashaev(args) -> int:
    K = load_knot_file(args.knot)
    rows = []
    for N in args.N:
        r = kashaev_knot(K, N, prec=args.prec or max(192, 6 * N))
        rows.append(r.to_json())
    sys.stdout.write(_rows_out(rows, args.format))
    return 0


def cmd_cable(args) -> int:
    cfg = _config(args)
    K = load_knot_file(args.knot)
    rows = []
    code = 0
    for N in args.N:
        r = compute_cable(K, args.m, N, cfg, args.method)
        rows.append(r.to_json())
        if r.status != "ok":
            code = 2
    sys.stdout.write(_rows_out(rows, args.format))
    return code


def cmd_growth(args) -> int:
    cfg = _config(args, m_list=(args.m,), N_range=args.N_range, parity=args.parity)
    datasets = growth_sweep(cfg, method=args.method)
    for d in datasets:
        for note in d.notes:
            print(f"note: {note}", file=sys.stderr)
    sys.stdout.write(emit_report(datasets, args.format))
    unresolved = any(r.result.status != "ok" for d in datasets for r in d.rows)
    return 2 if unresolved else 0


def cmd_predict(args) -> int:
    rows = []
    for N in args.N:
        p = predict_leading(args.m, N, prec=args.prec or 128, alpha=args.alpha)
        rows.append({
            "m": p.m,
            "N": p.N,
            "parity_factor": [fmt(mpmath.mpf(p.parity_factor.real), 12), fmt(mpmath.mpf(p.parity_factor.imag), 12)],
            "C_const": [fmt(p.C_const.real, 15), fmt(p.C_const.imag, 15)],
            "l_star": p.l_star,
            "E_leading": fmt(p.E_leading, 20),
            "re": fmt(p.predicted_value.real),
            "im": fmt(p.predicted_value.imag),
            "predicted_log_abs": fmt(p.predicted_log_abs, 15) if p.predicted_value else None,
            "alpha": p.alpha,
            "error_envelope": fmt(mpmath.mpf(p.error_envelope), 6),
        })
    if args.format == "json":
        sys.stdout.write(json.dumps(rows, indent=2) + "\n")
    else:
        cols = ["m", "N", "re", "im", "predicted_log_abs", "l_star", "E_leading", "alpha", "error_envelope"]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow(["" if r[c] is None else r[c] for c in cols])
        sys.stdout.write(buf.getvalue())
    return 0


def cmd_lobachevsky(args) -> int:
    prec = args.prec or 64
    rows = []
    for x in args.x:
        val, err = lobachevsky(x, prec, return_error=True)
        rows.append({"x": fmt(x, 20), "L": fmt(val, max(15, int(prec * 0.3))), "error_bound": fmt(err, 4)})
    if args.format == "json":
        sys.stdout.write(json.dumps(rows, indent=2) + "\n")
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "L", "error_bound"])
        for r in rows:
            w.writerow([r["x"], r["L"], r["error_bound"]])
        sys.stdout.write(buf.getvalue())
    return 0


def cmd_verify(args) -> int:
    if args.list:
        print("\n".join(check_names()))
        return 0
    extra = {"only": tuple(args.only or ())}
    if args.m is not None:
        extra["m_list"] = tuple(args.m)
    cfg = _config(args, **extra)
    report = run_verification_suite(cfg)
    sys.stdout.write(emit_report(report, args.format))
    t = report.totals
    print(f"{t['pass']} passed, {t['fail']} failed, {t['unresolved']} unresolved", file=sys.stderr)
    return report.exit_code


def cmd_show_knot(args) -> int:
    K = load_knot_file(args.knot)
    sys.stdout.write(json.dumps(knot_to_json(K, args.count), indent=2) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kashaev-cables",
                description="Kashaev invariants of (m,2)-cables via the Habiro expansion.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = _Parser(add_help=False)
    common.add_argument("--knot", default="fig8", help="built-in name (fig8, trefoil, unknot) or knot JSON file")
    common.add_argument("--prec", type=int, default=env_prec(),
                        help=f"initial precision in bits (default: ${PREC_ENV} or max(192, 6N))")
    common.add_argument("--cap", type=int, default=16, help="precision cap as a multiple of the initial precision")
    common.add_argument("--format", choices=("csv", "json"), default="json")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("kashaev", parents=[common], help="Kashaev invariant of the knot itself")
    s.add_argument("-N", "--N-range", dest="N", type=parse_N, required=True)
    s.set_defaults(func=cmd_kashaev)

    s = sub.add_parser("cable", parents=[common], help="Kashaev invariant of the (m,2)-cable")
    s.add_argument("-m", type=int, required=True)
    s.add_argument("-N", "--N-range", dest="N", type=parse_N, required=True)
    s.add_argument("--method", choices=("paired", "oracle", "closed-form"), default="paired")
    s.set_defaults(func=cmd_cable)

    s = sub.add_parser("growth", parents=[common], help="growth-rate sweep over N")
    s.add_argument("-m", type=int, required=True)
    s.add_argument("-N", "--N-range", dest="N_range", default="3:101:2", type=parse_range)
    s.add_argument("--parity", choices=("auto", "odd", "even", "all"), default="auto")
    s.add_argument("--method", choices=("paired", "oracle", "closed-form"), default="paired")
    s.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    s.set_defaults(func=cmd_growth)

    s = sub.add_parser("predict", parents=[common], help="leading-order asymptotic prediction")
    s.add_argument("-m", type=int, required=True)
    s.add_argument("-N", "--N-range", dest="N", type=parse_N, required=True)
    s.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    s.set_defaults(func=cmd_predict)

    s = sub.add_parser("lobachevsky", parents=[common], help="Lobachevsky function L(x)")
    s.add_argument("x", nargs="+", type=parse_angle, help="angle, e.g. 0.5 or pi/6")
    s.set_defaults(func=cmd_lobachevsky)

    s = sub.add_parser("verify", parents=[common], help="run the verification suite")
    s.add_argument("--only", action="append", metavar="CHECK", help="run only this check (repeatable)")
    s.add_argument("--list", action="store_true", help="list check names and exit")
    s.add_argument("-m", type=int, action="append", help="restrict cable checks to these m (repeatable)")
    s.add_argument("--alpha", type=float, default=DEFAULT_ALPHA)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("show-knot", parents=[common], help="print a knot's Habiro coefficients")
    s.add_argument("--count", type=int, default=5, help="number of coefficients to print")
    s.set_defaults(func=cmd_show_knot)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (ValueError, OSError, IndexError, KeyError) as exc:
        print(f"kashaev-cables: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
