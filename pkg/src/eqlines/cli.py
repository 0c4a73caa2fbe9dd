"""Command-line front end.

Exit codes: 0 when every requested verification passes, 1 on a verification
failure, 2 on usage or input errors.  Timing goes to stderr so stdout stays
byte-stable.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction
from typing import Optional, Sequence

from . import certificate as cert
from . import constructions as cons
from .constraints import all_constraints, lp_values
from .distributions import NotEquiangular, class_distribution, two_point
from .exactmath import fmt, to_decimal
from .gram import TooLarge, enumerate_classes, pattern_string

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class Report:
    """Collects output; ``--machine`` switches to ``key = value`` lines."""

    def __init__(self, machine: bool, precision: int):
        self.machine = machine
        self.precision = precision
        self.lines: list[str] = []

    def num(self, x) -> str:
        x = Fraction(x)
        if x.denominator == 1:
            return fmt(x)
        return f"{fmt(x)} ~ {to_decimal(x, self.precision)}"

    def text(self, s: str = "") -> None:
        if not self.machine:
            self.lines.append(s)

    def kv(self, key: str, value, label: Optional[str] = None) -> None:
        if self.machine:
            v = fmt(value) if isinstance(value, (int, Fraction)) and not isinstance(value, bool) else value
            self.lines.append(f"{key} = {v}")
        else:
            shown = self.num(value) if isinstance(value, (int, Fraction)) and not isinstance(value, bool) else value
            self.lines.append(f"{label or key}: {shown}")

    def matrix(self, key: str, rows) -> None:
        if self.machine:
            self.lines.append(f"{key} = " + "; ".join(" ".join(fmt(x) for x in r) for r in rows))
        else:
            for r in rows:
                self.lines.append("  [" + "  ".join(fmt(x) for x in r) + "]")

    def render(self) -> str:
        return "\n".join(self.lines) + ("\n" if self.lines else "")


def _rational(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {s!r}") from None


def _odd_a(s: str) -> int:
    try:
        a = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {s!r}") from None
    if a < 3 or a % 2 == 0:
        raise argparse.ArgumentTypeError("a must be an odd integer >= 3")
    return a


# ---------------------------------------------------------------------------
# subcommands


def cmd_bound(args, out: Report) -> int:
    a = args.a
    lo, hi, dec = cert.render_root(a, out.precision)
    f = cert.d4_floor(a)
    out.kv("a", a)
    out.kv("D3", cert.d3(a), "D3(a) = 3a^2 - 16")
    out.kv("D4_lo", lo, "D4(a) lower end")
    out.kv("D4_hi", hi, "D4(a) upper end")
    out.kv("D4", dec, "D4(a)")
    out.kv("D4_floor", f, "floor D4(a)")
    out.kv("bound", cert.bound(a), "bound (a^2-1)(a^2-2)/2")
    return OK


def cmd_table3(args, out: Report) -> int:
    out.text(f"{'a':>3} {'D3(a)':>7} {'D4(a)':>10}")
    for a in (3, 5, 7, 9, 11):
        _, _, dec = cert.render_root(a, out.precision)
        if out.machine:
            out.lines.append(f"row = {a} {cert.d3(a)} {dec}")
        else:
            out.text(f"{a:>3} {cert.d3(a):>7} {dec:>10}")
    return OK


def cmd_certificate(args, out: Report) -> int:
    a, d = args.a, args.d
    v = cert.certify_bound(a, d)
    c = v.certificate
    out.kv("a", a)
    out.kv("d", d)
    if c is not None:
        out.text("F:")
        out.matrix("F", c.F)
        out.kv("f1", c.f1)
        out.kv("f2", c.f2)
        for name, val in c.minors.items():
            out.kv("minor " + name, val, name)
        out.kv("ga_at_d", c.ga_at_d, "g_a(d)")
        mism = cert.closed_form_mismatches(c)
        routes = not mism and cert.pairing_solution(a, d) == c.solution
        out.kv("routes_agree", "yes" if routes else "no: " + ",".join(mism), "three routes agree")
        if not routes:
            v.certified = False
            v.reason = (v.reason + "; " if v.reason else "") + "routes disagree"
        if v.boundary:
            out.kv("boundary", "yes", "boundary (g_a(d) = 0)")
    if v.certified:
        if out.machine:
            out.kv("certified", "yes")
            out.kv("bound", v.bound)
        else:
            out.text(f"Certified: N ≤ {v.bound}")
        return OK
    if out.machine:
        out.kv("certified", "no")
        out.kv("reason", v.reason)
    else:
        out.text(f"Not certified: {v.reason}")
    return FAILED


def cmd_classes(args, out: Report) -> int:
    try:
        keys = enumerate_classes(args.n)
    except TooLarge as exc:
        raise UsageError(str(exc)) from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if out.machine:
        out.lines.append(f"classes = {len(keys)}")
        out.lines.extend(f"class = {pattern_string(k.bits, k.n)}" for k in keys)
    else:
        out.lines.append(f"{len(keys)} classes")
        out.lines.extend(pattern_string(k.bits, k.n) or "(empty)" for k in keys)
    return OK


def _load(args):
    try:
        return cons.load_configuration(args.file, alpha=args.alpha, validate=True)
    except OSError as exc:
        raise UsageError(str(exc)) from None
    except cons.ParseError as exc:
        raise UsageError(f"parse error: {exc}") from None


def cmd_check(args, out: Report) -> int:
    try:
        X = _load(args)
    except (cons.NotPSD, cons.RankExceedsDimension, NotEquiangular, ValueError) as exc:
        out.kv("valid", f"no: {exc}", "validation")
        return FAILED
    ok = True
    out.kv("N", X.N)
    out.kv("d", X.d)
    for t, c in two_point(X).items():
        out.kv(f"x({fmt(t)})", c)
    if X.N >= 3:
        for name, val in sorted(class_distribution(X, 1).named().items()):
            out.kv(name, val)
    if X.N >= 4:
        for name, val in sorted(class_distribution(X, 2).named().items()):
            out.kv(name, val)
    for k, val in lp_values(X, args.max_k).items():
        good = val >= 0
        ok &= good
        out.kv(f"lp[{k}]", val, f"lp value k={k}")
    for cm in all_constraints(X, args.max_k):
        tag = cm.kind + "".join(f" {p}={cm.params[p]}" for p in ("m", "k") if p in cm.params)
        psd = bool(cm.psd())
        ok &= psd
        out.text(f"{tag}:")
        out.matrix(f"matrix[{tag}]", cm.matrix)
        out.kv(f"psd[{tag}]", "yes" if psd else "no", "  PSD")
        out.kv(f"rank[{tag}]", cm.rank(), "  rank")
    out.kv("all_pass", "yes" if ok else "no", "all constraints pass")
    return OK if ok else FAILED


def cmd_gen28(args, out: Report) -> int:
    X = cons.gen28()
    if args.out:
        cons.write_configuration(X, args.out)
        out.kv("written", args.out)
        out.kv("N", X.N)
        out.kv("d", X.d)
    else:
        out.lines.extend(cons.format_configuration(X).rstrip("\n").split("\n"))
    return OK


def cmd_srg(args, out: Report) -> int:
    try:
        X = _load(args)
        rep = cons.srg_extract(X, check_charpoly=False)
    except (cons.NotPSD, cons.RankExceedsDimension, NotEquiangular,
            cons.NotExtremal, cons.NotStronglyRegular) as exc:
        out.kv("srg", f"no: {exc}", "SRG")
        return FAILED
    out.kv("srg", "SRG(%d, %d, %d, %d)" % rep.params, "SRG")
    for ev, mult in sorted(rep.spectrum.items(), reverse=True):
        out.kv(f"adjacency_eigenvalue[{fmt(ev)}]", mult, f"adjacency eigenvalue {fmt(ev)} multiplicity")
    for ev, mult in sorted(rep.gram_spectrum.items(), reverse=True):
        out.kv(f"gram_eigenvalue[{fmt(ev)}]", mult, f"derived Gram eigenvalue {fmt(ev)} multiplicity")
    lam_ok = cons.lambda_identity_check(rep, rep.a)
    out.kv("lambda_identity", "yes" if lam_ok else "no", "lambda = (3k-v-1)/2")
    return OK if lam_ok else FAILED


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--machine", action="store_true", help="key = value output")
    common.add_argument("--precision", type=int, default=2, help="decimal digits (default 2)")

    p = argparse.ArgumentParser(prog="eqlines", description="Exact four-point bound for equiangular lines.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("bound", parents=[common], help="D3, D4 and the bound for one a")
    s.add_argument("a", type=_odd_a)
    s.set_defaults(func=cmd_bound)

    s = sub.add_parser("certificate", parents=[common], help="verify the dual certificate at (a, d)")
    s.add_argument("a", type=_odd_a)
    s.add_argument("d", type=int)
    s.set_defaults(func=cmd_certificate)

    s = sub.add_parser("table3", parents=[common], help="D3(a) and D4(a) for a = 3..11")
    s.set_defaults(func=cmd_table3)

    s = sub.add_parser("classes", parents=[common], help="switching classes of order n")
    s.add_argument("n", type=int)
    s.set_defaults(func=cmd_classes)

    s = sub.add_parser("check", parents=[common], help="audit a Gram file")
    s.add_argument("file")
    s.add_argument("--alpha", type=_rational, required=True)
    s.add_argument("--max-k", type=int, default=6)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("gen28", parents=[common], help="emit the 28-line configuration")
    s.add_argument("--out")
    s.set_defaults(func=cmd_gen28)

    s = sub.add_parser("srg", parents=[common], help="derived-code SRG of an extremal file")
    s.add_argument("file")
    s.add_argument("--alpha", type=_rational, required=True)
    s.set_defaults(func=cmd_srg)
    return p


def run(argv: Optional[Sequence[str]] = None) -> tuple[int, str]:
    """Run one invocation and return (exit code, stdout text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (exc.code if isinstance(exc.code, int) else USAGE), ""
    if args.precision < 0:
        print("eqlines: --precision must be >= 0", file=sys.stderr)
        return USAGE, ""
    if getattr(args, "max_k", 0) < 0:
        print("eqlines: --max-k must be >= 0", file=sys.stderr)
        return USAGE, ""
    out = Report(args.machine, args.precision)
    t0 = time.perf_counter()
    try:
        code = args.func(args, out)
    except UsageError as exc:
        print(f"eqlines: {exc}", file=sys.stderr)
        return USAGE, out.render()
    print(f"[{args.command}: {time.perf_counter() - t0:.3f} s]", file=sys.stderr)
    return code, out.render()


def main(argv: Optional[Sequence[str]] = None) -> int:
    code, text = run(argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
