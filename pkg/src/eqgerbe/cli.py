"""Command-line driver.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage or
parse errors.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import xmcalc as xm
from .basicgerbe import forms as bf
from .basicgerbe import integrals
from .basicgerbe.verify import MAX_N, cocycle_report, verify_thm52
from .report import Check, Report

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _dim(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if not 1 <= n <= MAX_N:
        raise argparse.ArgumentTypeError(f"n must be between 1 and {MAX_N}")
    return n


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _tol(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return v


def _emit(report, args):
    text = report.to_json(timing=args.timing)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_verify_thm52(args):
    report = verify_thm52(
        args.n,
        samples=args.samples,
        seed=args.seed,
        tol_closed=args.tol_closed,
        tol_fd=args.tol_fd,
        f_method=args.f_method,
        diagnostics=not args.no_diagnostics,
    )
    return _emit(report, args)


def cmd_cocycle(args):
    report = cocycle_report(args.n, probes=args.probes, tangents=args.tangents, seed=args.seed, tol=args.tol)
    return _emit(report, args)


def cmd_integrate(args):
    if args.target == "omega-u1":
        grid = args.grid or 256
        value = integrals.omega_u1_integral(grid)
        expected = -2j * np.pi
        rel = abs(value - expected) / abs(expected)
        check = Check("omega-u1", "U(1)xU(1)", grid * grid, rel, 1e-6)
        values = {
            "integral": value,
            "expected": expected,
            "relative_error": rel,
            "class_integral": integrals.omega_u1_integral(grid, bf.omega_class),
            "reference_class_integral": 1.0,
            "note": "expected = 4pi^2 * (-i/2pi); the real class omega/(2pi i) integrates to -1 "
            "against a stated 1/4pi^2 normalization, printed for comparison only",
        }
    else:
        grid = args.grid or 48
        value = integrals.nu_su2_integral(grid)
        rel = abs(abs(value) - 1.0)
        check = Check("nu-su2", "SU(2)", grid**3, rel, 0.02)
        values = {"integral": value, "expected_abs": 1.0, "relative_error": rel}
    config = {"target": args.target, "grid": grid, "rule": "midpoint"}
    report = Report("integrate", config, [check], values=values)
    if not args.out:
        sys.stderr.write(
            f"integral {value.real:+.12g}{value.imag:+.12g}i  relative error {rel:.3e}\n"
        )
    return _emit(report, args)


def cmd_xm(args):
    if args.xm_cmd == "reduce":
        print(xm.reduce(xm.parse(args.expr)))
        return EXIT_OK
    if args.xm_cmd == "equal":
        print("true" if xm.xm_equal(xm.parse(args.e1), xm.parse(args.e2)) else "false")
        return EXIT_OK
    if args.xm_cmd == "cs2-check":
        ok = True
        for label, builder, want in (
            ("E fibre", xm.cs2_e_fiber, {"w0": 1, "w3": -1}),
            ("delta(M) fibre", xm.cs2_delta_m_fiber, {}),
        ):
            e = builder()
            got = xm.reduce(e)
            good = dict(got) == want
            ok &= good
            print(f"{label}: {e}")
            print(f"  reduces to {got}  [{'ok' if good else 'FAILED'}]")
        return EXIT_OK if ok else EXIT_FAIL
    if args.xm_cmd == "nerve-check":
        ok = True
        for family in ("crossed", "paths"):
            for level in (2, 3):
                for r in xm.check_identities(level, family):
                    ok &= r.equal
                    status = "ok" if r.equal else "FAILED"
                    print(f"{family} level {level} (d{r.i}d{r.j} = d{r.j - 1}d{r.i}): {r.left} | {r.right}  [{status}]")
        return EXIT_OK if ok else EXIT_FAIL
    raise AssertionError(args.xm_cmd)


def build_parser():
    p = argparse.ArgumentParser(prog="eqgerbe", description="Verification suites for the equivariant basic gerbe.")
    sub = p.add_subparsers(dest="cmd", required=True)

    def out_flags(q):
        q.add_argument("--out", help="write the JSON report here instead of stdout")
        q.add_argument("--timing", action="store_true", help="include wallclock_ms in the report")

    v = sub.add_parser("verify-thm52", help="sample the identities E1-E4")
    v.add_argument("--n", type=_dim, default=2)
    v.add_argument("--samples", type=_positive, default=50)
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--tol-closed", type=_tol, default=1e-8)
    v.add_argument("--tol-fd", type=_tol, default=1e-4)
    v.add_argument("--f-method", choices=["residue", "quadrature"], default="residue")
    v.add_argument("--no-diagnostics", action="store_true", help="skip the as-printed omega diagnostics")
    out_flags(v)
    v.set_defaults(func=cmd_verify_thm52)

    c = sub.add_parser("cocycle", help="residuals of the total differential of (0, 0, omega, nu)")
    c.add_argument("--n", type=_dim, required=True)
    c.add_argument("--probes", type=_positive, default=20)
    c.add_argument("--tangents", type=_positive, default=5)
    c.add_argument("--seed", type=int, default=42)
    c.add_argument("--tol", type=_tol, default=1e-4)
    out_flags(c)
    c.set_defaults(func=cmd_cocycle)

    g = sub.add_parser("integrate", help="grid integrals of nu over SU(2) or omega over the U(1) torus")
    g.add_argument("--target", choices=["nu-su2", "omega-u1"], required=True)
    g.add_argument("--grid", type=_positive, default=None)
    out_flags(g)
    g.set_defaults(func=cmd_integrate)

    x = sub.add_parser("xm", help="crossed-module fibre calculus")
    xs = x.add_subparsers(dest="xm_cmd", required=True)
    r = xs.add_parser("reduce", help="print the exponent vector of an expression")
    r.add_argument("expr")
    e = xs.add_parser("equal", help="print whether two expressions have equal normal forms")
    e.add_argument("e1")
    e.add_argument("e2")
    xs.add_parser("cs2-check", help="replay both Chern-Simons 2-gerbe fibre chains")
    xs.add_parser("nerve-check", help="verify the simplicial identities of the face maps symbolically")
    x.set_defaults(func=cmd_xm)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        return args.func(args)
    except xm.XmError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
