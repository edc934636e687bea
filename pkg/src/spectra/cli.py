"""Command-line front end.

Exit codes: 0 verified success, 1 input or precondition error, 2 an internal
verification failed (conditioning trouble, or a bound that should never be
exceeded was exceeded).

Every subcommand prints ``key: value`` lines in a fixed order so the output
can be parsed by scripts. Error lines start with ``error: <ExceptionName>``.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import io
from .exceptions import InputError, PostconditionFailed, SpectraError
from .matcore import eigenvalues
from .nonneg import is_irreducible, is_nonnegative, perron, row_sum_spread, to_constant_row_sums
from .perturb import build_plan, construction_threshold, shift_complex_pair
from .polygeom import FIXTURES, gamma, search_max_ratio, triangle_ratio

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2
RATIO_SLACK = 1e-9


def default_seed() -> int:
    value = os.environ.get("SPECTRA_SEED", "0")
    try:
        return int(value)
    except ValueError:
        raise InputError(f"SPECTRA_SEED must be an integer, got {value!r}") from None


def _fmt(z) -> str:
    z = complex(z)
    return f"{z.real:.17g}{z.imag:+.17g}j"


def _fmt_spectrum(S) -> str:
    S = np.asarray(S, dtype=complex)
    order = np.lexsort((S.imag, S.real))[::-1]
    return " ".join(_fmt(z) for z in S[order])


def _emit(key: str, value) -> None:
    print(f"{key}: {value}")


def cmd_perturb(args) -> int:
    A = io.read_matrix(args.matrix)
    n = A.shape[0]
    t_tilde = args.t_tilde
    spectrum_tol = args.spectrum_tol
    try:
        cert = shift_complex_pair(A, args.b, args.c, args.t, t_tilde, args.tol, spectrum_tol=spectrum_tol)
    except PostconditionFailed:
        # write what we have for diagnosis, then report
        cert = shift_complex_pair(A, args.b, args.c, args.t, t_tilde, args.tol, spectrum_tol=spectrum_tol,
                                  verify=False)
        io.write_certificate(args.out, cert)
        raise
    io.write_certificate(args.out, cert)
    _emit("n", n)
    _emit("t", repr(cert.t))
    _emit("t_tilde", repr(cert.t_tilde))
    _emit("threshold", repr(cert.threshold))
    _emit("gamma_n", repr(cert.gamma_n))
    _emit("alpha_sum", repr(cert.plan.alpha_sum))
    _emit("nonneg_margin", repr(cert.nonneg_margin))
    _emit("spectrum_error", repr(cert.spectrum_error))
    _emit("spectrum_after", _fmt_spectrum(cert.spectrum_after))
    _emit("certificate", args.out)
    _emit("status", "verified")
    return EXIT_OK


def cmd_check(args) -> int:
    A = io.read_matrix(args.matrix)
    ok, margin = is_nonnegative(A, args.tol)
    _emit("n", A.shape[0])
    _emit("nonneg_margin", repr(margin))
    _emit("nonnegative", ok)
    irreducible = ok and is_irreducible(np.maximum(A, 0.0))
    _emit("irreducible", irreducible)
    _emit("spectrum", _fmt_spectrum(eigenvalues(A)))
    if irreducible:
        pd = perron(A)
        B = to_constant_row_sums(A, pd)
        _emit("perron_root", repr(pd.rho))
        _emit("perron_vector", " ".join(f"{v:.17g}" for v in pd.x))
        _emit("perron_residual", repr(pd.residual))
        _emit("row_sum_spread", repr(row_sum_spread(B)))
    return EXIT_OK


def cmd_geometry_ratio(args) -> int:
    poly = FIXTURES[args.fixture]() if args.fixture else io.read_polygon(args.polygon, degenerate_ok=args.degenerate_ok)
    effective = poly.nondegenerate() if poly.degenerate_ok else poly
    rep = triangle_ratio(effective)
    n = effective.n
    g = gamma(n)
    _emit("n", n)
    _emit("polygon_double_area", repr(rep.polygon_double_area))
    _emit("best_triple", " ".join(str(i) for i in rep.best_triple))
    _emit("triangle_double_area", repr(rep.triangle_double_area))
    _emit("ratio", repr(rep.ratio))
    _emit("gamma_n", repr(g))
    if n > 6:
        _emit("verdict", "unbounded-for-n>6")
        return EXIT_OK
    if rep.ratio > g + RATIO_SLACK:
        _emit("verdict", "VIOLATION")
        return EXIT_VERIFY
    _emit("verdict", "tight" if abs(rep.ratio - g) <= RATIO_SLACK else "within-bound")
    return EXIT_OK


def cmd_geometry_search(args) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    res = search_max_ratio(args.n, args.restarts, args.iters, seed)
    if args.trace:
        io.write_trace_csv(args.trace, res.trace)
    if args.out:
        io.write_polygon(args.out, res.best_polygon)
    g = gamma(args.n)
    _emit("n", args.n)
    _emit("seed", seed)
    _emit("best_ratio", repr(res.best_ratio))
    _emit("gamma_n", repr(g))
    _emit("gap", repr(g - res.best_ratio))
    _emit("best_polygon", " ".join(f"{x:.17g},{y:.17g}" for x, y in res.best_polygon.vertices))
    if args.n <= 6 and res.best_ratio > g + RATIO_SLACK:
        _emit("verdict", "VIOLATION")
        return EXIT_VERIFY
    return EXIT_OK


def cmd_threshold_scan(args) -> int:
    A = io.read_matrix(args.matrix)
    n = A.shape[0]
    g = gamma(n)
    seed = args.seed if args.seed is not None else default_seed()
    rng = np.random.default_rng(seed)
    rows = []
    bad = 0
    for k in range(args.samples):
        d = np.exp(rng.uniform(-1.0, 1.0, size=n))
        scaled = A * d[:, None] / d[None, :]
        plan = build_plan(to_constant_row_sums(scaled), args.b, args.c, 1.0, g)
        s = plan.alpha_sum
        inside = -g - RATIO_SLACK <= s <= -1.0 + RATIO_SLACK
        bad += not inside
        rows.append((k, s, construction_threshold(plan), plan.Delta, "-".join(map(str, plan.triple)),
                     "-".join(map(str, plan.minimizers)), int(inside)))
    io.write_trace_csv(args.out, rows,
                       header=("sample", "alpha_sum", "threshold_per_unit_t", "Delta", "triple", "minimizers",
                               "inside"))
    sums = np.array([r[1] for r in rows]) if rows else np.array([math.nan])
    _emit("n", n)
    _emit("samples", args.samples)
    _emit("alpha_sum_min", repr(float(sums.min())))
    _emit("alpha_sum_max", repr(float(sums.max())))
    _emit("interval", f"[{-g!r}, -1.0]")
    _emit("outside", bad)
    return EXIT_VERIFY if bad else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spectra", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("perturb", help="shift a complex pair and raise the Perron root, with certificate")
    p.add_argument("--matrix", required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--t-tilde", type=float, default=None, help="default: gamma(n) * t")
    p.add_argument("--tol", type=float, default=1e-9, help="allowed negativity of the result")
    p.add_argument("--spectrum-tol", type=float, default=None, help="default: 1e-8 * (1 + ||A||)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("check", help="structure report for a matrix file")
    p.add_argument("--matrix", required=True)
    p.add_argument("--tol", type=float, default=0.0)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("geometry-ratio", help="area over largest inscribed triangle")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--polygon")
    src.add_argument("--fixture", choices=sorted(FIXTURES))
    p.add_argument("--degenerate-ok", action="store_true")
    p.set_defaults(func=cmd_geometry_ratio)

    p = sub.add_parser("geometry-search", help="hill-climb the area ratio over convex n-gons")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--restarts", type=int, default=50)
    p.add_argument("--iters", type=int, default=2000)
    p.add_argument("--seed", type=int, default=None, help="default: $SPECTRA_SEED or 0")
    p.add_argument("--trace", help="CSV of (iteration, best ratio)")
    p.add_argument("--out", help="JSON file for the best polygon")
    p.set_defaults(func=cmd_geometry_search)

    p = sub.add_parser("threshold-scan", help="alpha_sum under random diagonal rescalings")
    p.add_argument("--matrix", required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=None, help="default: $SPECTRA_SEED or 0")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_threshold_scan)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SpectraError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
