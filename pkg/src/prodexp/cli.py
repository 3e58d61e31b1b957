"""Command-line front end.

Every command prints ``key: value`` lines (or a record in one of the file
formats of :mod:`prodexp.io`). Exit status: 0 success, 2 parse error,
3 cap exceeded, 4 property violation.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from typing import Sequence

from . import io
from .config import Caps, ExperimentConfig
from .errors import CapExceeded, NotInCode, ParseError, ProdexpError, PropertyViolation
from .expansion import eps_max_report, format_rational, rho_exact
from .grid import closure_rounds, eps_closure
from .ltc import ltc_params, pad_bound, pad_zero, rate_adapt, soundness_range, soundness_range_bruteforce, tensor_extend, delta_limited
from .product import DEFAULT_SAMPLED_SUBSETS, certify_maximally_extendable, extendability_data, inner_generation_dims, is_extendable
from .sheaf import build_complex, eta_report, rho_via_sheaf
from .experiments import run_theorem1
from .suites import SUITES, run_suite

EXIT_PARSE, EXIT_CAP, EXIT_PROPERTY = 2, 3, 4


def _eps(text: str) -> Fraction:
    try:
        e = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {text!r}") from exc
    if not 0 < e <= 1:
        raise ParseError(f"ε must lie in (0, 1], got {text}")
    return e


def _scope(text: str):
    if text == "all":
        return "all"
    if text == "sampled":
        return DEFAULT_SAMPLED_SUBSETS
    try:
        k = int(text)
    except ValueError as exc:
        raise ParseError(f"scope must be 'all', 'sampled' or a count, got {text!r}") from exc
    if k < 1:
        raise ParseError("sampled scope needs a positive count")
    return k


def _yes(b: bool) -> str:
    return "yes" if b else "no"


# commands -------------------------------------------------------------------

def cmd_rho(args, caps, out):
    tup = io.parse_tuple(io.read_file(args.tuple))
    rep = rho_exact(tup, caps)
    out.write(rep.to_text())
    if args.oracle:
        other = rho_via_sheaf(tup, caps)
        out.write(f"sheaf_rho: {format_rational(other)}\n")
        if other != rep.rho:
            out.write("oracle: mismatch\n")
            raise PropertyViolation("rho_exact and the sheaf oracle disagree")
        out.write("oracle: match\n")


def cmd_eta(args, caps, out):
    tup = io.parse_tuple(io.read_file(args.tuple))
    cx = build_complex(tup, caps)
    level = tup.D - 2 if args.level is None else args.level
    rep = eta_report(cx, level, caps)
    out.write(cx.summary())
    out.write(f"level: {level}\neta: {format_rational(rep.eta)}\nclasses: {rep.classes}\n")


def cmd_closure(args, caps, out):
    M = io.parse_cellset(io.read_file(args.cells))
    eps = _eps(args.eps)
    inclusive = not args.exclusive
    C = eps_closure(M, eps, inclusive=inclusive)
    if args.rounds:
        for k, r in enumerate(closure_rounds(M, eps, inclusive=inclusive), 1):
            out.write(f"# round {k}: " + " ".join("(" + ",".join(map(str, c)) + ")" for c in r.coords()) + "\n")
    out.write(io.format_cellset(C))


def cmd_epsmax(args, caps, out):
    tup = io.parse_tuple(io.read_file(args.tuple))
    rep = eps_max_report(tup, caps)
    out.write(f"eps_max: {format_rational(rep.eps_max)}\nbad_sets: {rep.bad_sets}\nsubsets: {rep.subsets}\n")
    if rep.witness is not None:
        out.write("witness: " + " ".join("(" + ",".join(map(str, c)) + ")" for c in rep.witness.coords()) + "\n")


def cmd_extend(args, caps, out):
    tup = io.parse_tuple(io.read_file(args.tuple))
    S = io.parse_cellset(io.read_file(args.cells))
    _same_grid(tup, S)
    d = extendability_data(tup, S)
    out.write(f"extendable: {_yes(d.extendable)}\nprojection_dim: {d.projection_dim}\nlocal_dim: {d.local_dim}\n")


def cmd_innergen(args, caps, out):
    tup = io.parse_tuple(io.read_file(args.tuple))
    M = io.parse_cellset(io.read_file(args.cells))
    _same_grid(tup, M)
    gen, res = inner_generation_dims(tup, M)
    ig = gen == res
    out.write(f"inner_generated: {_yes(ig)}\nlines_dim: {gen}\nrestricted_dim: {res}\n")
    if args.duality:
        ext = is_extendable(tup.dual(), M)
        out.write(f"extendable_in_dual: {_yes(ext)}\n")
        if ext != ig:
            raise PropertyViolation("duality fails")


def _same_grid(tup, S):
    if S.grid != tup.grid:
        raise ParseError(f"cell set lives on [{S.grid.n}]^{S.grid.D}, tuple on [{tup.n}]^{tup.D}")


def cmd_maxext(args, caps, out):
    tup = io.parse_tuple(io.read_file(args.tuple))
    cert = certify_maximally_extendable(tup, scope=_scope(args.scope), seed=args.seed)
    out.write(cert.to_text())


def cmd_soundness(args, caps, out):
    H = io.parse_matrix(io.read_file(args.matrix))
    r = soundness_range(H, caps)
    s = Fraction(H.cols, H.rows) * r.alpha_l
    out.write(
        f"alpha_l: {format_rational(r.alpha_l)}\nalpha_h: {format_rational(r.alpha_h)}\n"
        f"s: {format_rational(s)}\nDelta: {delta_limited(H)}\nm: {H.rows}\nn: {H.cols}\n"
    )
    if args.brute:
        b = soundness_range_bruteforce(H, caps)
        ok = b == r
        out.write(f"bruteforce: {'match' if ok else 'mismatch'}\n")
        if not ok:
            raise PropertyViolation("coset and full-scan soundness ranges differ")


def _read_ltc_or_code(text: str):
    head = io.Lines(text).next("header")
    if head and head[0] == "code":
        lines = io.Lines(text)
        C = io.read_code(lines)
        if not lines.done():
            lines = io.Lines(text)
            C, _ = io.read_ltc(lines)
        return C
    raise ParseError("expected a code file or an LTC bundle")


def cmd_ltc_build(args, caps, out):
    C = _read_ltc_or_code(io.read_file(args.code))
    params = ltc_params(C, caps)
    if args.tensor > 1:
        C = tensor_extend(C, args.tensor)
        extended = ltc_params(C, caps)
        if extended.s < params.s or extended.Delta != params.Delta:
            raise PropertyViolation("tensor extension lost soundness or locality")
        params = extended
    if args.pad:
        C = pad_zero(C, args.pad)
        padded = ltc_params(C, caps)
        if params.n / 2 <= params.m <= params.n and padded.s < pad_bound(params.s):
            raise PropertyViolation("padding soundness below min(s/2, 1)")
        params = padded
    out.write(io.format_ltc(C, params))


def cmd_rate_adapt(args, caps, out):
    family = [_read_ltc_or_code(io.read_file(p)) for p in args.family]
    C, tr = rate_adapt(family, args.n, _rate(args.R), args.growth)
    out.write(
        f"r: {format_rational(tr.r)}\nj: {'none' if tr.j is None else tr.j + 1}\n"
        f"t: {tr.t}\nu: {tr.u}\nn: {C.n}\nk: {C.k}\nrate: {format_rational(Fraction(C.k, C.n))}\n"
    )
    out.write(io.format_code(C))


def _rate(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rate {text!r}") from exc


def cmd_theorem1(args, caps, out):
    dims = tuple(args.dims) if args.dims else (1,) * args.D
    try:
        cfg = ExperimentConfig(
            n=args.n, D=args.D, t=args.t, dims=dims, samples=args.samples,
            seed=args.seed, caps=caps, scope=_scope(args.scope), threads=args.threads,
        )
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    out.write(run_theorem1(cfg).to_text())


def cmd_suite(args, caps, out):
    names = list(SUITES) if args.name == "all" else [args.name]
    if args.name != "all" and args.name not in SUITES:
        raise ParseError(f"unknown suite {args.name!r}; known: {', '.join(SUITES)}")
    failed = False
    for name in names:
        res = run_suite(name, seed=args.seed, caps=caps)
        out.write(res.to_text())
        failed |= not res.passed
    if failed:
        raise PropertyViolation("suite failures")


# parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed (recorded in outputs)")
    common.add_argument("--caps", default=None, help="cap overrides, e.g. codewords=2**16,coset=4096")
    common.add_argument("--threads", type=int, default=1, help="worker threads; results do not depend on it")

    p = argparse.ArgumentParser(prog="prodexp", description="Exact computations for tensor product codes.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        sp = sub.add_parser(name, parents=[common], help=help)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("rho", cmd_rho, "exact product-expansion factor of a tuple")
    sp.add_argument("tuple")
    sp.add_argument("--oracle", action="store_true", help="cross-check with the sheaf oracle")

    sp = add("eta", cmd_eta, "coboundary expansion of the tuple's sheaf")
    sp.add_argument("tuple")
    sp.add_argument("--level", type=int, default=None, help="cochain level i (default D-2)")

    sp = add("closure", cmd_closure, "ε-closure of a cell set")
    sp.add_argument("cells")
    sp.add_argument("--eps", required=True)
    sp.add_argument("--exclusive", action="store_true", help="absorb lines meeting the set in more than εn cells")
    sp.add_argument("--rounds", action="store_true", help="print the cells added per round as comments")

    sp = add("epsmax", cmd_epsmax, "ε_max of a non-degenerate tuple")
    sp.add_argument("tuple")

    sp = add("extend", cmd_extend, "is a cell set extendable in the product code")
    sp.add_argument("tuple")
    sp.add_argument("cells")

    sp = add("innergen", cmd_innergen, "is a cell set inner-generated for the sum code")
    sp.add_argument("tuple")
    sp.add_argument("cells")
    sp.add_argument("--duality", action="store_true", help="also check extendability in the dual product")

    sp = add("maxext", cmd_maxext, "certify maximal extendability")
    sp.add_argument("tuple")
    sp.add_argument("--scope", default="all", help="'all', 'sampled' or a subset count")

    sp = add("soundness", cmd_soundness, "soundness range of a parity-check matrix")
    sp.add_argument("matrix")
    sp.add_argument("--brute", action="store_true", help="cross-check by scanning the whole space")

    sp = add("ltc-build", cmd_ltc_build, "tensor-extend and zero-pad a code, emit an LTC bundle")
    sp.add_argument("code")
    sp.add_argument("--tensor", type=int, default=1)
    sp.add_argument("--pad", type=int, default=0)

    sp = add("rate-adapt", cmd_rate_adapt, "length-n code of rate at least R from a base family")
    sp.add_argument("family", nargs="+")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--R", required=True)
    sp.add_argument("--growth", type=Fraction, default=None, help="bound on n_{i+1}/n_i")

    sp = add("theorem1", cmd_theorem1, "Monte Carlo experiment on random codes")
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--D", type=int, default=2)
    sp.add_argument("--t", type=int, default=16)
    sp.add_argument("--dims", type=int, nargs="*", default=None)
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--scope", default="all")

    sp = add("suite", cmd_suite, "run a property battery")
    sp.add_argument("name", help=f"one of: all, {', '.join(SUITES)}")
    return p


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        caps = Caps.parse(args.caps)
        if args.threads < 1:
            raise ParseError("--threads must be positive")
        args.fn(args, caps, out)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except PropertyViolation as exc:
        print(f"property violation: {exc}", file=sys.stderr)
        return EXIT_PROPERTY
    except (NotInCode, ProdexpError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
