"""Command-line front end (``eqk``).

Matrices are read from and written to files; a short 4-decimal summary goes
to stdout.  Exit status: 0 on success, 2 when the input is rejected (the
first stderr line is ``ErrorName: message``), 1 on an unexpected failure.
"""
import argparse
import math
import os
import sys

import numpy as np

from . import etf as etf_mod
from .errors import EquiangularError, InputError, RootsNotReal
from .generator import SignPolicy, generate
from .gram import (
    condition_number, equiangular_inverse, equiangular_solve, gram_inverse, gram_matrix,
    gram_sqrt, spec_from_alpha,
)
from .io import FORMATS, read_matrix, write_matrix
from .spectral import (
    alpha_feasibility_threshold, equiangular_similarity, factor_rSSt, sds_factorize,
)
from .sr import sr_enumerate, sr_factorize
from .stability import FAMILIES, report_csv, stability_harness


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _num(x):
    s = f"{x:.4f}"
    return "0.0000" if s == "-0.0000" else s


def format_table(m):
    """Right-aligned 4-decimal rendering of a vector or matrix."""
    m = np.atleast_2d(np.asarray(m, dtype=float))
    cells = [[_num(x) for x in row] for row in m]
    width = max(len(c) for row in cells for c in row)
    return "\n".join("  ".join(c.rjust(width) for c in row) for row in cells)


def _alphas(args):
    """cosines from --angle/--unit or --alpha; empty list if neither was given."""
    if args.alpha is not None:
        return list(args.alpha)
    if args.angle is None:
        return []
    vals = args.angle
    if args.unit == "deg":
        vals = [math.radians(v) for v in vals]
    return [math.cos(v) for v in vals]


def _alpha(args):
    a = _alphas(args)
    if not a:
        raise InputError("an angle is required: give --angle (with --unit) or --alpha")
    if len(a) > 1:
        raise InputError("this command takes a single angle")
    return a[0]


def _policy(text):
    if text is None:
        return None
    if any(c not in "+-" for c in text):
        raise InputError("--policy must be a string of '+' and '-' characters")
    return SignPolicy(tuple(1 if c == "+" else -1 for c in text))


class _Out:
    def __init__(self, args):
        self.dir = args.out
        self.fmt = args.format
        self.stdout = sys.stdout

    def matrix(self, name, m):
        os.makedirs(self.dir, exist_ok=True)
        path = os.path.join(self.dir, f"{name}.{self.fmt}")
        write_matrix(m, path, self.fmt)
        self.line(f"wrote {path}")

    def text(self, name, content):
        os.makedirs(self.dir, exist_ok=True)
        path = os.path.join(self.dir, name)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(content)
        self.line(f"wrote {path}")

    def line(self, s=""):
        print(s, file=self.stdout)

    def table(self, title, m):
        self.line(f"{title}:")
        self.line(format_table(m))


def _input(args, name="input"):
    path = getattr(args, name)
    if path is None:
        raise InputError(f"--{name} is required")
    return read_matrix(path, args.input_format)


# ---------------------------------------------------------------------------
# subcommands

def cmd_ev_gen(args, out):
    v = _input(args)
    s, diag = generate(v, alpha=_alpha(args), policy=_policy(args.policy))
    out.matrix("S", s)
    out.matrix("R", diag.r)
    out.table("S", s)


def cmd_sr(args, out):
    a = _input(args)
    alpha = _alpha(args)
    if args.enumerate:
        facs = sr_enumerate(a, alpha=alpha)
        out.line(f"{len(facs)} factorizations")
        for f in facs:
            label = f.policy.label or "none"
            out.matrix(f"S_{label}", f.s)
            out.matrix(f"R_{label}", f.r)
        return
    f = sr_factorize(a, alpha=alpha, policy=_policy(args.policy))
    out.matrix("S", f.s)
    out.matrix("R", f.r)
    out.table("R", f.r)


def cmd_inv(args, out):
    s = _input(args)
    spec = spec_from_alpha(s.shape[0], _alpha(args))
    inv = equiangular_inverse(s, spec)
    out.matrix("Sinv", inv)
    out.table("S^-1", inv)


def cmd_solve(args, out):
    s = _input(args)
    b = read_matrix(args.rhs, args.input_format) if args.rhs else None
    if b is None:
        raise InputError("--rhs is required")
    if b.ndim == 2 and 1 in b.shape:
        b = b.ravel()
    spec = spec_from_alpha(s.shape[0], _alpha(args))
    x = equiangular_solve(s, b, spec)
    out.matrix("x", x)
    out.table("x", x)


def _need_n(args):
    if args.n is None or args.n < 2:
        raise InputError("--n must be an integer >= 2")
    return args.n


def cmd_gram(args, out):
    spec = spec_from_alpha(_need_n(args), _alpha(args))
    out.matrix("G", gram_matrix(spec).dense())
    out.matrix("Ginv", gram_inverse(spec).dense())
    out.line(f"alpha = {_num(spec.alpha)}  h = {_num(spec.h)}  k = {_num(spec.k)}")
    out.line(f"condition number of S = {_num(condition_number(spec))}")


def cmd_sqrt(args, out):
    spec = spec_from_alpha(_need_n(args), _alpha(args))
    pair = gram_sqrt(spec)
    out.matrix("Gst", pair.structure(spec.n).dense())
    out.line(f"s = {_num(pair.s)}  t = {_num(pair.t)}")


def cmd_sds(args, out):
    a = _input(args)
    alpha = _alpha(args)
    try:
        f = sds_factorize(a, alpha)
    except RootsNotReal as exc:
        thr = alpha_feasibility_threshold(a)
        exc.args = (f"{exc.args[0]}; real roots need alpha <= {_num(thr)}",)
        raise
    out.matrix("S", f.s)
    out.matrix("D", np.diag(f.d))
    out.table("d", f.d)


def cmd_rsst(args, out):
    a = _input(args)
    f = factor_rSSt(a)
    out.matrix("S", f.s)
    out.line(f"r = {_num(f.r)}  alpha = {_num(f.alpha_used)}")


def cmd_schur_sim(args, out):
    a = _input(args)
    sim = equiangular_similarity(a, alpha=_alpha(args))
    out.matrix("S", sim.s)
    out.matrix("T", sim.t)
    out.table("T", sim.t)


def _report(out, s):
    rep = etf_mod.verify_tight(s)
    n, m = s.shape
    out.line(f"tightness residual = {rep.tightness_residual:.3e}")
    out.line(f"coherence = {_num(rep.measured_coherence)}  "
             f"welch bound = {_num(etf_mod.etf_coherence(n, m))}  frame bound = {_num(rep.frame_bound_estimate)}")


def cmd_etf(args, out):
    if args.input is not None:
        s = etf_mod.etf_from_vectors(_input(args))
    else:
        if args.n is None or args.n < 1:
            raise InputError("give --input or --n >= 1")
        s = etf_mod.simplex_frame(args.n).s_n
    out.matrix("frame", s)
    _report(out, s)


def cmd_frame_check(args, out):
    _report(out, _input(args))


def cmd_stability(args, out):
    thetas = [math.acos(a) for a in _alphas(args)] or [math.pi / 3]
    recs = stability_harness(args.family or FAMILIES, args.dims or [8], thetas)
    out.text("stability.csv", report_csv(recs))
    for r in recs:
        out.line(f"{r.method:>13} {r.family:>13} n={r.n:<3} theta={_num(r.theta)} "
                 f"gram_dev={r.gram_deviation:.3e} {r.status}")


def build_parser():
    p = _Parser(prog="eqk", description="Equiangular vectors and matrices")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(name, handler, help_, angle=True, input_=True, multi_angle=False):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(handler=handler)
        if input_:
            sp.add_argument("--input", "-i", help="input matrix file")
        sp.add_argument("--input-format", choices=FORMATS, help="default: from extension")
        sp.add_argument("--out", "-o", default=".", help="output directory")
        sp.add_argument("--format", choices=FORMATS, default="mtx", help="output file format")
        if angle:
            nargs = "+" if multi_angle else 1
            g = sp.add_mutually_exclusive_group()
            g.add_argument("--angle", type=float, nargs=nargs, help="common angle")
            g.add_argument("--alpha", type=float, nargs=nargs, help="common cosine")
            sp.add_argument("--unit", choices=("rad", "deg"), default="rad")
        return sp

    sp = common("ev-gen", cmd_ev_gen, "generate equiangular vectors from the input columns")
    sp.add_argument("--policy", help="sign per step from the second vector on, e.g. '+-+'")
    sp = common("sr", cmd_sr, "SR factorization")
    sp.add_argument("--policy", help="sign per step from the second vector on, e.g. '+-+'")
    sp.add_argument("--enumerate", action="store_true", help="write all 2^(n-1) factorizations")
    common("inv", cmd_inv, "inverse of an equiangular matrix in O(n^2)")
    sp = common("solve", cmd_solve, "solve S x = b for equiangular S")
    sp.add_argument("--rhs", help="right-hand side file")
    sp = common("gram", cmd_gram, "Gram matrix and its inverse", input_=False)
    sp.add_argument("--n", type=int)
    sp = common("sqrt", cmd_sqrt, "principal square root G(s,t)", input_=False)
    sp.add_argument("--n", type=int)
    common("sds", cmd_sds, "A = S D S^T for symmetric A")
    common("rsst", cmd_rsst, "A = r S S^T for a two-eigenvalue symmetric A", angle=False)
    common("schur-sim", cmd_schur_sim, "equiangular similarity to block triangular form")
    sp = common("etf", cmd_etf, "simplex equiangular tight frame", angle=False)
    sp.add_argument("--n", type=int)
    common("frame-check", cmd_frame_check, "tightness and coherence of a frame", angle=False)
    sp = common("stability", cmd_stability, "loss-of-orthogonality report",
                input_=False, multi_angle=True)
    sp.add_argument("--family", action="append", choices=FAMILIES)
    sp.add_argument("--n", dest="dims", type=int, action="append")
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args.handler(args, _Out(args))
    except UsageError as exc:
        print(f"UsageError: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 2
    except (EquiangularError, OSError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help
        return exc.code if isinstance(exc.code, int) else 0
    except Exception as exc:  # pragma: no cover - defensive
        print(f"InternalError: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
