"""Command-line front end: ``stdlaplace <subcommand> [options]``.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, liealg
from .errors import CheckFailure, InputError, StructuralError
from .exact import encode_matrix, encode_scalar

SCHEMA_VERSION = 1
DEFAULT_SEED = 0


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _Usage(message)


class _Usage(Exception):
    pass


# ---------------------------------------------------------------- argument helpers

def _seed(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None
    if not -2 ** 63 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return v


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


def _common(p):
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--seed", type=_seed, default=DEFAULT_SEED,
                   help=f"random seed (default {DEFAULT_SEED})")
    p.add_argument("--out", type=Path, help="write the report to this file")


def _context_args(p):
    p.add_argument("--context", default="so",
                   help="so, u, sp, su3, g2, spin7 or a name such as 'SO(5)'")
    p.add_argument("--m", type=int, help="dimension for so")
    p.add_argument("--n", type=int, help="n for u (U(n)) and sp (Sp(n)Sp(1))")
    p.add_argument("--spin", action="store_true", help="enable spinors (so only)")


def build_context(args):
    from .holctx import context
    name = args.context.lower()
    if name == "so":
        if args.m is None:
            raise InputError("--context so needs --m")
        return context(f"SO({args.m})", spin=args.spin)
    if name == "u":
        if args.n is None:
            raise InputError("--context u needs --n")
        return context(f"U({args.n})")
    if name == "sp":
        if args.n is None:
            raise InputError("--context sp needs --n")
        return context(f"Sp({args.n})Sp(1)")
    return context(args.context, spin=args.spin)


def parse_curvature(ctx, text: str, seed: int):
    """constant:c, random[:seed], sphere, kaehler:c, lie_group:t, grassmannian:k,n,
    stiefel:n, s6."""
    from fractions import Fraction

    from .matmodel import curvature as cv
    kind, _, arg = text.partition(":")
    kind = kind.lower()
    try:
        if kind == "constant":
            return cv.constant(ctx, Fraction(arg or "1"))
        if kind == "random":
            return cv.random_bianchi(ctx, int(arg) if arg else seed)
        if kind == "sphere":
            return cv.sphere(ctx.m)
        if kind == "kaehler":
            return cv.kaehler_const_hol_sec(ctx, Fraction(arg or "1"))
        if kind == "lie_group":
            return cv.lie_group(Fraction(arg or "0"))
        if kind == "grassmannian":
            k, n = (int(x) for x in arg.split(","))
            return cv.real_grassmannian(k, n)
        if kind == "stiefel":
            return cv.stiefel(int(arg))
        if kind == "s6":
            return cv.nearly_kaehler_s6()
    except (ValueError, ZeroDivisionError):
        raise InputError(f"cannot parse curvature {text!r}") from None
    raise InputError(f"unknown curvature model {text!r}")


# ---------------------------------------------------------------- subcommands

def cmd_decompose(args):
    spec = liealg.LieAlgebraSpec.parse(args.algebra)
    w1 = spec.check_weight(liealg.parse_weight(args.hw))
    w2 = spec.check_weight(liealg.parse_weight(args.hw2))
    d = liealg.tensor_decompose(spec, w1, w2)
    data = {"algebra": spec.name, "hw1": list(w1), "hw2": list(w2), **d.to_json(),
            "text": d.text(), "dimension": d.dimension}
    text = f"{spec.name}: {list(w1)} x {list(w2)} = {d.text()}  (dim {d.dimension})"
    return 0, data, text


def cmd_gradients(args):
    from .matmodel import gradient_targets, rep_functor
    ctx = build_context(args)
    V = rep_functor(ctx, args.rep)
    rows = [{"index": g.index, "label": g.label(), "dim": g.dim, "multiplicity": g.multiplicity}
            for g in gradient_targets(V)]
    data = {"context": ctx.name, "rep": args.rep, "dim": V.dim, "targets": rows}
    lines = [f"{ctx.name}, V = {args.rep} (dim {V.dim}): {len(rows)} gradient targets"]
    lines += [f"  {r['index']}: {r['label']}  dim {r['dim']}" for r in rows]
    return 0, data, "\n".join(lines)


def cmd_weights(args):
    from fractions import Fraction

    from .matmodel import conformal_weights, rep_functor, weight_trace
    ctx = build_context(args)
    V = rep_functor(ctx, args.rep)
    ws = conformal_weights(V)
    tr = weight_trace(ws)
    cas_ok = all(w.casimir_check is None or w.casimir_check == w.value for w in ws)
    ok = tr == Fraction(0) and cas_ok
    data = {"context": ctx.name, "rep": args.rep, "entries": [w.to_json() for w in ws],
            "trace": encode_scalar(tr), "casimir_formula_agrees": cas_ok, "ok": ok}
    lines = [f"{ctx.name}, V = {args.rep}: conformal weights"]
    for w in ws:
        lines.append(f"  {w.target.label():<16} dim {w.target.dim:<4} b = {w.value}"
                     f"  1-b = {1 - w.value}")
    lines.append(f"sum b dim = {tr}; Casimir formula {'agrees' if cas_ok else 'DISAGREES'}")
    return (0 if ok else 1), data, "\n".join(lines)


def cmd_qr(args):
    from .matmodel import curvature_identities_check, q_of_R, rep_functor
    ctx = build_context(args)
    R = parse_curvature(ctx, args.curvature, args.seed)
    V = rep_functor(ctx, args.rep)
    Q = q_of_R(ctx, V, R)
    ident = curvature_identities_check(ctx, R)
    data = {"context": ctx.name, "rep": args.rep, "curvature": args.curvature,
            "q": encode_matrix(Q), "ricci": encode_matrix(R.ricci()),
            "identities": ident.to_json(), "ok": ident.ok}
    lines = [f"{ctx.name}, V = {args.rep}, R = {args.curvature}", "q(R) ="]
    lines += ["  [" + ", ".join(r) + "]" for r in encode_matrix(Q)]
    lines.append("Ric =")
    lines += ["  [" + ", ".join(r) + "]" for r in encode_matrix(R.ricci())]
    for k, v in ident.checks.items():
        if v is not None:
            lines.append(f"  {'PASS' if v else 'FAIL'}  {k}")
    return (0 if ident.ok else 1), data, "\n".join(lines)


def cmd_integral(args):
    from .matmodel import grassmann_integral_check, rep_functor
    ctx = build_context(args)
    R = parse_curvature(ctx, args.curvature, args.seed)
    V = rep_functor(ctx, args.rep)
    rep = grassmann_integral_check(ctx, R, V, args.lam, args.mode, args.samples, args.seed)
    data = {"context": ctx.name, "rep": args.rep, "curvature": args.curvature,
            **rep.to_json()}
    lines = [f"{ctx.name}, V = {args.rep}, R = {args.curvature}: {rep.mode} integration",
             f"  max deviation {rep.max_deviation}", f"  {'PASS' if rep.ok else 'FAIL'}"]
    for k, v in sorted(rep.details.items()):
        lines.append(f"  {k}: {v}")
    return (0 if rep.ok else 1), data, "\n".join(lines)


def cmd_commute(args):
    from . import vanish
    s = args.survey
    if s in ("g2", "nk", "spin7"):
        rep = {"g2": vanish.g2_survey, "nk": vanish.nearly_kaehler_survey,
               "spin7": lambda: vanish.spin7_survey(args.recompute)}[s]()
        return (0 if rep.commutes else 1), rep.to_json(), rep.text()
    if s == "rs":
        ms = [args.m] if args.m else [5, 7]
        rows = [vanish.rarita_schwinger(m) for m in ms]
        ok = all(r["mult"] == 0 for r in rows)
        text = "\n".join(f"m={r['m']}: C={r['C']} V={r['V']} multiplicity {r['mult']}"
                         for r in rows)
        return (0 if ok else 1), {"rows": rows, "ok": ok}, text
    if s == "qk":
        n = args.n or 2
        cases = [(args.k, args.a, args.b)] if args.k is not None else vanish.QK_CASES
        if args.k is not None and (args.a is None or args.b is None):
            raise InputError("--survey qk with --k needs --a and --b")
        reps = [vanish.qk_generator_errors(n, k, a, b) for k, a, b in cases]
        ok = all(r.ok for r in reps)
        lines = []
        for r in reps:
            res = ", ".join(f"{t.label}: rank {t.rank}" for t in r.residuals())
            lines.append(f"n={r.n} k={r.k} a={r.a} b={r.b}: "
                         f"{sum(t.zero for t in r.degree_changing())}/{len(r.degree_changing())}"
                         f" degree-changing zero; residuals {res or 'none'}")
        return (0 if ok else 1), {"cases": [r.to_json() for r in reps], "ok": ok}, "\n".join(lines)
    raise InputError(f"unknown survey {s!r}")


def cmd_jet_verify(args):
    from . import jetverify
    if args.replay:
        dumps = json.loads(Path(args.replay).read_text())
        dumps = dumps if isinstance(dumps, list) else [dumps]
        res = [jetverify.replay(d) for d in dumps]
        ok = all(r["equal"] for r in res)
        text = "\n".join(f"{r['gradient']}: {'equal' if r['equal'] else 'DIFFERENT'}" for r in res)
        return (0 if ok else 1), {"replayed": res, "ok": ok}, text
    rep = jetverify.run_suite(args.m, args.rep, args.trials, args.seed, args.bound)
    failures = [f for r in rep.reports for f in r.failures]
    if args.dump and failures:
        Path(args.dump).write_text(json.dumps(failures, indent=1, sort_keys=True) + "\n")
    data = rep.to_json()
    if not args.verbose:
        data.pop("reports")
        data["failures"] = len(failures)
    return (0 if rep.ok else 1), data, rep.text()


def cmd_golden(args):
    from . import vanish
    from .holctx import context
    targets = {
        "g2_table.json": vanish.g2_table,
        "derivative_weights.json": lambda: {
            name: vanish.derivative_weights(context(name)).to_json()
            for name in ("G2", "Spin(7)")},
    }
    names = [args.only] if args.only else sorted(targets)
    rows, ok = [], True
    for name in names:
        if name not in targets:
            raise InputError(f"unknown golden file {name!r}; choose from {sorted(targets)}")
        fresh = targets[name]()
        stored = vanish.load_golden(name)
        same = fresh == stored
        ok = ok and same
        rows.append({"file": name, "matches": same})
        if args.write:
            args.write.mkdir(parents=True, exist_ok=True)
            (args.write / name).write_text(json.dumps(fresh, indent=1, sort_keys=True) + "\n")
    text = "\n".join(f"{'PASS' if r['matches'] else 'FAIL'}  {r['file']}" for r in rows)
    return (0 if ok else 1), {"files": rows, "ok": ok}, text


# ---------------------------------------------------------------- driver

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="stdlaplace", description="Exact Weitzenboeck and commutator toolkit.")
    p.add_argument("--version", action="version", version=f"stdlaplace {__version__}")
    sub = p.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    s = sub.add_parser("decompose", help="tensor product decomposition")
    s.add_argument("--algebra", required=True, help="e.g. G2, B3, A1xC2")
    s.add_argument("--hw", required=True, help="first highest weight, e.g. 1,0")
    s.add_argument("--hw2", required=True, help="second highest weight")
    _common(s)
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("gradients", help="isotypic targets of T (x) V")
    _context_args(s)
    s.add_argument("--rep", default="t")
    _common(s)
    s.set_defaults(func=cmd_gradients)

    s = sub.add_parser("weights", help="conformal weights b_eps")
    _context_args(s)
    s.add_argument("--rep", default="t")
    _common(s)
    s.set_defaults(func=cmd_weights)

    s = sub.add_parser("qr", help="q(R) on a representation, with curvature identities")
    _context_args(s)
    s.add_argument("--rep", default="t")
    s.add_argument("--curvature", default="random")
    _common(s)
    s.set_defaults(func=cmd_qr)

    s = sub.add_parser("integral", help="Grassmannian integral formula for q(R)")
    _context_args(s)
    s.add_argument("--rep", default="t")
    s.add_argument("--curvature", default="random")
    s.add_argument("--lam", type=float, default=0)
    s.add_argument("--mode", choices=("auto", "exact", "monte_carlo"), default="auto")
    s.add_argument("--samples", type=_positive, default=10 ** 6)
    _common(s)
    s.set_defaults(func=cmd_integral)

    s = sub.add_parser("commute", help="vanishing surveys and the quaternion-Kaehler generators")
    s.add_argument("--survey", required=True, choices=("g2", "nk", "spin7", "rs", "qk"))
    s.add_argument("--recompute", action="store_true", help="spin7: recompute nabla R weights")
    s.add_argument("--m", type=int, help="rs: odd dimension (default 5 and 7)")
    s.add_argument("--n", type=int, help="qk: n (default 2)")
    s.add_argument("--k", type=int)
    s.add_argument("--a", type=int)
    s.add_argument("--b", type=int)
    _common(s)
    s.set_defaults(func=cmd_commute)

    s = sub.add_parser("jet-verify", help="exact jet checks on random metrics")
    s.add_argument("--m", type=int, default=3)
    s.add_argument("--rep", default="t")
    s.add_argument("--trials", type=_positive, default=20)
    s.add_argument("--bound", default="1", help="magnitude bound of metric coefficients")
    s.add_argument("--dump", type=Path, help="write failing cases here as JSON")
    s.add_argument("--replay", type=Path, help="recompute cases from a dump file")
    s.add_argument("--verbose", action="store_true", help="include every per-trial report")
    _common(s)
    s.set_defaults(func=cmd_jet_verify)

    s = sub.add_parser("golden", help="regenerate stored tables and compare")
    s.add_argument("--only", help="a single file name")
    s.add_argument("--write", type=Path, help="directory for regenerated files")
    _common(s)
    s.set_defaults(func=cmd_golden)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _Usage as e:
        print(f"stdlaplace: error: {e}", file=sys.stderr)
        return 2
    try:
        code, data, text = args.func(args)
    except InputError as e:
        print(f"stdlaplace {args.subcommand}: error: {e}", file=sys.stderr)
        return 2
    except (CheckFailure, StructuralError) as e:
        print(f"stdlaplace {args.subcommand}: check failed: {e}", file=sys.stderr)
        return 1
    if args.format == "json":
        doc = {"schema_version": SCHEMA_VERSION, "subcommand": args.subcommand,
               "seed": args.seed, "result": data}
        out = json.dumps(doc, indent=2, sort_keys=True, default=str)
    else:
        out = f"# stdlaplace {args.subcommand} seed={args.seed}\n{text}"
    if args.out:
        args.out.write_text(out + "\n")
    else:
        print(out)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
