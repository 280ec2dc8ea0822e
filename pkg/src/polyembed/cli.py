"""Command-line entry point: ``polyembed <command> ...``.

Losses are given either as zoo references (``zoo:abstain?n=3``) or as paths
to JSON documents.  Exit codes: 0 success, 1 other failure, 2 usage,
3 parse error, 4 guard exceeded, 5 unsupported dimension,
6 not representative, 7 indirect elicitation fails or empty envelope,
8 a check ran and found a counterexample (refuted link, regret violation).
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import documents, zoo
from .discrete import DiscreteLoss, Duplicate, Kept, StrictlyRedundant, redundancy_report, trim
from .embedding import analyze, conjugate_surrogate
from .errors import (
    EmptyEnvelope,
    GuardExceeded,
    IndirectElicitationFails,
    NotRepresentative,
    ParseError,
    PolyembedError,
    UnsupportedDimension,
)
from .links import build_link, diagnose_consistency, envelope, verify_proposed_link
from .plot import render_svg
from .rational import Q, fmt, fmt_vec, parse_vec
from .regret import empirical_transfer_check, regret_bound_constant
from .surrogate import PolyhedralLoss

REFUTED = 8

EXIT_CODES = (
    (ParseError, 3),
    (GuardExceeded, 4),
    (UnsupportedDimension, 5),
    (NotRepresentative, 6),
    (IndirectElicitationFails, 7),
    (EmptyEnvelope, 7),
)


def _load(ref: str):
    if ref.startswith("zoo:"):
        return zoo.resolve(ref)
    path = Path(ref)
    if not path.exists():
        raise ParseError(f"no such file or zoo reference: {ref}")
    return documents.read(path)


def _discrete(ref: str) -> DiscreteLoss:
    obj = _load(ref)
    if not isinstance(obj, DiscreteLoss):
        raise ParseError(f"{ref} is not a discrete loss")
    return obj


def _surrogate(ref: str) -> PolyhedralLoss:
    obj = _load(ref)
    if not isinstance(obj, PolyhedralLoss):
        raise ParseError(f"{ref} is not a surrogate")
    return obj


def _rational(s: str):
    try:
        return Q(s)
    except (TypeError, ValueError) as exc:
        raise ParseError(str(exc)) from None


def _point(line: str):
    try:
        return parse_vec(line)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad point {line.strip()!r}: {exc}") from None


def _emit(text: str, out):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _matrix_lines(loss: DiscreteLoss) -> list:
    width = max(len(r) for r in loss.reports)
    return [f"  {r:<{width}}  {fmt_vec(row)}" for r, row in zip(loss.reports, loss.matrix)]


# ---------------------------------------------------------------------------
# commands


def cmd_trim(args):
    loss = _discrete(args.loss)
    t = trim(loss)
    print(f"trim: {len(t.vectors)} vectors")
    for r, v in zip(t.reports, t.vectors):
        print(f"  {r}\t{fmt_vec(v)}")
    print("reports:")
    for name, verdict in redundancy_report(loss).items():
        if isinstance(verdict, Kept):
            status = "kept" if verdict.full_dimensional else "kept (not full-dimensional)"
        elif isinstance(verdict, Duplicate):
            status = f"duplicate of {verdict.of}"
        elif isinstance(verdict, StrictlyRedundant):
            status = f"redundant (dominated by {verdict.by})"
        print(f"  {name}\t{status}")


def cmd_embed(args):
    loss = _discrete(args.loss)
    _emit(documents.dumps(conjugate_surrogate(loss)), args.output)


def cmd_analyze(args):
    L = _surrogate(args.surrogate)
    an = analyze(L, method=args.method)
    q = an.quotient
    print(f"dimension: {L.dim}")
    if q.trivial:
        print("lineality: none")
    else:
        print(f"lineality: {L.dim - q.loss.dim} direction(s); quotient dimension {q.loss.dim}")
    print(f"representative set: {len(an.points)} points")
    for s in an.points:
        print(f"  {fmt_vec(q.section(s))}")
    print("embedded loss:")
    print("\n".join(_matrix_lines(an.embedded)))
    print(f"trim: {len(an.trim.vectors)} vectors")
    for r, v in zip(an.trim.reports, an.trim.vectors):
        print(f"  {r}\t{fmt_vec(v)}")


def _build(args, L):
    if args.target in (None, "embedded"):
        return build_link(L, norm=args.norm, epsilon=args.eps)
    return build_link(L, target=_discrete(args.target), norm=args.norm, epsilon=args.eps)


def cmd_linkgen(args):
    L = _surrogate(args.surrogate)
    art = _build(args, L)
    eps_max = "infinite" if art.epsilon_max == math.inf else fmt(art.epsilon_max)
    print(f"epsilon_max: {eps_max}")
    print(f"epsilon: {fmt(art.epsilon)}")
    print(f"members: {len(art.family.members)}")
    if art.epsilon_max != math.inf and art.epsilon > art.epsilon_max:
        print("warning: epsilon exceeds epsilon_max; envelopes may be empty", file=sys.stderr)
    if args.output:
        documents.write(art, args.output)


def cmd_linkeval(args):
    art = documents.read(args.artifact)
    stream = open(args.input, encoding="utf-8") if args.input else sys.stdin
    with stream:
        for line in stream:
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            env = envelope(art, _point(line))
            print(f"{env[0]}\t{{{','.join(env)}}}")


def cmd_verify_link(args):
    L = _surrogate(args.surrogate)
    target = _discrete(args.target)
    psi = zoo.resolve_link(args.link)
    res = verify_proposed_link(L, target, psi, args.eps, norm=args.norm, n_samples=args.samples, seed=args.seed)
    if res:
        mode = f", {res.exact_points} from the boundary arrangement" if res.exact_points else ""
        print(f"verified at {res.count} points{mode}")
        return 0
    print("refuted")
    print(f"  u = {fmt_vec(res.u)}")
    print(f"  link report = {res.report}")
    print(f"  p = {fmt_vec(res.p)}  (the report is not optimal there, yet u is within epsilon of its optimal set)")
    return REFUTED


def cmd_diagnose(args):
    obj = _load(args.loss)
    if isinstance(obj, PolyhedralLoss):
        embedded = analyze(obj).embedded
    elif isinstance(obj, DiscreteLoss):
        embedded = obj
    else:
        raise ParseError(f"{args.loss} is neither a surrogate nor a discrete loss")
    v = diagnose_consistency(embedded, _discrete(args.target))
    print(f"verdict: {v.status}")
    print("cells inside a target cell: " + (", ".join(v.restriction) or "none"))
    if v.offending:
        print("cells crossing target cells: " + ", ".join(v.offending))
    for w in v.witnesses:
        print(f"  cell {w.cell}: p = {fmt_vec(w.p)} -> {{{','.join(w.reports)}}};  p' = {fmt_vec(w.p_prime)} -> {{{','.join(w.reports_prime)}}}")


def cmd_regret(args):
    L = _surrogate(args.surrogate)
    target = _discrete(args.target)
    psi = zoo.resolve_link(args.link)
    rows = []
    if args.c is None:
        art = build_link(L, target=target, norm=args.norm, epsilon=args.eps)
        rep = regret_bound_constant(L, target, art, seed=args.seed)
        c = rep.c_bound
        rows += [
            ("C_ell", fmt(rep.c_ell)),
            ("H_L", fmt(rep.hoffman) + ("" if rep.hoffman_exact else " (sampled lower bound)")),
            ("epsilon", fmt(rep.eps_psi)),
            ("c_bound", fmt(c)),
        ]
    else:
        c = args.c
        rows.append(("c", fmt(c)))
    emp = empirical_transfer_check(L, target, psi, c, n_samples=args.samples, seed=args.seed)
    ratio = "inf" if emp.max_sampled_ratio == math.inf else fmt(emp.max_sampled_ratio)
    rows += [("samples", str(emp.samples)), ("max_ratio", ratio), ("violations", str(emp.violations))]
    width = max(len(k) for k, _ in rows)
    for k, v in rows:
        print(f"{k:<{width}}  {v}")
    return 0 if emp.violations == 0 else REFUTED


def _parse_slice(spec: str, loss: DiscreteLoss):
    label, sep, value = spec.partition("=")
    if not sep:
        raise ParseError(f"slice must look like y4=1/4, got {spec!r}")
    label = label.strip()
    if label not in loss.outcomes and label.startswith("y"):
        label = label[1:]
    if label not in loss.outcomes:
        raise ParseError(f"unknown outcome {label!r} in slice")
    return loss.outcomes.index(label), _rational(value)


def cmd_plot(args):
    loss = _discrete(args.loss)
    overlay = _discrete(args.overlay) if args.overlay else None
    sl = _parse_slice(args.slice, loss) if args.slice else None
    _emit(render_svg(loss, overlay, sl), args.output)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polyembed", description="Embeddings, links and calibration checks for polyhedral surrogate losses.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("trim", help="trim vectors and redundant reports of a discrete loss")
    p.add_argument("loss")
    p.set_defaults(func=cmd_trim)

    p = sub.add_parser("embed", help="write a surrogate embedding a discrete loss")
    p.add_argument("loss")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("analyze", help="representative set and embedded loss of a surrogate")
    p.add_argument("surrogate")
    p.add_argument("--method", choices=("auto", "arrangement", "lp"), default="auto")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("linkgen", help="build a thickened link")
    p.add_argument("surrogate")
    p.add_argument("--target", help="discrete loss, or 'embedded' for the surrogate's own embedded loss")
    p.add_argument("--norm", choices=("inf", "l1"), default="inf")
    p.add_argument("--eps", type=_rational)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_linkgen)

    p = sub.add_parser("linkeval", help="evaluate a link artifact at points read one per line")
    p.add_argument("artifact")
    p.add_argument("-i", "--input")
    p.set_defaults(func=cmd_linkeval)

    p = sub.add_parser("verify-link", help="check a proposed link against the thickened envelope")
    p.add_argument("surrogate")
    p.add_argument("--target", required=True)
    p.add_argument("--link", required=True)
    p.add_argument("--eps", type=_rational, required=True)
    p.add_argument("--norm", choices=("inf", "l1"), default="inf")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify_link)

    p = sub.add_parser("diagnose", help="which embedded cells fit inside a target cell")
    p.add_argument("loss", help="surrogate or discrete loss")
    p.add_argument("--target", required=True)
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("regret", help="regret transfer constant and an empirical check")
    p.add_argument("surrogate")
    p.add_argument("--target", required=True)
    p.add_argument("--link", required=True)
    p.add_argument("--eps", type=_rational)
    p.add_argument("--norm", choices=("inf", "l1"), default="inf")
    p.add_argument("--c", type=_rational, help="check this constant instead of the computed bound")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_regret)

    p = sub.add_parser("plot", help="SVG of level-set cells on the probability triangle")
    p.add_argument("loss")
    p.add_argument("--slice", help="fix one outcome for four-outcome losses, e.g. y4=1/4")
    p.add_argument("--overlay")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_plot)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args) or 0
    except PolyembedError as exc:
        for cls, code in EXIT_CODES:
            if isinstance(exc, cls):
                print(f"error: {exc}", file=sys.stderr)
                return code
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
