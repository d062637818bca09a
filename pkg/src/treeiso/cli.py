"""Command-line front end.

Exit codes: 0 on success, 1 on a domain failure (not equivalent, a failed
verification, an input outside a bijection's domain), 2 on usage or parse
errors.
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys
from pathlib import Path

from .bijections import (
    BijectionError,
    CycleDetected,
    Landed,
    compile_derivation,
    flatten_chain,
    four_step_instance,
    garsia_milne,
    parse_chain,
    parse_vef,
    ptuples,
    render_chain,
    render_vef,
    seven_decode,
    seven_encode,
)
from .derivations import derive_equivalence, render_derivation
from .patterns import parse_ptuple, render_ppattern
from .presentations import (
    Free,
    parse_presentation,
    random_consistent,
    render_presentation,
    render_term,
    simplify,
)
from .semiring import Poly, decide_equiv, normal_form, parse_poly
from .tree import enumerate_trees, parse_tree, render_tree
from .verifier import check_bijection_family, family_weight_check

OK, FAIL, USAGE = 0, 1, 2
DEFAULT_MAX_ITER = 100000


class UsageError(Exception):
    pass


def _emit(args, text: str, data: dict) -> None:
    if args.json:
        print(json.dumps(data, sort_keys=True))
    else:
        print(text)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _load_function(text: str):
    if text.lstrip().startswith("chain"):
        return parse_chain(text)
    return parse_vef(text)


def _max_iter() -> int:
    raw = os.environ.get("TREEISO_MAX_ITER", str(DEFAULT_MAX_ITER))
    try:
        value = int(raw)
    except ValueError:
        raise UsageError(f"TREEISO_MAX_ITER must be an integer, got {raw!r}") from None
    if value < 0:
        raise UsageError("TREEISO_MAX_ITER must be non-negative")
    return value


# -- subcommands -----------------------------------------------------------------------

def cmd_nf(args) -> int:
    nf = normal_form(parse_poly(args.poly))
    _emit(args, str(nf), {"normal_form": str(nf), "a": nf.a, "b": nf.b, "c": nf.c})
    return OK


def cmd_equiv(args) -> int:
    same = decide_equiv(parse_poly(args.p), parse_poly(args.q))
    _emit(args, "true" if same else "false", {"equivalent": same})
    return OK


def cmd_derive(args) -> int:
    p, q = parse_poly(args.p), parse_poly(args.q)
    d = derive_equivalence(p, q)
    if d is None:
        _emit(args, "NotEquivalent", {"equivalent": False})
        return FAIL
    text = render_derivation(d)
    _emit(args, text.rstrip("\n"), {"equivalent": True, "moves": len(d), "derivation": text})
    return OK


def cmd_compile(args) -> int:
    p, q = parse_poly(args.p), parse_poly(args.q)
    d = derive_equivalence(p, q)
    if d is None:
        _emit(args, "NotEquivalent", {"equivalent": False})
        return FAIL
    chain = compile_derivation(d)
    if args.flatten:
        f = flatten_chain(chain)
        text, kind, count = render_vef(f), "vef", len(f)
    else:
        text, kind, count = render_chain(chain), "chain", len(chain)
    if args.output:
        Path(args.output).write_text(text)
        _emit(args, f"wrote {kind} with {count} entries to {args.output}",
              {"kind": kind, "entries": count, "path": args.output})
    else:
        _emit(args, text.rstrip("\n"), {"kind": kind, "entries": count, "text": text})
    return OK


def cmd_apply(args) -> int:
    fn = _load_function(_read(args.file))
    if args.inverse:
        fn = fn.inverse()
    x = parse_ptuple(args.ptuple)
    try:
        y = fn.apply(x)
    except BijectionError as exc:
        _emit(args, f"error: {exc}", {"error": str(exc)})
        return FAIL
    out = render_ppattern(y)
    _emit(args, out, {"input": render_ppattern(x), "output": out})
    return OK


def cmd_seven(args) -> int:
    if args.action == "encode":
        if len(args.trees) != 7:
            raise UsageError(f"encode takes 7 trees, got {len(args.trees)}")
        u = render_tree(seven_encode([parse_tree(t) for t in args.trees]))
        _emit(args, u, {"tree": u})
    else:
        if len(args.trees) != 1:
            raise UsageError(f"decode takes 1 tree, got {len(args.trees)}")
        ts = [render_tree(t) for t in seven_decode(parse_tree(args.trees[0]))]
        _emit(args, " ".join(ts), {"trees": ts})
    return OK


def cmd_verify(args) -> int:
    f = parse_vef(_read(args.file))
    try:
        report = check_bijection_family(f, args.depth)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if report:
        weights = family_weight_check(f)
        if not weights:
            report = weights
        else:
            report.checks += weights.checks
    _emit(args, str(report), report.to_dict())
    return OK if report else FAIL


def cmd_present(args) -> int:
    if args.action == "random":
        text = render_presentation(random_consistent(random.Random(args.seed)))
        _emit(args, text.rstrip("\n"), {"seed": args.seed, "presentation": text})
        return OK
    if args.file is None:
        raise UsageError("present simplify needs a file")
    res = simplify(parse_presentation(_read(args.file)))
    if isinstance(res, Free):
        data = {
            "result": "Free",
            "basis": sorted(res.basis),
            "elimination": {a: render_term(t) for a, t in sorted(res.elimination.items())},
        }
    else:
        s, t = res.witness
        data = {"result": "Inconsistent", "axiom": res.axiom, "witness": [render_term(s), render_term(t)]}
    _emit(args, str(res), data)
    return OK


def cmd_enumerate(args) -> int:
    if args.size < 0:
        raise UsageError("size must be non-negative")
    trees = enumerate_trees(args.size)
    if args.json:
        print(json.dumps({"size": args.size, "count": len(trees), "trees": [render_tree(t) for t in trees]}))
    else:
        for t in trees:
            print(render_tree(t))
    return OK


def cmd_gm(args) -> int:
    g = four_step_instance()
    limit = _max_iter()
    checked = 0
    for a in ptuples(Poly((7,)), args.size):
        checked += 1
        res = garsia_milne(g, a, limit)
        if not isinstance(res, Landed):
            kind = "CycleDetected" if isinstance(res, CycleDetected) else "NonTerminated"
            _emit(args, f"{kind} on {render_ppattern(a)} within {limit} iterations",
                  {"result": kind, "input": render_ppattern(a), "max_iter": limit, "checked": checked})
            return FAIL
    _emit(args, f"all {checked} inputs landed", {"result": "Landed", "checked": checked, "max_iter": limit})
    return OK


# -- parser ------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="print a machine-readable JSON object")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="seed for generated inputs (default 0)")

    parser = argparse.ArgumentParser(prog="treeiso", parents=[common],
                                     description="Bijections between polynomial sets of binary trees.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(func=func)
        return sp

    sp = add("nf", cmd_nf, "print the normal form a + bX^2 + cX^4")
    sp.add_argument("poly")
    for name, func, help_text in (
        ("equiv", cmd_equiv, "decide equivalence under X = 1 + X^2"),
        ("derive", cmd_derive, "print a move derivation between two polynomials"),
    ):
        sp = add(name, func, help_text)
        sp.add_argument("p")
        sp.add_argument("q")
    sp = add("compile", cmd_compile, "compile a derivation into a bijection chain or pattern family")
    sp.add_argument("p")
    sp.add_argument("q")
    sp.add_argument("--flatten", action="store_true", help="write a single pattern family")
    sp.add_argument("-o", "--output", help="output file (default stdout)")
    sp = add("apply", cmd_apply, "apply a chain or pattern-family file to a P-tuple")
    sp.add_argument("file")
    sp.add_argument("ptuple")
    sp.add_argument("--inverse", action="store_true")
    sp = add("seven", cmd_seven, "the seven-trees-in-one codec")
    sp.add_argument("action", choices=["encode", "decode"])
    sp.add_argument("trees", nargs="+")
    sp = add("verify", cmd_verify, "certify a pattern-family file")
    sp.add_argument("file")
    sp.add_argument("--depth", type=int, default=None)
    sp = add("present", cmd_present, "simplify a presentation, or generate a random consistent one")
    sp.add_argument("action", choices=["simplify", "random"])
    sp.add_argument("file", nargs="?")
    sp = add("enumerate", cmd_enumerate, "list all trees with a given number of nodes")
    sp.add_argument("--size", type=int, required=True)
    sp = add("gm", cmd_gm, "run the cancellation iteration on X^7 + X = X + X")
    sp.add_argument("--size", type=int, default=0, help="total size bound on input 7-tuples")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    args.json = getattr(args, "json", False)
    args.seed = getattr(args, "seed", 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except BijectionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAIL
    except ValueError as exc:
        # ParseError, PatternError and malformed files all land here
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
