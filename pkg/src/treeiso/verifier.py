"""Exact finite certification of very explicit functions.

``check_partition`` decides whether a family of P-patterns has every P-tuple
as an instance of exactly one member.  It develops a generic pattern only at
labels some member actually inspects, so the work is bounded by the family
rather than by |S_n(P)|; ``check_partition_materialized`` is the literal
comparison against S_n(P) and is kept as a cross-check for small cases.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .bijections import VEFunction, ptuples
from .patterns import (
    Label,
    Pattern,
    PPattern,
    develop_ppattern,
    generic_ppattern,
    render_ppattern,
    standard_family_poly,
    summands,
    weight,
)
from .semiring import Poly, decide_equiv, normal_form, render_poly
from .tree import EMPTY, Empty, Node


@dataclass
class VerificationReport:
    passed: bool
    stage: str = ""
    counterexample: object = None
    detail: str = ""
    checks: list[str] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict:
        ce = self.counterexample
        if isinstance(ce, PPattern):
            ce = render_ppattern(ce)
        elif isinstance(ce, tuple):
            ce = [render_ppattern(c) if isinstance(c, PPattern) else str(c) for c in ce]
        elif ce is not None:
            ce = str(ce)
        return {
            "passed": self.passed,
            "stage": self.stage,
            "counterexample": ce,
            "detail": self.detail,
            "checks": list(self.checks),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def __str__(self) -> str:
        if self.passed:
            return "PASS" + (f" ({', '.join(self.checks)})" if self.checks else "")
        out = f"FAIL at {self.stage}: {self.detail}"
        if self.counterexample is not None:
            out += f"\ncounterexample: {self.to_dict()['counterexample']}"
        return out


def _fail(stage: str, detail: str, counterexample=None) -> VerificationReport:
    return VerificationReport(False, stage, counterexample, detail)


def _zeroed(u: PPattern) -> PPattern:
    return u.substitute({name: EMPTY for name in u.labels()})


def family_depth(family: Iterable[PPattern]) -> int:
    return max((p.depth() for p in family), default=0)


def _partition_summand(
    k: int, tag: int, members: list[tuple[int, PPattern]]
) -> tuple[str, PPattern, tuple[int, ...]] | None:
    """None if ``members`` partition summand (k, tag); else (kind, witness, member indices)."""
    u0 = generic_ppattern(k, tag)
    start = [(i, dict(zip(u0.labels(), p.components))) for i, p in members]
    stack: list[tuple[PPattern, list[tuple[int, dict[str, Pattern]]]]] = [(u0, start)]
    while stack:
        u, cands = stack.pop()
        if not cands:
            return "gap", _zeroed(u), ()
        pivot = next(
            (name for name in u.labels() if any(not isinstance(b[name], Label) for _, b in cands)),
            None,
        )
        if pivot is None:
            if len(cands) == 1:
                continue
            return "overlap", _zeroed(u), tuple(i for i, _ in cands)
        left, right = f"{pivot}.l", f"{pivot}.r"
        u_del = u.substitute({pivot: EMPTY})
        u_grow = u.substitute({pivot: Node(Label(left), Label(right))})
        del_c, grow_c = [], []
        for i, b in cands:
            sub = b[pivot]
            rest = {n: v for n, v in b.items() if n != pivot}
            if isinstance(sub, Label):
                del_c.append((i, rest))
                grow_c.append((i, {**rest, left: Label(left), right: Label(right)}))
            elif isinstance(sub, Empty):
                del_c.append((i, rest))
            else:
                grow_c.append((i, {**rest, left: sub.left, right: sub.right}))
        stack.append((u_grow, grow_c))
        stack.append((u_del, del_c))
    return None


def check_partition(family: Sequence[PPattern], P: Poly, n: int | None = None) -> VerificationReport:
    """Exact: does every P-tuple match exactly one member of ``family``?"""
    depth = family_depth(family)
    if n is None:
        n = depth + 1
    if depth > n:
        raise ValueError(f"development depth {n} is below the family depth {depth}")
    addresses = set(summands(P))
    by_addr: dict[tuple[int, int], list[tuple[int, PPattern]]] = {a: [] for a in addresses}
    for i, p in enumerate(family):
        if p.address not in addresses:
            return _fail("summand", f"member {i} addresses X^{p.k} tag {p.tag}, absent from {render_poly(P)}", p)
        by_addr[p.address].append((i, p))
    for k, tag in sorted(addresses, reverse=True):
        res = _partition_summand(k, tag, by_addr[(k, tag)])
        if res is not None:
            kind, witness, idx = res
            detail = "no member matches" if kind == "gap" else f"members {list(idx)} all match"
            return _fail(kind, detail, witness)
    return VerificationReport(True, checks=[f"partition@{n}"])


def check_partition_materialized(family: Sequence[PPattern], P: Poly, n: int) -> VerificationReport:
    """Develop every member to depth ``n`` and compare with S_n(P) as sets of shapes."""
    depth = family_depth(family)
    if depth > n:
        raise ValueError(f"development depth {n} is below the family depth {depth}")
    seen: dict[tuple, int] = {}
    for i, p in enumerate(family):
        for d in develop_ppattern(p, n):
            key = d.key()
            if key in seen:
                return _fail("overlap", f"members {seen[key]} and {i} share a development", _zeroed(d))
            seen[key] = i
    expected = {s.key(): s for s in standard_family_poly(P, n)}
    extra = seen.keys() - expected.keys()
    if extra:
        return _fail("summand", "development outside S_n(P)", next(iter(extra)))
    missing = expected.keys() - seen.keys()
    if missing:
        return _fail("gap", "member of S_n(P) not covered", _zeroed(expected[min(missing)]))
    return VerificationReport(True, checks=[f"partition@{n}"])


def check_bijection_family(f: VEFunction, n: int | None = None) -> VerificationReport:
    """Both sides partition and each pair carries one label set.

    ``n`` bounds the inspection depth of the domain side; codomain patterns
    only place the copied subtrees and are developed as deep as they reach.
    """
    depth = family_depth(f.domain())
    if n is None:
        n = depth + 1
    if depth > n:
        raise ValueError(f"development depth {n} is below the family depth {depth}")
    n_cod = max(n, family_depth(f.codomain()))
    for i, (dom, cod) in enumerate(f.pairs):
        if sorted(dom.labels()) != sorted(cod.labels()):
            return _fail("labels", f"pair {i} has different label sets", (dom, cod))
    dom = check_partition(f.domain(), f.P, n)
    if not dom:
        dom.stage = f"domain {dom.stage}"
        return dom
    cod = check_partition(f.codomain(), f.Q, n_cod)
    if not cod:
        cod.stage = f"codomain {cod.stage}"
        return cod
    return VerificationReport(True, checks=[f"domain partition@{n}", f"codomain partition@{n_cod}", "labels"])


def family_weight_check(f: VEFunction) -> VerificationReport:
    if not decide_equiv(f.P, f.Q):
        return _fail(
            "weight",
            f"{render_poly(f.P)} and {render_poly(f.Q)} differ in the quotient "
            f"({normal_form(f.P)} vs {normal_form(f.Q)})",
        )
    wd, wc = weight(f.domain()), weight(f.codomain())
    if not decide_equiv(wd, f.P):
        return _fail("domain weight", f"{render_poly(wd)} is not equivalent to {render_poly(f.P)}")
    if not decide_equiv(wc, f.Q):
        return _fail("codomain weight", f"{render_poly(wc)} is not equivalent to {render_poly(f.Q)}")
    return VerificationReport(True, checks=["domain weight", "codomain weight", "P ~ Q"])


def exhaustive_roundtrip(
    f: Callable[[PPattern], PPattern],
    g: Callable[[PPattern], PPattern],
    P: Poly,
    Q: Poly,
    size_bound: int,
) -> VerificationReport:
    """g(f(x)) == x on P-tuples and f(g(y)) == y on Q-tuples up to total size ``size_bound``."""
    count = 0
    for stage, src, there, back in (("forward", P, f, g), ("backward", Q, g, f)):
        for x in ptuples(src, size_bound):
            count += 1
            try:
                y = there(x)
                ok = back(y) == x
            except (ValueError, AttributeError) as exc:
                return _fail(f"roundtrip {stage}", f"raised {exc!r}", x)
            if not ok:
                return _fail(f"roundtrip {stage}", "does not return to the input", x)
    return VerificationReport(True, checks=[f"{count} roundtrips"])
