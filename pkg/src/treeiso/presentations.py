"""Finitely presented models of the tree axioms, simplified to free ones.

A presentation is a finite set of generators with ground equations built from
the generators, ``0`` and ``[-,-]``.  Simplification deletes trivial
equations, decomposes ``[a,b] = [c,d]``, eliminates a generator equated to a
term not containing it, and stops on a clash ``0 = [s,t]`` (axiom 1) or an
occurs failure ``a = t(a)`` (axiom 5).  Either the model is free on the
generators that survive or it is inconsistent.
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Union

from .tree import EMPTY, Empty, Node, ParseError, _Reader


@dataclass(frozen=True, slots=True)
class Gen:
    name: str

    def __str__(self) -> str:
        return self.name


Term = Union[Empty, Node, Gen]
Equation = tuple[Term, Term]

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_.]*")


def render_term(t: Term) -> str:
    if isinstance(t, Gen):
        return t.name
    if isinstance(t, Node):
        return f"[{render_term(t.left)},{render_term(t.right)}]"
    return "0"


def term_length(t: Term) -> int:
    if isinstance(t, Node):
        return 1 + term_length(t.left) + term_length(t.right)
    return 1


def occurs(name: str, t: Term) -> bool:
    if isinstance(t, Gen):
        return t.name == name
    if isinstance(t, Node):
        return occurs(name, t.left) or occurs(name, t.right)
    return False


def gens_of(t: Term) -> set[str]:
    if isinstance(t, Gen):
        return {t.name}
    if isinstance(t, Node):
        return gens_of(t.left) | gens_of(t.right)
    return set()


def subst_term(t: Term, s: dict[str, Term]) -> Term:
    if isinstance(t, Gen):
        return s.get(t.name, t)
    if isinstance(t, Node):
        return Node(subst_term(t.left, s), subst_term(t.right, s))
    return t


@dataclass(frozen=True)
class Presentation:
    gens: frozenset[str]
    equations: tuple[Equation, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gens", frozenset(self.gens))
        for s, t in self.equations:
            unknown = (gens_of(s) | gens_of(t)) - self.gens
            if unknown:
                raise ValueError(f"equation mentions unknown generators {sorted(unknown)}")

    def __str__(self) -> str:
        return render_presentation(self)


def render_presentation(p: Presentation) -> str:
    lines = ["gens: " + " ".join(sorted(p.gens))]
    lines += [f"{render_term(s)} = {render_term(t)}" for s, t in p.equations]
    return "\n".join(lines) + "\n"


def _read_term(r: _Reader) -> Term:
    ch = r.peek()
    if ch == "0":
        r.pos += 1
        return EMPTY
    if ch == "[":
        r.pos += 1
        left = _read_term(r)
        r.expect(",")
        right = _read_term(r)
        r.expect("]")
        return Node(left, right)
    m = _NAME.match(r.text, r.pos)
    if m is None:
        raise ParseError(f"expected a term, found {ch or 'end of input'!r}", r.byte_offset())
    r.pos = m.end()
    return Gen(m.group())


def parse_term(text: str) -> Term:
    r = _Reader(text)
    t = _read_term(r)
    r.done()
    return t


def parse_presentation(text: str) -> Presentation:
    gens: set[str] | None = None
    eqs: list[Equation] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("gens:"):
            names = line[5:].split()
            bad = [n for n in names if not _NAME.fullmatch(n)]
            if bad:
                raise ValueError(f"line {lineno}: bad generator names {bad}")
            gens = set(names)
            continue
        lhs, sep, rhs = line.partition("=")
        if not sep:
            raise ValueError(f"line {lineno}: expected 'term = term'")
        try:
            eqs.append((parse_term(lhs), parse_term(rhs)))
        except ParseError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    if gens is None:
        raise ValueError("missing 'gens:' line")
    return Presentation(frozenset(gens), tuple(eqs))


# -- simplification --------------------------------------------------------------------

@dataclass(frozen=True)
class Free:
    basis: frozenset[str]
    elimination: dict[str, Term] = field(hash=False)

    def __str__(self) -> str:
        lines = ["Free", "basis: " + " ".join(sorted(self.basis))]
        lines += [f"{a} = {render_term(t)}" for a, t in sorted(self.elimination.items())]
        return "\n".join(lines)


@dataclass(frozen=True)
class Inconsistent:
    witness: Equation
    axiom: int

    def __str__(self) -> str:
        s, t = self.witness
        return f"Inconsistent (axiom {self.axiom}): {render_term(s)} = {render_term(t)}"


SimplifyResult = Union[Free, Inconsistent]


def _eq_key(eq: Equation) -> tuple:
    s, t = eq
    return (term_length(s) + term_length(t), render_term(s), render_term(t))


def simplify(pres: Presentation, trace: list[tuple[int, int]] | None = None) -> SimplifyResult:
    """Reduce ``pres`` to a free presentation or find an axiom 1 / axiom 5 violation.

    If ``trace`` is given, the termination measure (live generators, total
    equation length) is appended after every step.
    """
    live = set(pres.gens)
    elim: dict[str, Term] = {}
    eqs = list(pres.equations)

    def measure() -> tuple[int, int]:
        return len(live), sum(term_length(s) + term_length(t) for s, t in eqs)

    if trace is not None:
        trace.append(measure())
    while eqs:
        eq = min(eqs, key=_eq_key)
        eqs.remove(eq)
        s, t = eq
        if s == t:
            pass
        elif isinstance(s, Gen) or isinstance(t, Gen):
            a, rhs = (s, t) if isinstance(s, Gen) else (t, s)
            if occurs(a.name, rhs):
                return Inconsistent(eq, 5)
            sub = {a.name: rhs}
            eqs = [(subst_term(x, sub), subst_term(y, sub)) for x, y in eqs]
            elim = {b: subst_term(u, sub) for b, u in elim.items()}
            elim[a.name] = rhs
            live.discard(a.name)
        elif isinstance(s, Node) and isinstance(t, Node):
            eqs += [(s.left, t.left), (s.right, t.right)]
        else:
            return Inconsistent(eq, 1)
        if trace is not None:
            trace.append(measure())
    return Free(frozenset(live), elim)


def validate_free(pres: Presentation, res: SimplifyResult) -> bool:
    """Independent check that ``res`` solves every equation of ``pres`` syntactically."""
    if not isinstance(res, Free):
        return False
    if set(res.basis) | set(res.elimination) != set(pres.gens):
        return False
    if set(res.basis) & set(res.elimination):
        return False
    for t in res.elimination.values():
        if not gens_of(t) <= set(res.basis):
            return False
    return all(
        subst_term(s, res.elimination) == subst_term(t, res.elimination) for s, t in pres.equations
    )


# -- generators for property checks ------------------------------------------------------

def _random_term(rng: random.Random, names: list[str], depth: int) -> Term:
    roll = rng.random()
    if depth == 0 or roll < 0.3:
        if names and rng.random() < 0.7:
            return Gen(rng.choice(names))
        return EMPTY
    return Node(_random_term(rng, names, depth - 1), _random_term(rng, names, depth - 1))


def _fold(rng: random.Random, t: Term, values: dict[Term, list[str]]) -> Term:
    """Replace random subterms by generators denoting them."""
    names = values.get(t)
    if names and rng.random() < 0.5:
        return Gen(rng.choice(names))
    if isinstance(t, Node):
        return Node(_fold(rng, t.left, values), _fold(rng, t.right, values))
    return t


def random_consistent(rng: random.Random, n_basis: int = 3, n_defined: int = 4, n_eqs: int = 6) -> Presentation:
    """A presentation with a known model: defined generators denote terms over the basis."""
    basis = [f"b{i}" for i in range(n_basis)]
    defined = [f"a{i}" for i in range(n_defined)]
    value: dict[str, Term] = {b: Gen(b) for b in basis}
    for a in defined:
        value[a] = _random_term(rng, basis, rng.randint(0, 3))
    denoting: dict[Term, list[str]] = {}
    for name, v in value.items():
        denoting.setdefault(v, []).append(name)
    eqs: list[Equation] = []
    for a in defined:
        if rng.random() < 0.8:
            eqs.append((Gen(a), _fold(rng, value[a], denoting)))
    for _ in range(n_eqs):
        r = _random_term(rng, basis, rng.randint(0, 4))
        eqs.append((_fold(rng, r, denoting), _fold(rng, r, denoting)))
    eqs = [(t, s) if rng.random() < 0.5 else (s, t) for s, t in eqs]
    rng.shuffle(eqs)
    return Presentation(frozenset(basis + defined), tuple(eqs))


def seeded_inconsistent(rng: random.Random) -> tuple[Presentation, int]:
    """A consistent presentation plus one planted clash or occurs cycle; returns the axiom."""
    base = random_consistent(rng)
    names = sorted(base.gens)
    if rng.random() < 0.5:
        s = _random_term(rng, names, 2)
        u, v = _random_term(rng, names, 2), _random_term(rng, names, 2)
        planted: list[Equation] = [(Node(s, EMPTY), Node(s, Node(u, v)))]
        axiom = 1
    else:
        m = rng.randint(1, 3)
        cyc = [f"c{i}" for i in range(m)]
        planted = [
            (Gen(cyc[i]), Node(Gen(cyc[(i + 1) % m]), _random_term(rng, names, 2))) for i in range(m)
        ]
        names += cyc
        axiom = 5
    eqs = list(base.equations) + planted
    rng.shuffle(eqs)
    return Presentation(frozenset(names), tuple(eqs)), axiom
