"""Patterns: trees some of whose leaves carry distinct labels.

A pattern shares ``EMPTY`` and ``Node`` with plain trees and adds ``Label``
leaves, so every tree is a label-free pattern.  Substituting ``EMPTY`` for a
label deletes that leaf.  Child labels created by development are named
``<label>.l`` and ``<label>.r``.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Union

from .semiring import Poly
from .tree import EMPTY, Empty, Node, ParseError, Tree, _Reader


@dataclass(frozen=True, slots=True)
class Label:
    name: str

    def __str__(self) -> str:
        return f"?{self.name}"


Pattern = Union[Empty, Node, Label]
Substitution = dict[str, Pattern]

_IDENT = re.compile(r"[A-Za-z0-9.]+")


class PatternError(ValueError):
    pass


# -- text ---------------------------------------------------------------------------

def render_pattern(p: Pattern) -> str:
    if isinstance(p, Label):
        return f"?{p.name}"
    if isinstance(p, Node):
        return f"[{render_pattern(p.left)},{render_pattern(p.right)}]"
    return "0"


def _read_pattern(r: _Reader, seen: set[str]) -> Pattern:
    ch = r.peek()
    if ch == "0":
        r.pos += 1
        return EMPTY
    if ch == "?":
        r.pos += 1
        start = r.byte_offset()
        m = _IDENT.match(r.text, r.pos)
        if m is None:
            raise ParseError("expected a label name after '?'", start)
        name = m.group()
        if name in seen:
            raise PatternError(f"duplicate label ?{name} at offset {start}")
        seen.add(name)
        r.pos = m.end()
        return Label(name)
    if ch == "[":
        r.pos += 1
        left = _read_pattern(r, seen)
        r.expect(",")
        right = _read_pattern(r, seen)
        r.expect("]")
        return Node(left, right)
    raise ParseError(f"expected '0', '?' or '[', found {ch or 'end of input'!r}", r.byte_offset())


def parse_pattern(text: str) -> Pattern:
    r = _Reader(text)
    p = _read_pattern(r, set())
    r.done()
    return p


# -- structure ------------------------------------------------------------------

def labels(p: Pattern) -> list[str]:
    """Label names in left-to-right order."""
    out: list[str] = []
    stack = [p]
    while stack:
        s = stack.pop()
        if isinstance(s, Label):
            out.append(s.name)
        elif isinstance(s, Node):
            stack.append(s.right)
            stack.append(s.left)
    return out


def label_depths(p: Pattern, base: int = 1) -> Iterator[tuple[str, int]]:
    stack = [(p, base)]
    while stack:
        s, d = stack.pop()
        if isinstance(s, Label):
            yield s.name, d
        elif isinstance(s, Node):
            stack.append((s.right, d + 1))
            stack.append((s.left, d + 1))


def pattern_depth(p: Pattern) -> int:
    """Depth of the unlabeled structure; labeled leaves count like empty ones."""
    if isinstance(p, Node):
        return 1 + max(pattern_depth(p.left), pattern_depth(p.right))
    return 0


def is_ground(p: Pattern) -> bool:
    return not labels(p)


def shape_key(p: Pattern) -> str:
    """Rendering with label names erased; equal keys mean equal instance sets."""
    return re.sub(r"\?[A-Za-z0-9.]+", "?", render_pattern(p))


def rename(p: Pattern, mapping: Mapping[str, str]) -> Pattern:
    if isinstance(p, Label):
        return Label(mapping.get(p.name, p.name))
    if isinstance(p, Node):
        return Node(rename(p.left, mapping), rename(p.right, mapping))
    return p


# -- instances ----------------------------------------------------------------------

def substitute(p: Pattern, s: Mapping[str, Pattern], strict: bool = True) -> Pattern:
    """Replace each label by its image; with ``strict`` the bindings must match exactly."""
    if strict:
        names = set(labels(p))
        missing = names - s.keys()
        extra = s.keys() - names
        if missing or extra:
            raise PatternError(
                f"substitution mismatch: missing {sorted(missing)}, extra {sorted(extra)}"
            )
    return _subst(p, s)


def _subst(p: Pattern, s: Mapping[str, Pattern]) -> Pattern:
    if isinstance(p, Label):
        return s.get(p.name, p)
    if isinstance(p, Node):
        left = _subst(p.left, s)
        right = _subst(p.right, s)
        if left is p.left and right is p.right:
            return p
        return Node(left, right)
    return p


def match_instance(p: Pattern, t: Pattern) -> Substitution | None:
    """The unique substitution turning ``p`` into ``t``, or None if ``t`` is no instance."""
    s: Substitution = {}
    stack = [(p, t)]
    while stack:
        a, b = stack.pop()
        if isinstance(a, Label):
            s[a.name] = b
        elif isinstance(a, Node):
            if not isinstance(b, Node):
                return None
            stack.append((a.right, b.right))
            stack.append((a.left, b.left))
        elif not isinstance(b, Empty):
            return None
    return s


# -- development ----------------------------------------------------------------------

def _replace_label(p: Pattern, name: str, new: Pattern) -> Pattern:
    return _subst(p, {name: new})


def develop_once(p: Pattern, name: str) -> tuple[Pattern, Pattern]:
    if name not in labels(p):
        raise PatternError(f"unknown label ?{name}")
    deleted = _replace_label(p, name, EMPTY)
    grown = _replace_label(p, name, Node(Label(f"{name}.l"), Label(f"{name}.r")))
    return deleted, grown


def develop_to_depth(p: Pattern, n: int) -> list[Pattern]:
    """Split ``p`` into members of S_n with disjoint instance sets covering those of ``p``."""
    if pattern_depth(p) > n:
        raise PatternError(f"pattern has unlabeled structure below depth {n}")
    done: list[Pattern] = []
    work = [p]
    while work:
        r = work.pop()
        target = next((name for name, d in label_depths(r) if d <= n), None)
        if target is None:
            done.append(r)
        else:
            work.extend(reversed(develop_once(r, target)))
    return sorted(done, key=shape_key)


def standard_family(n: int, root: str = "a") -> list[Pattern]:
    """S_n built directly: S_0 is one label, S_n = {0} + [S_(n-1), S_(n-1)]."""

    def build(k: int, name: str) -> list[Pattern]:
        if k == 0:
            return [Label(name)]
        lefts = build(k - 1, f"{name}.l")
        rights = build(k - 1, f"{name}.r")
        return [EMPTY] + [Node(a, b) for a in lefts for b in rights]

    return sorted(build(n, root), key=shape_key)


def standard_family_size(n: int) -> int:
    d = 1
    for _ in range(n):
        d = 1 + d * d
    return d


# -- P-patterns ------------------------------------------------------------------

@dataclass(frozen=True)
class PPattern:
    """A tagged k-tuple of patterns addressing the summand (k, tag) of a polynomial.

    A P-tuple of trees is a P-pattern without labels; ``PTuple`` names that use.
    """

    k: int
    tag: int
    components: tuple[Pattern, ...]

    def __post_init__(self):
        if len(self.components) != self.k:
            raise PatternError(f"summand X^{self.k} needs {self.k} components, got {len(self.components)}")
        if self.tag < 1:
            raise PatternError("tags start at 1")

    @property
    def address(self) -> tuple[int, int]:
        return (self.k, self.tag)

    def labels(self) -> list[str]:
        return [name for c in self.components for name in labels(c)]

    def depth(self) -> int:
        return max((pattern_depth(c) for c in self.components), default=0)

    def key(self) -> tuple:
        return (self.k, self.tag, tuple(shape_key(c) for c in self.components))

    def substitute(self, s: Mapping[str, Pattern]) -> PPattern:
        return PPattern(self.k, self.tag, tuple(_subst(c, s) for c in self.components))

    def __str__(self) -> str:
        return render_ppattern(self)


PTuple = PPattern


def ptuple(*trees: Tree, tag: int = 1) -> PPattern:
    return PPattern(len(trees), tag, tuple(trees))


def render_ppattern(p: PPattern) -> str:
    return f"{p.k}:{p.tag}:(" + ",".join(render_pattern(c) for c in p.components) + ")"


_PP_HEAD = re.compile(r"\s*(\d+)\s*:\s*(\d+)\s*:\s*\(")


def parse_ppattern(text: str) -> PPattern:
    m = _PP_HEAD.match(text)
    if m is None:
        raise ParseError("expected 'k:tag:(' header", 0)
    r = _Reader(text)
    r.pos = m.end()
    seen: set[str] = set()
    comps: list[Pattern] = []
    if r.peek() != ")":
        comps.append(_read_pattern(r, seen))
        while r.peek() == ",":
            r.pos += 1
            comps.append(_read_pattern(r, seen))
    r.expect(")")
    r.done()
    try:
        return PPattern(int(m.group(1)), int(m.group(2)), tuple(comps))
    except PatternError as exc:
        raise ParseError(str(exc), 0) from None


def parse_ptuple(text: str) -> PPattern:
    p = parse_ppattern(text)
    if p.labels():
        raise ParseError("a P-tuple may not contain labels", 0)
    return p


def summands(poly: Poly) -> list[tuple[int, int]]:
    """Summand addresses (k, tag) of ``poly`` in canonical order."""
    out = []
    for k, c in sorted(poly.coeffs().items(), reverse=True):
        out.extend((k, tag) for tag in range(1, c + 1))
    return out


def match_ppattern(p: PPattern, t: PPattern) -> Substitution | None:
    if p.address != t.address:
        return None
    s: Substitution = {}
    for a, b in zip(p.components, t.components):
        m = match_instance(a, b)
        if m is None:
            return None
        s.update(m)
    return s


def generic_ppattern(k: int, tag: int, prefix: str = "x") -> PPattern:
    return PPattern(k, tag, tuple(Label(f"{prefix}{j}") for j in range(1, k + 1)))


def develop_ppattern(p: PPattern, n: int) -> list[PPattern]:
    """Componentwise development of a P-pattern to depth ``n``."""
    parts = [develop_to_depth(c, n) for c in p.components]
    return [PPattern(p.k, p.tag, combo) for combo in itertools.product(*parts)]


def standard_family_poly(poly: Poly, n: int) -> list[PPattern]:
    """S_n(P): every P-pattern whose components all lie in S_n."""
    out = []
    for k, tag in summands(poly):
        parts = [standard_family(n, root=f"x{j}") for j in range(1, k + 1)]
        out.extend(PPattern(k, tag, combo) for combo in itertools.product(*parts))
    return out


# -- weights ------------------------------------------------------------------------

def weight(x: Pattern | PPattern | Iterable[Pattern | PPattern]) -> Poly:
    if isinstance(x, PPattern):
        return Poly((len(x.labels()),))
    if isinstance(x, (Empty, Node, Label)):
        return Poly((len(labels(x)),))
    return Poly(tuple(e for item in x for e in weight(item).exponents))


# -- unification ------------------------------------------------------------------

def _fresh_names(taken: set[str]) -> Iterator[str]:
    for i in itertools.count():
        name = f"f{i}"
        if name not in taken:
            yield name


def unify_patterns(
    p: Pattern, q: Pattern, fresh: Iterator[str] | None = None
) -> tuple[Pattern, Substitution, Substitution] | None:
    """Most general common instance of two linear patterns with disjoint labels.

    Returns ``(u, sp, sq)`` with ``substitute(p, sp) == u == substitute(q, sq)``,
    or None when no tree is an instance of both.
    """
    if fresh is None:
        fresh = _fresh_names(set(labels(p)) | set(labels(q)))
    sp: Substitution = {}
    sq: Substitution = {}

    def go(a: Pattern, b: Pattern) -> Pattern | None:
        if isinstance(a, Label) and isinstance(b, Label):
            f = Label(next(fresh))
            sp[a.name] = f
            sq[b.name] = f
            return f
        if isinstance(a, Label):
            sp[a.name] = b
            for name in labels(b):
                sq[name] = Label(name)
            return b
        if isinstance(b, Label):
            sq[b.name] = a
            for name in labels(a):
                sp[name] = Label(name)
            return a
        if isinstance(a, Empty) and isinstance(b, Empty):
            return EMPTY
        if isinstance(a, Node) and isinstance(b, Node):
            left = go(a.left, b.left)
            if left is None:
                return None
            right = go(a.right, b.right)
            if right is None:
                return None
            return Node(left, right)
        return None

    u = go(p, q)
    if u is None:
        return None
    return u, sp, sq
