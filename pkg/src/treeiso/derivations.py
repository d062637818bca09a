"""Ground equational derivations in N[X]/(X = 1 + X^2).

A derivation is a start polynomial plus a list of elementary moves, each one
use of ``X^(m+1) = X^m + X^(m+2)`` in either direction.  Polynomials are kept
as non-increasing exponent lists; after a move the surviving occurrences keep
their relative order and the new ones are appended, then the list is stably
re-sorted.  Positions therefore address individual occurrences, which is what
bijection compilation needs.
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Iterable, Union

from .semiring import Poly, decide_equiv, normal_form, parse_poly, render_poly


class MoveError(ValueError):
    pass


@dataclass(frozen=True)
class Split:
    """X^(m+1) at ``pos`` becomes X^m + X^(m+2)."""

    pos: int

    def __str__(self) -> str:
        return f"split {self.pos}"


@dataclass(frozen=True)
class Merge:
    """X^m at ``low`` and X^(m+2) at ``high`` become X^(m+1)."""

    low: int
    high: int

    def __str__(self) -> str:
        return f"merge {self.low} {self.high}"


Move = Union[Split, Merge]


def _check_pos(p: Poly, i: int) -> None:
    if not 0 <= i < len(p):
        raise MoveError(f"position {i} out of range for {render_poly(p)}")


def move_effect(p: Poly, m: Move) -> tuple[list[int], list[int]]:
    """Validate ``m`` at ``p``; return (consumed positions, created exponents)."""
    if isinstance(m, Split):
        _check_pos(p, m.pos)
        e = p[m.pos]
        if e == 0:
            raise MoveError("cannot split a constant term")
        return [m.pos], [e - 1, e + 1]
    _check_pos(p, m.low)
    _check_pos(p, m.high)
    if m.low == m.high:
        raise MoveError("merge needs two distinct occurrences")
    lo, hi = p[m.low], p[m.high]
    if hi - lo != 2:
        raise MoveError(f"merge needs exponents differing by 2, got {lo} and {hi}")
    return [m.low, m.high], [lo + 1]


@lru_cache(maxsize=4096)
def reindex(p: Poly, m: Move) -> tuple[Poly, dict[int, int], list[int]]:
    """Apply ``m``; return the new stage, old->new positions of untouched
    occurrences, and the new positions of the created occurrences.

    Results are cached and shared; callers must not mutate them."""
    consumed, created = move_effect(p, m)
    items = [(e, ("old", i)) for i, e in enumerate(p) if i not in consumed]
    items += [(e, ("new", j)) for j, e in enumerate(created)]
    items.sort(key=lambda it: -it[0])
    old_to_new: dict[int, int] = {}
    new_pos = [0] * len(created)
    for pos, (_, (kind, idx)) in enumerate(items):
        if kind == "old":
            old_to_new[idx] = pos
        else:
            new_pos[idx] = pos
    return Poly(tuple(e for e, _ in items)), old_to_new, new_pos


def apply_move(p: Poly, m: Move) -> Poly:
    return reindex(p, m)[0]


def invert_move(p: Poly, m: Move) -> Move:
    """The move at ``apply_move(p, m)`` that undoes ``m`` at the polynomial level."""
    _, _, created = reindex(p, m)
    if isinstance(m, Split):
        return Merge(created[0], created[1])
    return Split(created[0])


@dataclass(frozen=True)
class MacroStep:
    kind: str  # "introduce", "delete" or "degree_reduce"
    k: int
    catalyst: int
    start: int
    stop: int

    def __str__(self) -> str:
        return f"{self.kind}(k={self.k}, catalyst=X^{self.catalyst}) moves {self.start}..{self.stop - 1}"


@dataclass(frozen=True)
class Derivation:
    start: Poly
    moves: tuple[Move, ...] = ()
    macros: tuple[MacroStep, ...] = field(default=(), compare=False)

    def stages(self) -> list[Poly]:
        out = [self.start]
        for m in self.moves:
            out.append(apply_move(out[-1], m))
        return out

    @property
    def end(self) -> Poly:
        p = self.start
        for m in self.moves:
            p = apply_move(p, m)
        return p

    def __len__(self) -> int:
        return len(self.moves)

    def then(self, other: Derivation) -> Derivation:
        if self.end != other.start:
            raise MoveError("derivations do not compose")
        shift = len(self.moves)
        macros = self.macros + tuple(
            MacroStep(s.kind, s.k, s.catalyst, s.start + shift, s.stop + shift) for s in other.macros
        )
        return Derivation(self.start, self.moves + other.moves, macros)

    def reversed(self) -> Derivation:
        stages = self.stages()
        inv = [invert_move(stages[i], m) for i, m in enumerate(self.moves)]
        return Derivation(stages[-1], tuple(reversed(inv)))

    def __str__(self) -> str:
        return render_derivation(self)


def check_derivation(d: Derivation, end: Poly | None = None) -> bool:
    p = d.start
    try:
        for m in d.moves:
            p = apply_move(p, m)
    except MoveError:
        return False
    return end is None or p == end


def render_derivation(d: Derivation) -> str:
    lines = [f"start: {render_poly(d.start)}"]
    lines += [str(m) for m in d.moves]
    return "\n".join(lines) + "\n"


def parse_derivation(text: str) -> Derivation:
    start: Poly | None = None
    moves: list[Move] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("start:"):
            if start is not None:
                raise ValueError(f"line {lineno}: duplicate start")
            start = parse_poly(line[len("start:"):])
            continue
        parts = line.split()
        try:
            if parts[0] == "split" and len(parts) == 2:
                moves.append(Split(int(parts[1])))
            elif parts[0] == "merge" and len(parts) == 3:
                moves.append(Merge(int(parts[1]), int(parts[2])))
            else:
                raise ValueError
        except ValueError:
            raise ValueError(f"line {lineno}: bad move {line!r}") from None
    if start is None:
        raise ValueError("missing 'start:' line")
    return Derivation(start, tuple(moves))


# -- building derivations with tracked occurrences ---------------------------------------

class _Builder:
    """Records moves while tracking occurrences by identity instead of position."""

    def __init__(self, p: Poly):
        self._ids = itertools.count()
        self.items: list[tuple[int, int]] = [(e, next(self._ids)) for e in p]
        self.start = p
        self.moves: list[Move] = []
        self.macros: list[MacroStep] = []

    def poly(self) -> Poly:
        return Poly(tuple(e for e, _ in self.items))

    def pos(self, ident: int) -> int:
        for i, (_, j) in enumerate(self.items):
            if j == ident:
                return i
        raise MoveError(f"occurrence {ident} is gone")

    def exp(self, ident: int) -> int:
        return self.items[self.pos(ident)][0]

    def find(self, e: int, exclude: Iterable[int] = ()) -> int:
        exclude = set(exclude)
        for ex, ident in self.items:
            if ex == e and ident not in exclude:
                return ident
        raise MoveError(f"X^{e} not present in {render_poly(self.poly())}")

    def _commit(self, move: Move, consumed: list[int], created: list[int]) -> list[int]:
        self.moves.append(move)
        keep = [it for it in self.items if it[1] not in consumed]
        fresh = [(e, next(self._ids)) for e in created]
        self.items = sorted(keep + fresh, key=lambda it: -it[0])
        return [ident for _, ident in fresh]

    def split(self, ident: int) -> tuple[int, int]:
        e = self.exp(ident)
        if e == 0:
            raise MoveError("cannot split a constant term")
        low, high = self._commit(Split(self.pos(ident)), [ident], [e - 1, e + 1])
        return low, high

    def merge(self, low: int, high: int) -> int:
        if self.exp(high) - self.exp(low) != 2:
            raise MoveError("merge needs exponents differing by 2")
        e = self.exp(low)
        (new,) = self._commit(Merge(self.pos(low), self.pos(high)), [low, high], [e + 1])
        return new

    def derivation(self) -> Derivation:
        return Derivation(self.start, tuple(self.moves), tuple(self.macros))


def _walk_target(k: int, r: int) -> int:
    if r in (k + 1, k + 2):
        return r
    return k + 1 if r < k + 1 else k + 2


def _walk(b: _Builder, cat: int, target: int) -> tuple[int, list[int]]:
    """Split the catalyst toward ``target``; return its final piece and the leftovers."""
    leftovers = []
    while b.exp(cat) != target:
        low, high = b.split(cat)
        if b.exp(low) >= target:
            cat, other = low, high
        else:
            cat, other = high, low
        leftovers.append(other)
    return cat, leftovers


def _unwalk(b: _Builder, cat: int, leftovers: list[int]) -> int:
    for other in reversed(leftovers):
        if b.exp(other) < b.exp(cat):
            cat = b.merge(other, cat)
        else:
            cat = b.merge(cat, other)
    return cat


def _core(b: _Builder, k: int, cat: int, delete: tuple[int, int] | None) -> tuple[int, tuple[int, int] | None]:
    """Two-move catalyst step; returns the restored catalyst and any introduced pair."""
    c = b.exp(cat)
    if delete is not None:
        hi, lo = delete
        if c == k + 1:
            mid = b.merge(cat, hi)  # X^(k+1) + X^(k+3) -> X^(k+2)
            return b.merge(lo, mid), None
        mid = b.merge(lo, cat)  # X^k + X^(k+2) -> X^(k+1)
        return b.merge(mid, hi), None
    if c == k + 1:
        lo, mid = b.split(cat)  # X^(k+1) -> X^k + X^(k+2)
        new_cat, hi = b.split(mid)
        return new_cat, (hi, lo)
    mid, hi = b.split(cat)  # X^(k+2) -> X^(k+1) + X^(k+3)
    lo, new_cat = b.split(mid)
    return new_cat, (hi, lo)


def _catalyst(b: _Builder, k: int, cat: int, delete: tuple[int, int] | None):
    r = b.exp(cat)
    if r < 1:
        raise MoveError("the constant 1 cannot serve as a catalyst")
    first = len(b.moves)
    piece, leftovers = _walk(b, cat, _walk_target(k, r))
    piece, introduced = _core(b, k, piece, delete)
    restored = _unwalk(b, piece, leftovers)
    kind = "delete" if delete is not None else "introduce"
    b.macros.append(MacroStep(kind, k, r, first, len(b.moves)))
    return restored, introduced


def catalyst_core(p: Poly, k: int, catalyst: int) -> Derivation:
    """Delete X^(k+3) + X^k using X^catalyst, which must be X^(k+1) or X^(k+2)."""
    if catalyst not in (k + 1, k + 2):
        raise MoveError("core catalyst must be X^(k+1) or X^(k+2)")
    b = _Builder(p)
    cat = b.find(catalyst)
    hi = b.find(k + 3, exclude=[cat])
    lo = b.find(k, exclude=[cat, hi])
    _core(b, k, cat, (hi, lo))
    return b.derivation()


def catalyst_delete(p: Poly, k: int, r: int) -> Derivation:
    """Delete X^(k+3) + X^k using any positive power X^r present as a catalyst."""
    if r < 1:
        raise MoveError("the constant 1 cannot serve as a catalyst")
    b = _Builder(p)
    hi = b.find(k + 3)
    lo = b.find(k, exclude=[hi])
    cat = b.find(r, exclude=[hi, lo])
    _catalyst(b, k, cat, (hi, lo))
    return b.derivation()


def catalyst_introduce(p: Poly, k: int, r: int) -> Derivation:
    """Introduce X^(k+3) + X^k using any positive power X^r present as a catalyst."""
    if r < 1:
        raise MoveError("the constant 1 cannot serve as a catalyst")
    b = _Builder(p)
    _catalyst(b, k, b.find(r), None)
    return b.derivation()


def _degree_reduce(b: _Builder, ident: int) -> int:
    k = b.exp(ident)
    if k < 7:
        raise MoveError(f"degree reduction needs an exponent >= 7, got {k}")
    first = len(b.moves)
    cat, (mid, low) = _catalyst(b, k - 6, ident, None)
    low, _ = _catalyst(b, k - 3, low, (cat, mid))
    b.macros.append(MacroStep("degree_reduce", k, k, first, len(b.moves)))
    return low


def degree_reduce(p: Poly, pos: int) -> Derivation:
    """Turn the X^k at ``pos`` (k >= 7) into X^(k-6)."""
    _check_pos(p, pos)
    b = _Builder(p)
    _degree_reduce(b, b.items[pos][1])
    return b.derivation()


def seven_to_one() -> Derivation:
    """The canned X^7 = X derivation: introduce X^4 + X, then delete X^7 + X^4."""
    return degree_reduce(Poly((7,)), 0)


def four_step_display() -> Derivation:
    """X^7 + X^5 + X^4 + X^3 = ... = X^5 + X^4 + X^3 + X in four moves."""
    b = _Builder(Poly((7, 5, 4, 3)))
    seven, five, four, three = (ident for _, ident in b.items)
    six = b.merge(five, seven)
    b.merge(four, six)
    two, _ = b.split(three)
    b.split(two)
    return b.derivation()


def normalize_trace(p: Poly) -> Derivation:
    """Moves carrying ``p`` to ``normal_form(p)``, following the canonical reduction order."""
    b = _Builder(p)

    def present(e: int) -> int | None:
        return next((ident for ex, ident in b.items if ex == e), None)

    while b.items and b.items[0][0] >= 7:
        _degree_reduce(b, b.items[0][1])
    while (six := present(6)) is not None:
        _, seven = b.split(six)
        _degree_reduce(b, seven)
    while (five := present(5)) is not None:
        cat, (three, _) = _catalyst(b, 0, five, None)
        b.merge(three, cat)
    while (odd := next((i for e, i in b.items if e in (1, 3)), None)) is not None:
        b.split(odd)
    while True:
        c = b.poly().coeffs()
        a, bb, cc = c.get(0, 0), c.get(2, 0), c.get(4, 0)
        if not (min(a, bb, cc) >= 1 and max(bb, cc) >= 2):
            break
        # 1 + X^2 + X^4 = X + X^4, which a remaining positive power deletes
        four = b.find(4)
        one = b.merge(b.find(0), b.find(2))
        cat = b.find(2) if bb >= 2 else b.find(4, exclude=[four])
        _catalyst(b, 1, cat, (four, one))
    d = b.derivation()
    assert d.end == normal_form(p).to_poly()
    return d


def derive_equivalence(p: Poly, q: Poly) -> Derivation | None:
    """A derivation from ``p`` to ``q`` through their common normal form, or None."""
    if not decide_equiv(p, q):
        return None
    if p == q:
        return Derivation(p)
    return normalize_trace(p).then(normalize_trace(q).reversed())
