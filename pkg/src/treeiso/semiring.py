"""Polynomials over the naturals and the quotient semiring N[X]/(X = 1 + X^2).

Elements of N[X] are stored as multisets of exponents (a non-increasing tuple),
so every occurrence of a monomial has a position.  The quotient is decided by
the canonical form ``a + b X^2 + c X^4`` with either a zero coefficient or
``a >= b == c == 1``, and cross-checked by two independent invariants: exact
evaluation at a primitive sixth root of unity and evaluation in the
three-element semiring {0, finite, infinite}.
"""
from __future__ import annotations

import enum
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

from .tree import ParseError


@dataclass(frozen=True)
class Poly:
    exponents: tuple[int, ...] = ()

    def __post_init__(self):
        exps = tuple(sorted(self.exponents, reverse=True))
        if any(not isinstance(e, int) or e < 0 for e in exps):
            raise ValueError(f"exponents must be natural numbers: {self.exponents!r}")
        object.__setattr__(self, "exponents", exps)

    @classmethod
    def from_coeffs(cls, coeffs: Mapping[int, int] | Iterable[int]) -> Poly:
        if not isinstance(coeffs, Mapping):
            coeffs = dict(enumerate(coeffs))
        exps: list[int] = []
        for k, c in coeffs.items():
            if c < 0:
                raise ValueError("coefficients must be non-negative")
            exps.extend([k] * c)
        return cls(tuple(exps))

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> Poly:
        return cls((k,) * c)

    def coeffs(self) -> dict[int, int]:
        return dict(Counter(self.exponents))

    def coeff(self, k: int) -> int:
        return self.exponents.count(k)

    @property
    def degree(self) -> int:
        return self.exponents[0] if self.exponents else -1

    def __len__(self) -> int:
        return len(self.exponents)

    def __iter__(self):
        return iter(self.exponents)

    def __getitem__(self, i: int) -> int:
        return self.exponents[i]

    def __add__(self, other: Poly) -> Poly:
        return add(self, other)

    def __mul__(self, other: Poly) -> Poly:
        return mul(self, other)

    def __str__(self) -> str:
        return render_poly(self)


def add(p: Poly, q: Poly) -> Poly:
    return Poly(p.exponents + q.exponents)


def mul(p: Poly, q: Poly) -> Poly:
    out: Counter[int] = Counter()
    for i, a in p.coeffs().items():
        for j, b in q.coeffs().items():
            out[i + j] += a * b
    return Poly.from_coeffs(out)


def render_poly(p: Poly) -> str:
    coeffs = p.coeffs()
    if not coeffs:
        return "0"
    terms = []
    for k in sorted(coeffs, reverse=True):
        c = coeffs[k]
        if k == 0:
            terms.append(str(c))
            continue
        mono = "X" if k == 1 else f"X^{k}"
        terms.append(mono if c == 1 else f"{c}{mono}")
    return " + ".join(terms)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>[XT])|(?P<op>[+*^])|(?P<bad>\S))")


def parse_poly(text: str) -> Poly:
    """Parse ``c``, ``X``, ``X^k`` and ``c X^k`` / ``c*X^k`` terms joined by ``+``."""
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    stripped = text.rstrip()
    while pos < len(stripped):
        m = _TOKEN.match(stripped, pos)
        kind = m.lastgroup
        start = m.start(kind)
        if kind == "bad":
            raise ParseError(f"unexpected character {m.group(kind)!r}", start)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(stripped)))

    i = 0

    def take(kind: str, value: str | None = None) -> tuple[str, str, int] | None:
        nonlocal i
        tok = tokens[i]
        if tok[0] == kind and (value is None or tok[1] == value):
            i += 1
            return tok
        return None

    def fail(what: str):
        tok = tokens[i]
        raise ParseError(f"expected {what}, found {tok[1] or 'end of input'!r}", tok[2])

    coeffs: Counter[int] = Counter()
    while True:
        coef = 1
        num = take("num")
        if num is not None:
            coef = int(num[1])
            take("op", "*")
            if take("var") is None:
                if tokens[i - 1][1] == "*":
                    fail("X")
                coeffs[0] += coef
                if take("op", "+") is None:
                    break
                continue
        elif take("var") is None:
            fail("a term")
        exp = 1
        if take("op", "^") is not None:
            e = take("num")
            if e is None:
                fail("an exponent")
            exp = int(e[1])
        coeffs[exp] += coef
        if take("op", "+") is None:
            break
    if take("end") is None:
        fail("'+' or end of input")
    return Poly.from_coeffs(coeffs)


# -- the quotient semiring -------------------------------------------------------

@dataclass(frozen=True)
class NormalForm:
    """``a + b X^2 + c X^4``; canonical iff some coefficient is 0 or a >= b == c == 1."""

    a: int
    b: int
    c: int

    def is_canonical(self) -> bool:
        return min(self.a, self.b, self.c) == 0 or (self.b == 1 and self.c == 1 and self.a >= 1)

    def to_poly(self) -> Poly:
        return Poly.from_coeffs({0: self.a, 2: self.b, 4: self.c})

    def __str__(self) -> str:
        return render_poly(self.to_poly())


Q_POLY = Poly((4, 2, 0))


def reduce_degree(k: int) -> int:
    """Exponent after repeatedly applying X^k -> X^(k-6) while k >= 7."""
    return k if k < 7 else (k - 1) % 6 + 1


def normal_form(p: Poly) -> NormalForm:
    c = [0] * 7
    for k, n in p.coeffs().items():
        c[reduce_degree(k)] += n
    # X^6 = X^5 + X
    c[5] += c[6]
    c[1] += c[6]
    # X^5 = 1 + X^4
    c[0] += c[5]
    c[4] += c[5]
    # X^3 = X^2 + X^4, X = 1 + X^2
    c[2] += c[3]
    c[4] += c[3]
    c[0] += c[1]
    c[2] += c[1]
    a, b, d = c[0], c[2], c[4]
    # delete copies of 1 + X^2 + X^4 while a positive power remains as catalyst
    if min(a, b, d) >= 1 and max(b, d) >= 2:
        j = min(a, b, d, max(b, d) - 1)
        a, b, d = a - j, b - j, d - j
    return NormalForm(a, b, d)


def decide_equiv(p: Poly, q: Poly) -> bool:
    return normal_form(p) == normal_form(q)


# -- invariants -------------------------------------------------------------------

@dataclass(frozen=True)
class SixthRoot:
    """Exact ``u + v t`` with ``t^2 = t - 1``, i.e. t = 1/2 + i sqrt(3)/2."""

    u: int
    v: int

    def __add__(self, other: SixthRoot) -> SixthRoot:
        return SixthRoot(self.u + other.u, self.v + other.v)

    def __mul__(self, other: SixthRoot) -> SixthRoot:
        u, v, x, y = self.u, self.v, other.u, other.v
        return SixthRoot(u * x - v * y, u * y + v * x + v * y)

    def __pow__(self, n: int) -> SixthRoot:
        result, base = SixthRoot(1, 0), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result


T_ROOT = SixthRoot(0, 1)


def eval_sixth_root(p: Poly) -> SixthRoot:
    total = SixthRoot(0, 0)
    for k, n in p.coeffs().items():
        total = total + SixthRoot(n, 0) * T_ROOT ** k
    return total


class Dim(enum.Enum):
    """The three-element semiring {0, finite non-zero, countably infinite}."""

    ZERO = 0
    FIN = 1
    INF = 2

    def __add__(self, other: Dim) -> Dim:
        return Dim(max(self.value, other.value))

    def __mul__(self, other: Dim) -> Dim:
        if Dim.ZERO in (self, other):
            return Dim.ZERO
        return Dim(max(self.value, other.value))

    @classmethod
    def of_int(cls, n: int) -> Dim:
        return cls.FIN if n > 0 else cls.ZERO


def eval_three_element(p: Poly) -> Dim:
    total = Dim.ZERO
    for k, n in p.coeffs().items():
        term = Dim.of_int(n)
        if k > 0:
            term = term * Dim.INF
        total = total + term
    return total
