import cmath
import itertools
import math
import random

import pytest
from hypothesis import given

from treeiso.semiring import (
    Q_POLY,
    T_ROOT,
    Dim,
    NormalForm,
    Poly,
    SixthRoot,
    decide_equiv,
    eval_sixth_root,
    eval_three_element,
    normal_form,
    parse_poly,
    reduce_degree,
    render_poly,
)
from treeiso.tree import ParseError

from conftest import polys, random_poly

X = Poly((1,))
ONE = Poly((0,))


def P(text):
    return parse_poly(text)


@pytest.mark.parametrize(
    "text,exps",
    [
        ("X^7", (7,)),
        ("1 + X^2 + X^4", (4, 2, 0)),
        ("2X^3", (3, 3)),
        ("2*T^3 + X", (3, 3, 1)),
        ("0", ()),
        ("X + X", (1, 1)),
        ("3", (0, 0, 0)),
    ],
)
def test_parse_poly(text, exps):
    assert P(text).exponents == exps


@pytest.mark.parametrize("text", ["X-1", "X^", "1.5", "X^2 +", "+ X", "Y"])
def test_parse_poly_rejects(text):
    with pytest.raises(ParseError):
        parse_poly(text)


def test_render_poly():
    assert render_poly(P("2 + X^2 + X^4")) == "X^4 + X^2 + 2"
    assert render_poly(P("X^3 + X^3")) == "2X^3"
    assert render_poly(Poly()) == "0"
    assert render_poly(X) == "X"


@given(polys)
def test_render_parse_roundtrip(p):
    assert parse_poly(render_poly(p)) == p


def test_arithmetic_examples():
    assert X + ONE == P("1 + X")
    assert P("X^2") * P("X^3") == P("X^5")
    assert P("1 + X") * P("1 + X") == P("1 + 2X + X^2")
    assert Poly() * X == Poly()


def test_poly_rejects_negative():
    with pytest.raises(ValueError):
        Poly((-1,))
    with pytest.raises(ValueError):
        Poly.from_coeffs({1: -2})


@pytest.mark.parametrize(
    "text,nf",
    [
        ("X", (1, 1, 0)),
        ("X^6", (2, 1, 1)),
        ("X^7", (1, 1, 0)),
        ("2 + 2X^2 + 2X^4", (1, 1, 1)),
        ("0", (0, 0, 0)),
        ("X^2", (0, 1, 0)),
        ("X^5", (1, 0, 1)),
    ],
)
def test_normal_form_examples(text, nf):
    assert normal_form(P(text)) == NormalForm(*nf)


def test_nf_string():
    assert str(normal_form(P("X^6"))) == "X^4 + X^2 + 2"


def test_reduce_degree():
    assert [reduce_degree(k) for k in range(15)] == [0, 1, 2, 3, 4, 5, 6, 1, 2, 3, 4, 5, 6, 1, 2]


def all_small_polys(max_deg, max_coeff):
    for cs in itertools.product(range(max_coeff + 1), repeat=max_deg + 1):
        yield Poly.from_coeffs(dict(enumerate(cs)))


def test_normal_form_idempotent_and_canonical():
    rng = random.Random(7)
    for _ in range(3000):
        p = random_poly(rng, 10, 4)
        nf = normal_form(p)
        assert nf.is_canonical()
        assert normal_form(nf.to_poly()) == nf


def test_canonical_forms_are_separated_by_the_oracle():
    # distinct canonical forms must have distinct invariants, or the decision procedure is wrong
    seen = {}
    for a, b, c in itertools.product(range(7), repeat=3):
        nf = NormalForm(a, b, c)
        if not nf.is_canonical():
            continue
        key = (eval_sixth_root(nf.to_poly()), eval_three_element(nf.to_poly()))
        assert key not in seen, (nf, seen.get(key))
        seen[key] = nf


def joint_oracle(p, q):
    return eval_sixth_root(p) == eval_sixth_root(q) and eval_three_element(p) == eval_three_element(q)


def test_joint_oracle_agreement():
    rng = random.Random(2024)
    for _ in range(1000):
        p, q = random_poly(rng), random_poly(rng)
        assert decide_equiv(p, q) == joint_oracle(p, q)


def test_oracle_on_equivalent_pairs():
    rng = random.Random(5)
    for _ in range(300):
        p = random_poly(rng)
        assert decide_equiv(p, normal_form(p).to_poly())
        assert joint_oracle(p, normal_form(p).to_poly())


def test_congruence():
    rng = random.Random(11)
    for _ in range(300):
        p, q, r = (random_poly(rng, 6, 3) for _ in range(3))
        q2 = normal_form(q).to_poly()
        assert decide_equiv(p + q, p + q2)
        assert decide_equiv(p * q, p * q2)
        if decide_equiv(p, q):
            assert decide_equiv(p + r, q + r)
            assert decide_equiv(p * r, q * r)


def test_defining_relation_in_context():
    rng = random.Random(3)
    for _ in range(200):
        c = random_poly(rng, 5, 3)
        k = rng.randint(1, 9)
        lhs = c + Poly((k,))
        rhs = c + Poly((k - 1, k + 1))
        assert decide_equiv(lhs, rhs)


@pytest.mark.parametrize("k", range(1, 31))
def test_power_congruence_mod_six(k):
    assert decide_equiv(Poly((k,)), X) == (k % 6 == 1)


def test_known_inequivalences():
    assert not decide_equiv(P("X^6"), ONE)
    assert not decide_equiv(P("X^2"), X)
    assert decide_equiv(P("X^13"), X)
    for a in range(6):
        assert not decide_equiv(Poly((0,) * a) + Q_POLY, Poly((0,) * a))


def test_sixth_root_examples():
    assert eval_sixth_root(X) == SixthRoot(0, 1)
    assert eval_sixth_root(P("X^7")) == SixthRoot(0, 1)
    assert eval_sixth_root(Q_POLY) == SixthRoot(0, 0)
    assert T_ROOT ** 6 == SixthRoot(1, 0)
    assert T_ROOT * T_ROOT == SixthRoot(-1, 1)


def test_sixth_root_matches_complex_evaluation():
    t = cmath.exp(1j * math.pi / 3)
    rng = random.Random(9)
    for _ in range(200):
        p = random_poly(rng, 12, 4)
        v = eval_sixth_root(p)
        z = sum(t ** k for k in p)
        assert abs(z - (v.u + v.v * t)) < 1e-9


def cardinal(d):
    return {Dim.ZERO: 0, Dim.FIN: 1, Dim.INF: math.inf}[d]


def from_cardinal(x):
    return Dim.ZERO if x == 0 else Dim.INF if x == math.inf else Dim.FIN


def test_three_element_tables_follow_cardinal_arithmetic():
    for a, b in itertools.product(Dim, repeat=2):
        assert a + b == from_cardinal(cardinal(a) + cardinal(b))
        prod = 0 if 0 in (cardinal(a), cardinal(b)) else cardinal(a) * cardinal(b)
        assert a * b == from_cardinal(prod)


def test_three_element_examples():
    assert eval_three_element(P("3")) == Dim.FIN
    assert eval_three_element(Poly()) == Dim.ZERO
    assert eval_three_element(P("3") + Q_POLY) == Dim.INF


def test_both_invariants_respect_the_relation():
    assert eval_sixth_root(X) == eval_sixth_root(P("1 + X^2"))
    assert eval_three_element(X) == eval_three_element(P("1 + X^2"))
