import random

import pytest

from treeiso.presentations import (
    Free,
    Gen,
    Inconsistent,
    Presentation,
    parse_presentation,
    parse_term,
    random_consistent,
    render_presentation,
    render_term,
    seeded_inconsistent,
    simplify,
    validate_free,
)
from treeiso.tree import EMPTY, Node, ParseError


def pres(text):
    return parse_presentation(text)


def test_free_example():
    res = simplify(pres("gens: a b\na = [b,0]\n"))
    assert res == Free(frozenset({"b"}), {"a": parse_term("[b,0]")})


def test_occurs_example():
    res = simplify(pres("gens: a\na = [a,0]\n"))
    assert isinstance(res, Inconsistent) and res.axiom == 5


def test_clash_example():
    res = simplify(pres("gens: a\n0 = [a,a]\n"))
    assert isinstance(res, Inconsistent) and res.axiom == 1


def test_decompose_then_eliminate():
    res = simplify(pres("gens: a b\n[a,0] = [0,b]\n"))
    assert res == Free(frozenset(), {"a": EMPTY, "b": EMPTY})


def test_chained_occurs_cycle():
    res = simplify(pres("gens: a b\na = [b,0]\nb = [a,0]\n"))
    assert isinstance(res, Inconsistent) and res.axiom == 5


def test_trivial_equations_are_deleted():
    res = simplify(pres("gens: a\n0 = 0\na = a\n"))
    assert res == Free(frozenset({"a"}), {})


def test_generator_equations():
    p = pres("gens: a b c\na = b\nb = c\n")
    res = simplify(p)
    assert isinstance(res, Free) and len(res.basis) == 1 and validate_free(p, res)


def test_validate_free():
    p = pres("gens: a b\na = [b,0]\n")
    assert validate_free(p, simplify(p))
    assert not validate_free(pres("gens: a\na = [0,0]\n"), Free(frozenset(), {"a": EMPTY}))
    assert validate_free(Presentation(frozenset()), simplify(Presentation(frozenset())))
    assert not validate_free(p, Inconsistent((Gen("a"), EMPTY), 1))
    # elimination values must only use basis generators
    assert not validate_free(pres("gens: a b\n"), Free(frozenset({"a"}), {"b": Gen("b")}))


def test_text_format():
    p = pres("# comment\ngens: a b\n[a, 0] = b   # trailing\n")
    assert p.equations == ((Node(Gen("a"), EMPTY), Gen("b")),)
    assert pres(render_presentation(p)) == p
    assert render_term(parse_term("[x.1,[0,y_2]]")) == "[x.1,[0,y_2]]"


@pytest.mark.parametrize(
    "text",
    ["a = b\n", "gens: a\na = c\n", "gens: a\na b\n", "gens: a\n[a,0 = 0\n", "gens: 1a\n"],
)
def test_text_errors(text):
    with pytest.raises(ValueError):
        parse_presentation(text)


def test_term_parse_error_offset():
    with pytest.raises(ParseError) as exc:
        parse_term("[a;0]")
    assert exc.value.offset == 2


def test_measure_strictly_decreases():
    rng = random.Random(17)
    for _ in range(200):
        p = random_consistent(rng)
        trace = []
        simplify(p, trace)
        assert all(a > b for a, b in zip(trace, trace[1:]))


def test_random_consistent_presentations_are_free():
    rng = random.Random(99)
    for _ in range(500):
        p = random_consistent(rng)
        res = simplify(p)
        assert isinstance(res, Free)
        assert validate_free(p, res)


def test_seeded_inconsistencies_are_detected():
    rng = random.Random(100)
    axioms = set()
    for _ in range(300):
        p, axiom = seeded_inconsistent(rng)
        res = simplify(p)
        assert isinstance(res, Inconsistent) and res.axiom == axiom
        axioms.add(axiom)
    assert axioms == {1, 5}


def test_result_is_always_free_or_inconsistent():
    rng = random.Random(5)
    for _ in range(200):
        p, _ = seeded_inconsistent(rng) if rng.random() < 0.5 else (random_consistent(rng), None)
        assert isinstance(simplify(p), (Free, Inconsistent))


def test_unknown_generators_rejected():
    with pytest.raises(ValueError):
        Presentation(frozenset({"a"}), ((Gen("b"), EMPTY),))
