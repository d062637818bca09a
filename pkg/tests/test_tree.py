import pytest
from hypothesis import given

from treeiso.tree import (
    EMPTY,
    LEAF,
    Empty,
    Node,
    ParseError,
    catalan,
    depth,
    enumerate_trees,
    is_leftward_path,
    leftward_path,
    leftward_path_len,
    parse_tree,
    render_tree,
    size,
    sort_key,
    trees_up_to,
)

from conftest import trees


def naive_size(t):
    return 0 if isinstance(t, Empty) else 1 + naive_size(t.left) + naive_size(t.right)


def naive_depth(t):
    return 0 if isinstance(t, Empty) else 1 + max(naive_depth(t.left), naive_depth(t.right))


def naive_lpl(t):
    return 0 if isinstance(t, Empty) else 1 + naive_lpl(t.left)


def test_render_examples():
    assert render_tree(EMPTY) == "0"
    assert render_tree(LEAF) == "[0,0]"
    assert render_tree(Node(LEAF, EMPTY)) == "[[0,0],0]"


def test_parse_allows_whitespace():
    assert parse_tree(" [ 0 , [0,0] ] ") == Node(EMPTY, LEAF)


@pytest.mark.parametrize(
    "text,offset",
    [("", 0), ("[0,0", 4), ("[0;0]", 2), ("00", 1), ("x", 0), ("[0,0]]", 5)],
)
def test_parse_errors_report_offset(text, offset):
    with pytest.raises(ParseError) as exc:
        parse_tree(text)
    assert exc.value.offset == offset


def test_parse_offset_is_in_bytes():
    with pytest.raises(ParseError) as exc:
        parse_tree("[0,é]")
    assert exc.value.offset == 3


def test_render_parse_roundtrip_exhaustive():
    for t in trees_up_to(10):
        assert parse_tree(render_tree(t)) == t


def test_catalan_recurrence():
    counts = [len(enumerate_trees(n)) for n in range(13)]
    for n in range(1, 13):
        assert counts[n] == sum(counts[i] * counts[n - 1 - i] for i in range(n))
    assert counts == [catalan(n) for n in range(13)]
    assert counts[:5] == [1, 1, 2, 5, 14]


def test_enumeration_is_sorted_and_distinct():
    ts = list(trees_up_to(7))
    assert len(set(ts)) == len(ts)
    assert ts == sorted(ts, key=sort_key)
    assert [render_tree(t) for t in enumerate_trees(2)] == ["[[0,0],0]", "[0,[0,0]]"]


def test_negative_size_rejected():
    with pytest.raises(ValueError):
        enumerate_trees(-1)


def test_metrics_agree_with_naive_recursion():
    for t in trees_up_to(8):
        assert size(t) == naive_size(t)
        assert depth(t) == naive_depth(t)
        assert leftward_path_len(t) == naive_lpl(t)


def test_every_tree_is_empty_xor_a_node():
    for t in trees_up_to(6):
        assert isinstance(t, Empty) != isinstance(t, Node)
        if isinstance(t, Node):
            assert Node(t.left, t.right) == t


def test_leftward_paths():
    assert leftward_path(0) == EMPTY
    assert leftward_path(3) == parse_tree("[[[0,0],0],0]")
    assert all(is_leftward_path(leftward_path(n)) for n in range(6))
    assert not is_leftward_path(parse_tree("[0,[0,0]]"))
    assert sum(is_leftward_path(t) for t in enumerate_trees(5)) == 1


def test_deep_trees_do_not_recurse():
    t = leftward_path(50_000)
    assert size(t) == 50_000
    assert render_tree(t).count("[") == 50_000
    assert hash(t) == hash(leftward_path(50_000))
    assert t == leftward_path(50_000)
    assert t != leftward_path(49_999)


@given(trees)
def test_roundtrip_property(t):
    assert parse_tree(render_tree(t)) == t
    assert size(t) == naive_size(t)


@given(trees, trees)
def test_equality_matches_rendering(s, t):
    assert (s == t) == (render_tree(s) == render_tree(t))
