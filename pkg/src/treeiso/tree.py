"""Finite binary trees: the initial algebra of ``0`` and ``[-,-]``."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Union


class ParseError(ValueError):
    """Raised on malformed input text; ``offset`` is the byte position."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


@dataclass(frozen=True, slots=True)
class Empty:
    def __repr__(self) -> str:
        return "EMPTY"

    def __str__(self) -> str:
        return "0"

    def __lt__(self, other: Tree) -> bool:
        return sort_key(self) < sort_key(other)


@dataclass(frozen=True, slots=True, eq=False)
class Node:
    left: Tree
    right: Tree
    _hash: int = field(init=False, repr=False)

    def __post_init__(self):
        # cached so hashing deep trees stays O(1)
        object.__setattr__(self, "_hash", hash((self.left, self.right)))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Node):
            return False
        stack = [(self, other)]
        while stack:
            a, b = stack.pop()
            if a is b:
                continue
            if isinstance(a, Node) != isinstance(b, Node):
                return False
            if isinstance(a, Node):
                if a._hash != b._hash:
                    return False
                stack.append((a.right, b.right))
                stack.append((a.left, b.left))
            elif a != b:
                return False
        return True

    def __str__(self) -> str:
        return render_tree(self)

    def __lt__(self, other: Tree) -> bool:
        return sort_key(self) < sort_key(other)


Tree = Union[Empty, Node]
EMPTY = Empty()
LEAF = Node(EMPTY, EMPTY)


def node(left: Tree, right: Tree) -> Node:
    return Node(left, right)


def is_empty(t: Tree) -> bool:
    return t is EMPTY or isinstance(t, Empty)


def sort_key(t: Tree) -> tuple:
    """Size-lexicographic key; agrees with the order of :func:`enumerate_trees`."""
    if isinstance(t, Empty):
        return (0,)
    return (size(t), -size(t.left), sort_key(t.left), sort_key(t.right))


# -- metrics -----------------------------------------------------------------

def size(t: Tree) -> int:
    n = 0
    stack = [t]
    while stack:
        s = stack.pop()
        if isinstance(s, Node):
            n += 1
            stack.append(s.left)
            stack.append(s.right)
    return n


def depth(t: Tree) -> int:
    if isinstance(t, Empty):
        return 0
    return 1 + max(depth(t.left), depth(t.right))


def leftward_path_len(t: Tree) -> int:
    n = 0
    while isinstance(t, Node):
        n += 1
        t = t.left
    return n


def is_leftward_path(t: Tree) -> bool:
    """True when no node has a right child (this includes the empty tree)."""
    while isinstance(t, Node):
        if isinstance(t.right, Node):
            return False
        t = t.left
    return True


def leftward_path(n: int) -> Tree:
    t: Tree = EMPTY
    for _ in range(n):
        t = Node(t, EMPTY)
    return t


# -- text format ---------------------------------------------------------------

def render_tree(t: Tree) -> str:
    out: list[str] = []
    stack: list[object] = [t]
    while stack:
        s = stack.pop()
        if isinstance(s, str):
            out.append(s)
        elif isinstance(s, Node):
            stack.extend(("]", s.right, ",", s.left))
            out.append("[")
        else:
            out.append("0")
    return "".join(out)


class _Reader:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            found = self.peek() or "end of input"
            raise ParseError(f"expected {ch!r}, found {found!r}", self.byte_offset())
        self.pos += 1

    def byte_offset(self) -> int:
        return len(self.text[: self.pos].encode("utf-8"))

    def done(self) -> None:
        if self.peek():
            raise ParseError(f"unexpected trailing {self.peek()!r}", self.byte_offset())


def _read_tree(r: _Reader) -> Tree:
    ch = r.peek()
    if ch == "0":
        r.pos += 1
        return EMPTY
    if ch == "[":
        r.pos += 1
        left = _read_tree(r)
        r.expect(",")
        right = _read_tree(r)
        r.expect("]")
        return Node(left, right)
    raise ParseError(f"expected '0' or '[', found {ch or 'end of input'!r}", r.byte_offset())


def parse_tree(text: str) -> Tree:
    r = _Reader(text)
    t = _read_tree(r)
    r.done()
    return t


# -- enumeration ---------------------------------------------------------------

@lru_cache(maxsize=None)
def _trees_of_size(n: int) -> tuple[Tree, ...]:
    if n == 0:
        return (EMPTY,)
    out = []
    for i in range(n - 1, -1, -1):
        for left in _trees_of_size(i):
            for right in _trees_of_size(n - 1 - i):
                out.append(Node(left, right))
    return tuple(out)


def enumerate_trees(n: int) -> tuple[Tree, ...]:
    """All trees with exactly ``n`` nodes, in size-lexicographic order."""
    if n < 0:
        raise ValueError("size must be non-negative")
    return _trees_of_size(n)


def trees_up_to(n: int) -> Iterator[Tree]:
    for k in range(n + 1):
        yield from _trees_of_size(k)


def catalan(n: int) -> int:
    c = 1
    for k in range(n):
        c = c * 2 * (2 * k + 1) // (k + 2)
    return c
