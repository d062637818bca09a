"""Executable bijections between polynomial sets of trees.

Two routes produce them.  ``compile_derivation`` turns each elementary move
into the root bijection T = 1 + T^2 acting on the last coordinate of one
summand, and ``flatten_chain`` composes those links into a single very
explicit pattern family.  The seven-trees codec and the two
Cantor-Schroeder-Bernstein style maps are written out by hand.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .derivations import (
    Derivation,
    Merge,
    Move,
    MoveError,
    Split,
    check_derivation,
    four_step_display,
    parse_derivation,
    reindex,
)
from .patterns import (
    Label,
    PPattern,
    generic_ppattern,
    match_ppattern,
    parse_pattern,
    parse_ppattern,
    rename,
    render_ppattern,
    summands,
    unify_patterns,
)
from .semiring import Poly, parse_poly, render_poly
from .tree import EMPTY, Empty, Node, Tree, enumerate_trees, leftward_path_len


class BijectionError(ValueError):
    pass


def address_to_pos(stage: Poly, address: tuple[int, int]) -> int:
    k, tag = address
    try:
        first = stage.exponents.index(k)
    except ValueError:
        raise BijectionError(f"no summand X^{k} in {render_poly(stage)}") from None
    pos = first + tag - 1
    if tag < 1 or pos >= len(stage) or stage[pos] != k:
        raise BijectionError(f"tag {tag} out of range for X^{k} in {render_poly(stage)}")
    return pos


def pos_to_address(stage: Poly, pos: int) -> tuple[int, int]:
    k = stage[pos]
    return k, pos - stage.exponents.index(k) + 1


def _check_member(stage: Poly, x: PPattern) -> int:
    pos = address_to_pos(stage, x.address)
    if len(x.components) != x.k:
        raise BijectionError("tuple arity does not match its summand")
    return pos


# -- very explicit functions ------------------------------------------------------------

@dataclass(frozen=True)
class VEFunction:
    """An indexed family of (domain P-pattern, codomain Q-pattern) pairs."""

    P: Poly
    Q: Poly
    pairs: tuple[tuple[PPattern, PPattern], ...]

    def __post_init__(self):
        for dom, cod in self.pairs:
            if sorted(dom.labels()) != sorted(cod.labels()):
                raise BijectionError(f"label sets differ in pair {dom} => {cod}")

    def __len__(self) -> int:
        return len(self.pairs)

    def apply(self, x: PPattern) -> PPattern:
        hits = [(s, cod) for dom, cod in self.pairs if (s := match_ppattern(dom, x)) is not None]
        if len(hits) != 1:
            raise BijectionError(f"{len(hits)} domain patterns match {x}")
        s, cod = hits[0]
        return cod.substitute(s)

    def inverse(self) -> VEFunction:
        return VEFunction(self.Q, self.P, tuple((cod, dom) for dom, cod in self.pairs))

    def domain(self) -> list[PPattern]:
        return [dom for dom, _ in self.pairs]

    def codomain(self) -> list[PPattern]:
        return [cod for _, cod in self.pairs]

    def max_depth(self) -> int:
        return max((p.depth() for pair in self.pairs for p in pair), default=0)

    def __str__(self) -> str:
        return render_vef(self)


def render_vef(f: VEFunction) -> str:
    lines = [f"P: {render_poly(f.P)}", f"Q: {render_poly(f.Q)}"]
    lines += [f"{render_ppattern(d)} => {render_ppattern(c)}" for d, c in f.pairs]
    return "\n".join(lines) + "\n"


def parse_vef(text: str) -> VEFunction:
    P = Q = None
    pairs = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("P:"):
            P = parse_poly(line[2:])
        elif line.startswith("Q:"):
            Q = parse_poly(line[2:])
        else:
            dom, sep, cod = line.partition("=>")
            if not sep:
                raise ValueError(f"expected '<pattern> => <pattern>', got {line!r}")
            pairs.append((parse_ppattern(dom), parse_ppattern(cod)))
    if P is None or Q is None:
        raise ValueError("missing 'P:' or 'Q:' header")
    return VEFunction(P, Q, tuple(pairs))


def canonical_labels(dom: PPattern, cod: PPattern) -> tuple[PPattern, PPattern]:
    """Rename labels to v1, v2, ... in domain reading order."""
    mapping = {name: f"v{i}" for i, name in enumerate(dom.labels(), 1)}
    ren = lambda p: PPattern(p.k, p.tag, tuple(rename(c, mapping) for c in p.components))  # noqa: E731
    return ren(dom), ren(cod)


def _pair_key(pair: tuple[PPattern, PPattern]) -> tuple:
    return (pair[0].key(), pair[1].key())


# -- move links -----------------------------------------------------------------------------

@dataclass(frozen=True)
class MoveLink:
    """The bijection induced by one move at ``stage``; ``inverted`` runs it backwards."""

    stage: Poly
    move: Move
    inverted: bool = False

    def __post_init__(self):
        reindex(self.stage, self.move)

    @property
    def target(self) -> Poly:
        return reindex(self.stage, self.move)[0]

    @property
    def source(self) -> Poly:
        return self.target if self.inverted else self.stage

    @property
    def dest(self) -> Poly:
        return self.stage if self.inverted else self.target

    def inverse(self) -> MoveLink:
        return MoveLink(self.stage, self.move, not self.inverted)

    def apply(self, x: PPattern) -> PPattern:
        return self._backward(x) if self.inverted else self._forward(x)

    def _forward(self, x: PPattern) -> PPattern:
        target, old_to_new, created = reindex(self.stage, self.move)
        pos = _check_member(self.stage, x)
        comps = x.components
        m = self.move
        if isinstance(m, Split) and pos == m.pos:
            *rest, last = comps
            if isinstance(last, Node):
                new_pos, comps = created[1], (*rest, last.left, last.right)
            elif isinstance(last, Empty):
                new_pos, comps = created[0], tuple(rest)
            else:
                raise BijectionError("cannot split on a labeled coordinate")
        elif isinstance(m, Merge) and pos == m.low:
            new_pos, comps = created[0], comps + (EMPTY,)
        elif isinstance(m, Merge) and pos == m.high:
            new_pos, comps = created[0], comps[:-2] + (Node(comps[-2], comps[-1]),)
        else:
            new_pos = old_to_new[pos]
        k, tag = pos_to_address(target, new_pos)
        return PPattern(k, tag, comps)

    def _backward(self, y: PPattern) -> PPattern:
        target, old_to_new, created = reindex(self.stage, self.move)
        pos = _check_member(target, y)
        comps = y.components
        m = self.move
        if isinstance(m, Split) and pos in created:
            old_pos = m.pos
            if pos == created[0]:
                comps = comps + (EMPTY,)
            else:
                comps = comps[:-2] + (Node(comps[-2], comps[-1]),)
        elif isinstance(m, Merge) and pos == created[0]:
            *rest, last = comps
            if isinstance(last, Node):
                old_pos, comps = m.high, (*rest, last.left, last.right)
            elif isinstance(last, Empty):
                old_pos, comps = m.low, tuple(rest)
            else:
                raise BijectionError("cannot split on a labeled coordinate")
        else:
            old_pos = next(i for i, j in old_to_new.items() if j == pos)
        k, tag = pos_to_address(self.stage, old_pos)
        return PPattern(k, tag, comps)

    def family(self) -> VEFunction:
        """This link as a very explicit function (depth one on the touched coordinate)."""
        pairs = []
        for k, tag in summands(self.stage):
            src = generic_ppattern(k, tag)
            if isinstance(self.move, Split) and address_to_pos(self.stage, (k, tag)) == self.move.pos:
                head = src.components[:-1]
                srcs = [
                    PPattern(k, tag, head + (EMPTY,)),
                    PPattern(k, tag, head + (Node(Label("y"), Label("z")),)),
                ]
            else:
                srcs = [src]
            for s in srcs:
                pairs.append((s, self._forward(s)))
        f = VEFunction(self.stage, self.target, tuple(pairs))
        return f.inverse() if self.inverted else f


def move_bijection(stage: Poly, m: Move) -> MoveLink:
    try:
        return MoveLink(stage, m)
    except MoveError as exc:
        raise BijectionError(f"illegal move: {exc}") from None


# -- chains --------------------------------------------------------------------------

@dataclass(frozen=True)
class BijectionChain:
    derivation: Derivation
    links: tuple[MoveLink, ...]

    @property
    def domain_poly(self) -> Poly:
        return self.links[0].source if self.links else self.derivation.start

    @property
    def codomain_poly(self) -> Poly:
        return self.links[-1].dest if self.links else self.derivation.start

    def __len__(self) -> int:
        return len(self.links)

    def apply(self, x: PPattern) -> PPattern:
        _check_member(self.domain_poly, x)
        for link in self.links:
            x = link.apply(x)
        return x

    def inverse(self) -> BijectionChain:
        return BijectionChain(
            self.derivation.reversed(), tuple(link.inverse() for link in reversed(self.links))
        )


def compile_derivation(d: Derivation) -> BijectionChain:
    if not check_derivation(d):
        raise BijectionError("derivation does not replay")
    stages = d.stages()
    return BijectionChain(d, tuple(MoveLink(stages[i], m) for i, m in enumerate(d.moves)))


def apply_chain(ch: BijectionChain, x: PPattern) -> PPattern:
    return ch.apply(x)


def invert_chain(ch: BijectionChain) -> BijectionChain:
    return ch.inverse()


def render_chain(ch: BijectionChain) -> str:
    if any(link.inverted for link in ch.links):
        return "chain inverse\n" + str(ch.inverse().derivation)
    return "chain\n" + str(ch.derivation)


def parse_chain(text: str) -> BijectionChain:
    first, _, rest = text.lstrip().partition("\n")
    first = first.strip()
    if first not in ("chain", "chain inverse"):
        raise ValueError("chain files start with a 'chain' header")
    ch = compile_derivation(parse_derivation(rest))
    return ch.inverse() if first == "chain inverse" else ch


# -- flattening --------------------------------------------------------------------

def identity_family(P: Poly) -> VEFunction:
    pairs = tuple((generic_ppattern(k, tag), generic_ppattern(k, tag)) for k, tag in summands(P))
    return VEFunction(P, P, pairs)


def _unify_pp(p: PPattern, q: PPattern, fresh) -> tuple[dict, dict] | None:
    sp: dict = {}
    sq: dict = {}
    for a, b in zip(p.components, q.components):
        res = unify_patterns(a, b, fresh)
        if res is None:
            return None
        sp.update(res[1])
        sq.update(res[2])
    return sp, sq


def compose(f: VEFunction, g: VEFunction) -> VEFunction:
    """The very explicit function ``g . f`` via pairwise unification."""
    if f.Q != g.P:
        raise BijectionError("families do not compose")
    by_addr: dict[tuple[int, int], list[tuple[PPattern, PPattern]]] = {}
    for dom, cod in g.pairs:
        by_addr.setdefault(dom.address, []).append((dom, cod))
    out = []
    for dom, cod in f.pairs:
        used = set(dom.labels())
        for gdom, gcod in by_addr.get(cod.address, ()):
            mapping = {name: f"g.{name}" for name in gdom.labels()}
            gdom_r = PPattern(gdom.k, gdom.tag, tuple(rename(c, mapping) for c in gdom.components))
            gcod_r = PPattern(gcod.k, gcod.tag, tuple(rename(c, mapping) for c in gcod.components))
            taken = used | set(mapping.values())
            fresh = (f"u{i}" for i in itertools.count() if f"u{i}" not in taken)
            res = _unify_pp(cod, gdom_r, fresh)
            if res is None:
                continue
            s_cod, s_gdom = res
            out.append(canonical_labels(dom.substitute(s_cod), gcod_r.substitute(s_gdom)))
    out.sort(key=_pair_key)
    return VEFunction(f.P, g.Q, tuple(out))


def flatten_chain(ch: BijectionChain) -> VEFunction:
    f = identity_family(ch.domain_poly)
    for link in ch.links:
        f = compose(f, link.family())
    return f


# -- the seven-trees codec -----------------------------------------------------------

def seven_encode(t: Sequence[Tree]) -> Tree:
    if len(t) != 7:
        raise BijectionError("seven_encode takes exactly seven trees")
    t1, t2, t3, t4, t5, t6, t7 = t
    N = Node
    if any(isinstance(x, Node) for x in (t1, t2, t3, t4)):
        return N(N(N(N(N(N(t7, t6), t5), t4), t3), t2), t1)
    if isinstance(t5, Node):
        return N(N(N(N(EMPTY, t7), t6), t5.left), t5.right)
    if isinstance(t6, Node):
        return N(N(N(N(N(t6, t7), EMPTY), EMPTY), EMPTY), EMPTY)
    if leftward_path_len(t7) >= 4:
        a, e = t7.left, t7.right
        a, d = a.left, a.right
        a, c = a.left, a.right
        a, b = a.left, a.right
        return N(N(N(N(N(EMPTY, a), b), c), d), e)
    return t7


def _spine(u: Tree, n: int) -> list[Node]:
    """The first ``n`` nodes of the leftward path, root first."""
    out = []
    for _ in range(n):
        out.append(u)
        u = u.left
    return out


def seven_decode(u: Tree) -> tuple[Tree, ...]:
    n = leftward_path_len(u)
    z = EMPTY
    if n <= 3:
        return (z, z, z, z, z, z, u)
    if n == 4:
        s1, s2, s3, s4 = _spine(u, 4)
        return (z, z, z, z, Node(s2.right, s1.right), s3.right, s4.right)
    if n == 5:
        s = _spine(u, 5)
        t7 = Node(Node(Node(Node(s[4].right, s[3].right), s[2].right), s[1].right), s[0].right)
        return (z, z, z, z, z, z, t7)
    s = _spine(u, 6)
    firsts = tuple(s[i].right for i in range(4))
    if any(isinstance(x, Node) for x in firsts):
        t1, t2, t3, t4 = firsts
        return (t1, t2, t3, t4, s[4].right, s[5].right, s[5].left)
    return (z, z, z, z, z, s[4].left, s[4].right)


def seven_family() -> VEFunction:
    """The eleven pattern pairs behind ``seven_encode``."""
    case1 = "[[[[[[{t7},{t6}],{t5}],{t4}],{t3}],{t2}],{t1}]"
    rows: list[tuple[list[str], str]] = []
    for first in range(1, 5):
        dom = ["0"] * (first - 1) + [f"[?t{first}a,?t{first}b]"] + [f"?t{i}" for i in range(first + 1, 8)]
        rows.append((dom, case1.format(**{f"t{i}": dom[i - 1] for i in range(1, 8)})))
    rows.append((["0"] * 4 + ["[?t5a,?t5b]", "?t6", "?t7"], "[[[[0,?t7],?t6],?t5a],?t5b]"))
    rows.append((["0"] * 5 + ["[?t6a,?t6b]", "?t7"], "[[[[[[?t6a,?t6b],?t7],0],0],0],0]"))
    rows.append((["0"] * 6 + ["[[[[?a,?b],?c],?d],?e]"], "[[[[[0,?a],?b],?c],?d],?e]"))
    # leftward path of tree 7 has 0, 1, 2 or 3 nodes
    spines = ["0", "[0,?b]", "[[0,?b],?c]", "[[[0,?b],?c],?d]"]
    rows.extend((["0"] * 6 + [s], s) for s in spines)
    pairs = []
    for dom, cod in rows:
        d = PPattern(7, 1, tuple(parse_pattern(x) for x in dom))
        c = PPattern(1, 1, (parse_pattern(cod),))
        pairs.append(canonical_labels(d, c))
    return VEFunction(Poly((7,)), Poly((1,)), tuple(pairs))


# -- Cantor-Schroeder-Bernstein style bijections ------------------------------------

def _pure_leftward(t: Tree) -> bool:
    while isinstance(t, Node):
        if isinstance(t.right, Node):
            return False
        t = t.left
    return True


def csb_pair(t1: Tree, t2: Tree) -> Tree:
    """T^2 -> T: pair under a new root, except leftward paths lose one node."""
    u = Node(t1, t2)
    if _pure_leftward(u):
        return t1
    return u


def csb_pair_inverse(u: Tree) -> tuple[Tree, Tree]:
    if _pure_leftward(u):
        return u, EMPTY
    return u.left, u.right


def _exceptional(t: Tree) -> bool:
    """0, or a leftward spine of extra nodes over some [p, q] with p, q both non-empty."""
    if isinstance(t, Empty):
        return True
    while isinstance(t, Node):
        if isinstance(t.left, Empty):
            return False
        if isinstance(t.right, Node):
            return True
        t = t.left
    return False


def csb_sum(side: str, t: Tree) -> Tree:
    """T + T -> T; ``side`` is "first" or "second"."""
    if side == "first":
        return Node(EMPTY, t)
    if side != "second":
        raise BijectionError(f"side must be 'first' or 'second', got {side!r}")
    return t if _exceptional(t) else Node(t, EMPTY)


def csb_sum_inverse(u: Tree) -> tuple[str, Tree]:
    if _exceptional(u):
        return "second", u
    if isinstance(u.left, Empty):
        return "first", u.right
    return "second", u.left


# -- Garsia-Milne ------------------------------------------------------------------

@dataclass(frozen=True)
class Landed:
    value: PPattern
    applications: int


@dataclass(frozen=True)
class NonTerminated:
    max_iter: int


@dataclass(frozen=True)
class CycleDetected:
    applications: int
    state: PPattern


@dataclass(frozen=True)
class GMInstance:
    """A bijection ``f: A + X -> B + X`` with the two copies of X identified.

    ``a_part`` holds the domain addresses of A and ``x_map`` sends each codomain
    address of X to the matching domain address.
    """

    f: Callable[[PPattern], PPattern]
    a_part: frozenset
    x_map: dict

    @classmethod
    def from_polys(cls, f, A: Poly, B: Poly, X: Poly) -> GMInstance:
        """Within each exponent, A's (resp. B's) tags come first and X's follow."""
        a_c, b_c, x_c = A.coeffs(), B.coeffs(), X.coeffs()
        a_part = frozenset((k, tag) for k, c in a_c.items() for tag in range(1, c + 1))
        x_map = {
            (k, b_c.get(k, 0) + j): (k, a_c.get(k, 0) + j)
            for k, c in x_c.items()
            for j in range(1, c + 1)
        }
        return cls(f, a_part, x_map)


def garsia_milne(g: GMInstance, a: PPattern, max_iter: int):
    """Apply f until the image leaves X; returns Landed, NonTerminated or CycleDetected."""
    if a.address not in g.a_part:
        raise BijectionError(f"{a} is not in the A part")
    seen = set()
    x = a
    for n in range(1, max_iter + 1):
        y = g.f(x)
        dom_addr = g.x_map.get(y.address)
        if dom_addr is None:
            return Landed(y, n)
        x = PPattern(dom_addr[0], dom_addr[1], y.components)
        if x in seen:
            return CycleDetected(n, x)
        seen.add(x)
    return NonTerminated(max_iter)


def four_step_instance() -> GMInstance:
    """f: X^7 + X -> X + X with X = X^5 + X^4 + X^3, compiled from the four-move display."""
    ch = compile_derivation(four_step_display())
    return GMInstance.from_polys(ch.apply, Poly((7,)), Poly((1,)), Poly((5, 4, 3)))


def toy_instance() -> GMInstance:
    """A = B = X = {one point}; f(a) = x and f(x) = b."""
    a, x = PPattern(0, 1, ()), PPattern(0, 2, ())
    table = {a: x, x: a}
    return GMInstance.from_polys(table.__getitem__, Poly((0,)), Poly((0,)), Poly((0,)))


def ptuples(P: Poly, max_total: int) -> Iterable[PPattern]:
    """Every P-tuple of total size at most ``max_total``."""

    def tuples(k: int, budget: int):
        if k == 0:
            yield ()
            return
        for s in range(budget + 1):
            for t in enumerate_trees(s):
                for rest in tuples(k - 1, budget - s):
                    yield (t, *rest)

    for k, tag in summands(P):
        for comps in tuples(k, max_total):
            yield PPattern(k, tag, comps)
