import random

from hypothesis import strategies as st

from treeiso.patterns import Label
from treeiso.semiring import Poly
from treeiso.tree import EMPTY, Node

trees = st.recursive(st.just(EMPTY), lambda sub: st.builds(Node, sub, sub), max_leaves=12)

polys = st.dictionaries(st.integers(0, 8), st.integers(1, 4), max_size=5).map(Poly.from_coeffs)


def random_poly(rng: random.Random, max_deg: int = 8, max_coeff: int = 4) -> Poly:
    return Poly.from_coeffs({k: rng.randint(0, max_coeff) for k in range(max_deg + 1)})


def random_pattern(rng: random.Random, depth: int, names=None):
    """A linear pattern with labels l0, l1, ... and unlabeled depth at most ``depth``."""
    if names is None:
        names = iter(f"l{i}" for i in range(10_000))
    roll = rng.random()
    if depth == 0 or roll < 0.25:
        return Label(next(names)) if rng.random() < 0.7 else EMPTY
    return Node(random_pattern(rng, depth - 1, names), random_pattern(rng, depth - 1, names))


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
