"""Explicit bijections between polynomial sets of binary trees."""
from .semiring import Poly, decide_equiv, normal_form, parse_poly, render_poly
from .tree import EMPTY, Node, parse_tree, render_tree

__all__ = [
    "EMPTY",
    "Node",
    "Poly",
    "decide_equiv",
    "normal_form",
    "parse_poly",
    "parse_tree",
    "render_poly",
    "render_tree",
]
__version__ = "0.1.0"
