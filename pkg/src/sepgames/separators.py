"""Separating automata for the two atomic objectives.

* Parity: states are the leaves of a universal tree of height ceil(d/2);
  reading an odd priority moves to the first leaf past the current ancestor
  subtree at the priority's level, reading an even priority falls back to the
  leftmost leaf below the ancestor at its level.  Transitions are computed by
  navigating the tree in O(height) -- the (quasipolynomially many) leaves are
  addressed by index and never tabulated.

* Mean payoff: a saturating counter over [0, (n-1)*N], started at the top;
  a letter is rejected exactly when it would push the counter below zero.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .automaton import SafetyAutomaton
from .core import InvalidGameError, MeanPayoff, Parity

__all__ = [
    "UniversalTree",
    "universal_tree",
    "parity_separator",
    "mp_separator",
    "parity_state_bound",
    "separator_stats",
]


class _TreeNode:
    """Internal node; ``cum`` holds prefix sums of the children's leaf counts
    so navigation can binary-search a leaf index at each level."""

    __slots__ = ("children", "leaf_count", "cum")

    def __init__(self, children: tuple) -> None:
        self.children = children
        self.leaf_count = sum(c.leaf_count for c in children) if children else 1
        cum = [0]
        for c in children:
            cum.append(cum[-1] + c.leaf_count)
        self.cum = cum


_LEAF = _TreeNode(())


@lru_cache(maxsize=None)
def _build(n: int, h: int) -> Optional[_TreeNode]:
    if n <= 0:
        return None
    if h == 0:
        return _LEAF
    left = _build(n // 2, h)
    middle = _build(n, h - 1)
    right = _build(n - 1 - n // 2, h)
    children = (left.children if left else ()) + (middle,) + (right.children if right else ())
    return _TreeNode(children)


@dataclass(frozen=True, eq=False)
class UniversalTree:
    """Ordered tree with all leaves at depth ``height`` into which every
    ordered tree with at most ``capacity`` leaves (all at that depth) embeds,
    preserving order and depth.

    Built by halving: the root merges the children of the tree for half the
    capacity, one fresh subtree of full capacity and reduced height, and the
    children of the tree for the remaining capacity.
    """

    capacity: int
    height: int
    root: Optional[_TreeNode]

    @property
    def leaf_count(self) -> int:
        return self.root.leaf_count if self.root else 0

    def leaf_tuple(self, index: int) -> tuple:
        """Child-index address of a leaf, from the root level down; the
        lexicographic order of addresses is the left-to-right leaf order."""
        self._check(index)
        return tuple(self._descend(index))

    def leaf_index(self, address: tuple) -> int:
        """Inverse of :meth:`leaf_tuple`."""
        node = self.root
        index = 0
        if node is None or len(address) != self.height:
            raise InvalidGameError(f"address {address!r} does not fit this tree")
        for ci in address:
            if not 0 <= ci < len(node.children):
                raise InvalidGameError(f"address {address!r} does not fit this tree")
            index += node.cum[ci]
            node = node.children[ci]
        return index

    def _check(self, index: int) -> None:
        if not 0 <= index < self.leaf_count:
            raise InvalidGameError(f"leaf index {index} out of range")

    def ancestor_span(self, index: int, level: int) -> tuple:
        """(first leaf index, leaf count) of the ancestor of leaf ``index``
        sitting ``level`` levels above the leaves (0 = the leaf itself)."""
        self._check(index)
        if not 0 <= level <= self.height:
            raise InvalidGameError(f"level {level} out of range")
        node = self.root
        start = 0
        depth = self.height
        while depth > level:
            rel = index - start
            ci = _bisect_cum(node.cum, rel)
            start += node.cum[ci]
            node = node.children[ci]
            depth -= 1
        return start, node.leaf_count

    def _descend(self, index: int) -> list:
        node = self.root
        start = 0
        address = []
        for _ in range(self.height):
            rel = index - start
            ci = _bisect_cum(node.cum, rel)
            address.append(ci)
            start += node.cum[ci]
            node = node.children[ci]
        return address


def _bisect_cum(cum: list, rel: int) -> int:
    return bisect.bisect_right(cum, rel) - 1


def universal_tree(n: int, h: int) -> UniversalTree:
    if n < 0 or h < 0:
        raise InvalidGameError("universal tree parameters must be >= 0")
    return UniversalTree(capacity=n, height=h, root=_build(n, h))


def parity_separator(n: int, max_priority: int) -> SafetyAutomaton:
    """Separating automaton for parity over priorities [0, max_priority],
    sound for all graphs and separating for graphs with at most ``n``
    vertices.  States are the leaves of ``universal_tree(n, ceil(d/2))`` in
    left-to-right order; the initial state is the leftmost leaf.

    Reading priority p compares leaves by their address truncated at p's
    level: odd p moves to the smallest strictly greater leaf (undefined past
    the last one), even p to the smallest greater-or-equal one.  Reading 0 is
    the identity and reading a top even priority resets to the leftmost leaf.
    """
    if n < 1 or max_priority < 0:
        raise InvalidGameError("parity separator needs n >= 1 and max_priority >= 0")
    height = (max_priority + 1) // 2
    tree = universal_tree(n, height)
    states = tree.leaf_count

    def delta(q: int, p: int) -> Optional[int]:
        if p % 2:
            start, count = tree.ancestor_span(q, (p + 1) // 2 - 1)
            following = start + count
            return following if following < states else None
        start, _ = tree.ancestor_span(q, p // 2)
        return start

    def state_label(q: int) -> str:
        return "(" + ",".join(str(x) for x in tree.leaf_tuple(q)) + ")"

    return SafetyAutomaton(
        state_count=states,
        initial=0,
        alphabet=Parity(max_priority),
        delta=delta,
        state_label=state_label,
    )


def mp_separator(n: int, weight_bound: int) -> SafetyAutomaton:
    """Separating automaton for mean payoff with weights in ``[-N, N]``:
    a counter over [0, (n-1)*N] started at the top, adding each letter,
    saturating at the top and rejecting below zero.

    Graphs without negative cycles keep every infix sum above -(n-1)*N, so
    starting from the top the counter never falls below zero on their paths.
    """
    if n < 1 or weight_bound < 0:
        raise InvalidGameError("mp separator needs n >= 1 and weight_bound >= 0")
    top = (n - 1) * weight_bound

    def delta(q: int, w: int) -> Optional[int]:
        s = q + w
        if s < 0:
            return None
        return s if s < top else top

    return SafetyAutomaton(
        state_count=top + 1,
        initial=top,
        alphabet=MeanPayoff(weight_bound),
        delta=delta,
    )


def parity_state_bound(n: int, max_priority: int) -> int:
    """Closed-form bound on the parity separator's state count,
    ``n * C(ceil(log2 n) + d/2 - 1, ceil(log2 n))`` for even d."""
    if max_priority % 2:
        raise InvalidGameError("the closed-form bound is stated for even max_priority")
    logn = math.ceil(math.log2(n)) if n > 1 else 0
    return n * math.comb(logn + max_priority // 2 - 1, logn)


def separator_stats(aut: SafetyAutomaton, bound: Optional[int] = None) -> dict:
    """State count, alphabet size, and (optionally) the matching closed-form
    size bound, side by side."""
    stats = {
        "states": aut.state_count,
        "alphabet_size": aut.alphabet.alphabet_size,
    }
    if bound is not None:
        stats["bound"] = bound
    return stats
