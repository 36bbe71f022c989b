"""
The two atomic separating automata
==================================

A separating automaton for an objective is a deterministic safety automaton
that accepts every coloring coming from a small graph satisfying the
objective, and nothing outside the objective.  Two constructions cover the
atomic cases:

* mean payoff: a saturating counter over [0, (n-1)*N] started at the top --
  it tracks how much total weight a play may still lose;

* parity: the leaves of a universal tree, walked left-to-right; odd
  priorities force strictly rightward progress at their level, even
  priorities reset everything below their level.
"""

from sepgames import (
    Graph,
    accepts_all_paths,
    automaton_dot,
    mp_separator,
    parity_separator,
    run,
    separator_stats,
    universal_tree,
)
from sepgames.separators import parity_state_bound

# --- the bounded counter -------------------------------------------------
counter = mp_separator(3, 2)  # graphs up to 3 vertices, weights in [-2, 2]
print("counter stats:", separator_stats(counter, bound=(3 - 1) * 2 + 1))
print("run -2,-2   :", run(counter, [-2, -2]))
print("run -2,-2,-1:", run(counter, [-2, -2, -1]))  # drained: rejected

# it accepts every path of a weight-safe graph...
safe = Graph(2, [(0, -2, 1), (1, 2, 0)])
print("accepts zero-sum 2-cycle?", accepts_all_paths(counter, safe))
# ...and rejects some path of any graph with a negative cycle
bad = Graph(2, [(0, -2, 1), (1, 1, 0)])
print("accepts leaking 2-cycle?", accepts_all_paths(counter, bad))

# --- the universal-tree walker -------------------------------------------
tree = universal_tree(3, 2)
print("universal tree (3 leaves, height 2) has", tree.leaf_count, "leaves:")
print("  addresses:", [tree.leaf_tuple(i) for i in range(tree.leaf_count)])

walker = parity_separator(3, 4)  # priorities [0, 4], height-2 tree
print("walker states:", walker.state_count, "<= bound", parity_state_bound(3, 4))
print("reading 0 stays put:", all(walker.delta(q, 0) == q for q in range(walker.state_count)))
print("reading 4 resets:   ", all(walker.delta(q, 4) == 0 for q in range(walker.state_count)))
print("word (1 2)^k accepted:", run(walker, [1, 2] * 4) is not None)
print("word 1^6 rejected:    ", run(walker, [1] * 6) is None)

# DOT output for inspection (paste into graphviz)
print()
print(automaton_dot(mp_separator(2, 1)))
