"""
Safety games and the attractor
==============================

In a safety game every infinite play is fine for Eve; she only loses by
getting stuck in a dead end she controls.  Solving is a single backward
attractor computation for Adam: pull in Eve's dead ends, then every Adam
vertex that can step into the pulled set, then every Eve vertex with no way
out of it, and so on.  Everything that is never pulled is winning for Eve.
"""

from sepgames import ADAM, EVE, Game, Graph, Safety, adam_attractor, solve_safety

# Vertices: 0 Eve (can loop or step into the trap), 1 Eve trap (dead end),
# 2 Adam (must move to 0), 3 Adam dead end (Adam stuck = Eve wins).
game = Game(
    Graph(4, [(0, None, 0), (0, None, 1), (2, None, 0)]),
    (EVE, EVE, ADAM, ADAM),
    Safety(),
)

region = solve_safety(game)
print("Eve wins from:", sorted(region.eve_wins))
print("witness strategy:", region.witness.choices)

# The attractor itself is exposed: Adam's attractor to the empty target is
# exactly what Eve's dead ends drag in.
print("attractor to nothing:", sorted(adam_attractor(game, [])))
print("attractor to {0}:   ", sorted(adam_attractor(game, [0])))

# Monotonicity in action: giving Eve one more escape edge can only help her.
bigger = Game(
    Graph(4, [(0, None, 0), (0, None, 1), (2, None, 0), (1, None, 0)]),
    (EVE, EVE, ADAM, ADAM),
    Safety(),
)
print("after rescuing the trap:", sorted(solve_safety(bigger).eve_wins))
