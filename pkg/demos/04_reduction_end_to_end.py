"""
Solving a game by chaining it with an automaton
===============================================

The reduction: run the separating automaton alongside the game.  Eve wins
the original game from v exactly when she wins the chained safety game from
(v, initial state) -- an undefined automaton transition routes to a losing
sink.  The chained game is a plain safety game, so the attractor solver
finishes the job.
"""

from sepgames import (
    ADAM,
    EVE,
    Game,
    Graph,
    MeanPayoff,
    chained_game,
    chained_game_dot,
    eve_winning_region_bruteforce,
    mp_separator,
    separating_winning_region,
    solve_safety,
    solve_via_separating,
)

# Adam moves first and can send the play into a profitable loop (weight +1)
# or a draining loop (weight -1); Eve only wins where Adam has no bad option.
game = Game(
    Graph(3, [(0, 0, 1), (0, 0, 2), (1, 1, 1), (2, -1, 2)]),
    (ADAM, EVE, EVE),
    MeanPayoff(1),
)
aut = mp_separator(3, 1)

print("Eve wins from 0?", solve_via_separating(game, 0, aut))
print("Eve wins from 1?", solve_via_separating(game, 1, aut))
print("Eve wins from 2?", solve_via_separating(game, 2, aut))

# The same answers fall out of one multi-rooted product solve...
print("separating region:", sorted(separating_winning_region(game, aut)))
# ...and out of sheer strategy enumeration.
print("brute-force region:", sorted(eve_winning_region_bruteforce(game)))

# The product is inspectable: states are (vertex, counter) pairs, plus the
# losing sink reached when the counter would go negative.
chain = chained_game(game, aut, 0)
print("product vertices:", chain.game.vertex_count, " bottom sink:", chain.bottom)
print("product solved:", sorted(solve_safety(chain.game).eve_wins))
print()
print(chained_game_dot(chain))
