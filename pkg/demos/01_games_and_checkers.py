"""
Games, colors, and cycle-structure checkers
===========================================

A game lives on an edge-colored directed graph: every edge carries a color
(a parity priority, an integer weight, a pair, or a weight vector), every
vertex belongs to Eve or Adam, and an objective descriptor says which
infinite plays Eve likes.  This script builds a few tiny graphs and asks the
structural questions everything else reduces to: which cycles are bad?
"""

from sepgames import (
    ADAM,
    EVE,
    Game,
    Graph,
    MeanPayoff,
    Parity,
    find_negative_cycle,
    graph_satisfies_mp,
    graph_satisfies_parity,
    scc_decompose,
    satisfies,
)

# A weighted graph: a profitable 2-cycle between 0 and 1, and a draining
# self-loop on vertex 2 reachable from vertex 1.
g = Graph(3, [(0, 3, 1), (1, -1, 0), (1, 0, 2), (2, -2, 2)])
print("graph edges:", g.edges)

# Strongly connected components come out in topological order.
print("components:", scc_decompose(g))

# Mean payoff is about negative cycles: the -2 self-loop sinks this graph.
print("satisfies mean payoff?", graph_satisfies_mp(g))
cycle = find_negative_cycle(g)
print("negative cycle found:", cycle.vertices, "colors", cycle.colors)

# Parity is about the maximum priority on a cycle being even.
odd_loop = Graph(2, [(0, 2, 1), (1, 1, 0), (1, 1, 1)])
print("parity ok (odd loop present)?", graph_satisfies_parity(odd_loop))
even_only = Graph(2, [(0, 2, 1), (1, 1, 0)])
print("parity ok (2 dominates)?", graph_satisfies_parity(even_only))

# A game wraps a graph with ownership and an objective; construction checks
# that every color fits the declared bounds.
game = Game(g, (EVE, ADAM, EVE), MeanPayoff(3))
print("game objective:", game.objective)
print("all plays satisfy the objective?", satisfies(game.graph, game.objective))

# The one-stop dispatcher works for every objective family.
print("parity graph satisfies Parity(2)?", satisfies(even_only, Parity(2)))
