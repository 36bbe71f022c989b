"""Independent ground truth at desk scale.

Two layers, deliberately on different algorithmic footings so they can check
each other:

* polynomial satisfaction checkers for the combined objectives, built from
  strongly connected components and Bellman-Ford negative-cycle detection;

* an exponential subset oracle that enumerates strongly connected edge
  subsets outright, and a positional-strategy enumeration that decides tiny
  games by sheer force.
"""

from __future__ import annotations

import itertools
from typing import Iterator

import numpy as np

from .core import (
    EVE,
    Game,
    Graph,
    GuardExceededError,
    InvalidGameError,
    MeanPayoff,
    MeanPayoffDisjunction,
    Objective,
    Parity,
    ParityOrMeanPayoff,
    PositionalStrategy,
    Safety,
    _negative_cycle_exists,
    _scc_labels,
    graph_satisfies_mp,
    graph_satisfies_parity,
    restrict_to_strategy,
)

__all__ = [
    "graph_satisfies_parity_or_mp",
    "graph_satisfies_disjmp",
    "satisfies",
    "violating_subset_exists",
    "positional_strategies",
    "eve_wins_bruteforce",
    "eve_winning_region_bruteforce",
]

_SUBSET_EDGE_GUARD = 16
_STRATEGY_SPACE_GUARD = 10**6


# ---------------------------------------------------------------------------
# Polynomial checkers for the combined objectives
# ---------------------------------------------------------------------------


def graph_satisfies_parity_or_mp(graph: Graph) -> bool:
    """True unless some cycle violates parity and mean payoff at once.

    A violation pivots on an odd priority p: inside the subgraph of edges
    with priority <= p, some strongly connected component must contain both
    an edge labeled exactly p and a strictly negative cycle -- the two can
    then be fused into a single negative cycle of odd maximum priority.
    """
    priorities = {e[1][0] for e in graph.edges}
    for p in sorted(x for x in priorities if x % 2 == 1):
        sub = [(u, c, v) for (u, c, v) in graph.edges if c[0] <= p]
        srcs = np.fromiter((e[0] for e in sub), dtype=np.int64, count=len(sub))
        dsts = np.fromiter((e[2] for e in sub), dtype=np.int64, count=len(sub))
        _, labels = _scc_labels(graph.vertex_count, srcs, dsts)
        flagged = {int(labels[u]) for (u, c, v) in sub if c[0] == p and labels[u] == labels[v]}
        if not flagged:
            continue
        inside = [
            (u, c, v) for (u, c, v) in sub if labels[u] == labels[v] and int(labels[u]) in flagged
        ]
        if _negative_cycle_exists(
            graph.vertex_count,
            [e[0] for e in inside],
            [e[2] for e in inside],
            [e[1][1] for e in inside],
        ):
            return False
    return True


def graph_satisfies_disjmp(graph: Graph) -> bool:
    """True iff every strongly connected component is negative-cycle-free in
    at least one weight component.  Components without internal edges pass
    vacuously."""
    if not graph.edges:
        return True
    dims = len(graph.edges[0][1])
    _, labels = _scc_labels(graph.vertex_count, graph._src_array, graph._dst_array)
    by_comp: dict = {}
    for u, vec, v in graph.edges:
        if labels[u] == labels[v]:
            by_comp.setdefault(int(labels[u]), []).append((u, vec, v))
    for internal in by_comp.values():
        srcs = [e[0] for e in internal]
        dsts = [e[2] for e in internal]
        safe_somewhere = any(
            not _negative_cycle_exists(
                graph.vertex_count, srcs, dsts, [e[1][i] for e in internal]
            )
            for i in range(dims)
        )
        if not safe_somewhere:
            return False
    return True


def satisfies(graph: Graph, objective: Objective) -> bool:
    """Does every infinite path of the graph satisfy the objective?"""
    if isinstance(objective, Safety):
        return True
    if isinstance(objective, Parity):
        return graph_satisfies_parity(graph)
    if isinstance(objective, MeanPayoff):
        return graph_satisfies_mp(graph)
    if isinstance(objective, ParityOrMeanPayoff):
        return graph_satisfies_parity_or_mp(graph)
    if isinstance(objective, MeanPayoffDisjunction):
        return graph_satisfies_disjmp(graph)
    raise InvalidGameError(f"unsupported objective {objective!r}")


# ---------------------------------------------------------------------------
# Exhaustive subset oracle
# ---------------------------------------------------------------------------


def violating_subset_exists(graph: Graph, objective: Objective) -> bool:
    """Exhaustively search for an edge subset witnessing a violation.

    A witness is a strongly connected edge set that (parity-or-mp) has odd
    maximum priority and contains a negative cycle, or (disjunction of mean
    payoffs) contains a negative cycle in every component.  All 2^m subsets
    are examined with batched numpy sweeps; exists only to arbitrate the
    polynomial checkers, hence the hard edge guard.
    """
    m = graph.edge_count
    if m > _SUBSET_EDGE_GUARD:
        raise GuardExceededError(f"subset oracle limited to {_SUBSET_EDGE_GUARD} edges, got {m}")
    if not isinstance(objective, (ParityOrMeanPayoff, MeanPayoffDisjunction)):
        raise InvalidGameError(f"subset oracle undefined for {objective!r}")
    if m == 0:
        return False

    endpoints = sorted({e[0] for e in graph.edges} | {e[2] for e in graph.edges})
    vid = {v: i for i, v in enumerate(endpoints)}
    k = len(endpoints)
    eu = np.array([vid[e[0]] for e in graph.edges])
    ev = np.array([vid[e[2]] for e in graph.edges])

    nsub = 1 << m
    subs = np.arange(nsub, dtype=np.int64)
    member = ((subs[:, None] >> np.arange(m)) & 1).astype(bool)  # (nsub, m)

    # batched adjacency and transitive closure (paths of length >= 1)
    adj = np.zeros((nsub, k, k), dtype=bool)
    for e in range(m):
        adj[member[:, e], eu[e], ev[e]] = True
    reach = adj.copy()
    hops = 1
    while hops < k:
        reach = reach | np.matmul(reach.astype(np.uint8), reach.astype(np.uint8)).astype(bool)
        reach |= adj
        hops *= 2

    active = np.zeros((nsub, k), dtype=bool)
    for e in range(m):
        active[member[:, e], eu[e]] = True
        active[member[:, e], ev[e]] = True

    pair_needed = active[:, :, None] & active[:, None, :]
    diag = np.arange(k)
    pair_needed[:, diag, diag] = False  # u == v needs no path
    strongly_connected = np.all(reach | ~pair_needed, axis=(1, 2)) & member.any(axis=1)

    def negative_cycle_mask(weights: np.ndarray) -> np.ndarray:
        dist = np.zeros((nsub, k), dtype=np.int64)
        for _ in range(k):
            before = dist.copy()
            for e in range(m):
                cand = before[:, eu[e]] + weights[e]
                better = member[:, e] & (cand < dist[:, ev[e]])
                dist[better, ev[e]] = np.minimum(dist[better, ev[e]], cand[better])
            if np.array_equal(dist, before):
                return np.zeros(nsub, dtype=bool)
        final = dist.copy()
        for e in range(m):
            cand = final[:, eu[e]] + weights[e]
            better = member[:, e] & (cand < dist[:, ev[e]])
            dist[better, ev[e]] = np.minimum(dist[better, ev[e]], cand[better])
        return np.any(dist < final, axis=1)

    if isinstance(objective, ParityOrMeanPayoff):
        prio = np.array([e[1][0] for e in graph.edges])
        weights = np.array([e[1][1] for e in graph.edges], dtype=np.int64)
        maxp = np.where(member, prio[None, :], -1).max(axis=1)
        violating = strongly_connected & (maxp % 2 == 1) & negative_cycle_mask(weights)
        return bool(violating.any())

    dims = objective.dimensions
    violating = strongly_connected.copy()
    for i in range(dims):
        weights = np.array([e[1][i] for e in graph.edges], dtype=np.int64)
        violating &= negative_cycle_mask(weights)
        if not violating.any():
            return False
    return bool(violating.any())


# ---------------------------------------------------------------------------
# Positional-strategy enumeration
# ---------------------------------------------------------------------------


def positional_strategies(game: Game) -> Iterator[PositionalStrategy]:
    """All total positional strategies over Eve vertices that have outgoing
    edges (choiceless Eve vertices stay sinks and contribute factor one)."""
    g = game.graph
    choosers = [v for v in game.eve_vertices() if g.out_degree(v) > 0]
    space = 1
    for v in choosers:
        space *= g.out_degree(v)
        if space > _STRATEGY_SPACE_GUARD:
            raise GuardExceededError(
                f"strategy space exceeds {_STRATEGY_SPACE_GUARD}, refusing to enumerate"
            )
    edge_lists = [[(v, c, w) for (c, w) in g.successors[v]] for v in choosers]
    for combo in itertools.product(*edge_lists):
        yield PositionalStrategy(dict(zip(choosers, combo)))


def eve_wins_bruteforce(game: Game, v0: int) -> bool:
    """Does some positional strategy's reachable restriction from ``v0`` avoid
    Eve-controlled sinks and satisfy the objective?  Exponential by design."""
    if not 0 <= v0 < game.vertex_count:
        raise InvalidGameError(f"start vertex {v0} out of range")
    for sigma in positional_strategies(game):
        r = restrict_to_strategy(game, sigma, v0)
        has_eve_sink = any(
            game.owner[r.to_original(v)] is EVE and r.graph.is_sink(v)
            for v in range(r.graph.vertex_count)
        )
        if has_eve_sink:
            continue
        if satisfies(r.graph, game.objective):
            return True
    return False


def eve_winning_region_bruteforce(game: Game) -> frozenset:
    """Vertices from which Eve wins, sharing the per-strategy analysis across
    start vertices: under one strategy, a start wins iff no Eve sink and no
    objective-violating strongly connected component is reachable from it."""
    n = game.vertex_count
    g = game.graph
    wins: set = set()
    everything = frozenset(range(n))
    for sigma in positional_strategies(game):
        succ: list = [[] for _ in range(n)]
        edges = []
        for v in range(n):
            if game.is_eve(v):
                chosen = sigma.choices.get(v)
                outgoing = [(chosen[1], chosen[2])] if chosen else []
            else:
                outgoing = list(g.successors[v])
            for c, w in outgoing:
                succ[v].append(w)
                edges.append((v, c, w))
        bad = {v for v in range(n) if game.is_eve(v) and not succ[v]}
        srcs = [e[0] for e in edges]
        dsts = [e[2] for e in edges]
        _, labels = _scc_labels(n, srcs, dsts)
        by_comp: dict = {}
        for e in edges:
            if labels[e[0]] == labels[e[2]]:
                by_comp.setdefault(int(labels[e[0]]), []).append(e)
        for comp, internal in by_comp.items():
            members = sorted(v for v in range(n) if labels[v] == comp)
            remap = {v: i for i, v in enumerate(members)}
            sub = Graph(len(members), tuple((remap[u], c, remap[w]) for (u, c, w) in internal))
            if not satisfies(sub, game.objective):
                bad.update(members)
        # vertices that can reach a bad vertex lose under this strategy
        preds: list = [[] for _ in range(n)]
        for v in range(n):
            for w in succ[v]:
                preds[w].append(v)
        can_reach_bad = set(bad)
        stack = list(bad)
        while stack:
            v = stack.pop()
            for u in preds[v]:
                if u not in can_reach_bad:
                    can_reach_bad.add(u)
                    stack.append(u)
        wins.update(set(range(n)) - can_reach_bad)
        if wins == everything:
            break
    return frozenset(wins)
