"""Deterministic safety automata, sequential products, and the chained game
reduction.

An automaton is a partial transition function over dense integer states; big
generated families (tree-walking parity automata, bounded counters, their
sequential chains) expose ``delta`` as a computed function rather than a
table, so state spaces are never materialized beyond what a construction
actually visits.

Solving a game through a separating automaton has two interchangeable
implementations: an object-level one that builds the product game explicitly
(inspectable, exportable to DOT) and a flat numpy pipeline that breadth-first
explores integer-coded product states (used once products outgrow desk
scale).  Both reduce to the same safety solver.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .core import (
    EVE,
    AlphabetMismatchError,
    Color,
    Game,
    Graph,
    InvalidGameError,
    MeanPayoff,
    MeanPayoffDisjunction,
    Objective,
    Parity,
    ParityOrMeanPayoff,
    Safety,
)
from .safety import _attract, solve_safety

__all__ = [
    "SafetyAutomaton",
    "ChainedGame",
    "run",
    "accepts_all_paths",
    "sequential_product",
    "sequential_fold",
    "chained_game",
    "solve_via_separating",
    "separating_winning_region",
    "reachable_graph",
    "reachable_state_count",
    "automaton_dot",
    "chained_game_dot",
]

# products up to this many (vertex, state) pairs go through the explicit
# object pipeline; larger ones use the flat integer-coded solver
_OBJECT_PATH_LIMIT = 50_000


@dataclass(frozen=True, eq=False)
class SafetyAutomaton:
    """Deterministic safety automaton with a computed partial ``delta``.

    ``delta(state, color)`` returns the successor state or ``None`` when
    undefined.  ``parts`` is set on sequential chains so further products can
    flatten instead of nesting closures.  ``outgoing``, when present,
    enumerates for one state a reduced set of ``(color, target)``
    representatives covering every behaviorally distinct transition with
    componentwise-minimal weights (used to keep induced graphs small for
    vector alphabets).
    """

    state_count: int
    initial: int
    alphabet: Objective
    delta: Callable[[int, Color], Optional[int]]
    parts: Optional[tuple] = None
    outgoing: Optional[Callable[[int], Sequence[tuple[Color, Optional[int]]]]] = None
    state_label: Optional[Callable[[int], str]] = None

    def __post_init__(self) -> None:
        if self.state_count < 1:
            raise InvalidGameError("an automaton needs at least one state")
        if not 0 <= self.initial < self.state_count:
            raise InvalidGameError("initial state out of range")

    def label(self, q: int) -> str:
        return self.state_label(q) if self.state_label else str(q)


def _check_letters(alphabet: Objective, word: Iterable[Color]):
    word = tuple(word)
    for c in word:
        err = alphabet.color_error(c)
        if err:
            raise AlphabetMismatchError(err)
    return word


def run(aut: SafetyAutomaton, word: Iterable[Color]) -> Optional[int]:
    """State reached after reading ``word`` from the initial state, or
    ``None`` if some step is undefined.  Letters outside the automaton's
    alphabet are a usage error, not a rejection."""
    word = _check_letters(aut.alphabet, word)
    q: Optional[int] = aut.initial
    for c in word:
        q = aut.delta(q, c)
        if q is None:
            return None
    return q


def accepts_all_paths(aut: SafetyAutomaton, graph: Graph) -> bool:
    """True iff every finite (hence every infinite) path of ``graph`` has a
    defined run, checked on the synchronized product started from every
    ``(vertex, initial)`` pair."""
    for e in graph.edges:
        err = aut.alphabet.color_error(e[1])
        if err:
            raise AlphabetMismatchError(f"edge {e!r}: {err}")
    nq = aut.state_count
    delta = aut.delta
    succ = graph.successors
    q0 = aut.initial
    seen = {v * nq + q0 for v in range(graph.vertex_count)}
    stack = list(seen)
    while stack:
        code = stack.pop()
        v, q = divmod(code, nq)
        for c, w in succ[v]:
            t = delta(q, c)
            if t is None:
                return False
            tcode = w * nq + t
            if tcode not in seen:
                seen.add(tcode)
                stack.append(tcode)
    return True


# ---------------------------------------------------------------------------
# Sequential products
# ---------------------------------------------------------------------------


def _parts(aut: SafetyAutomaton) -> tuple:
    return aut.parts if aut.parts is not None else (aut,)


def _effective_outgoing(block: SafetyAutomaton) -> Callable[[int], list]:
    if block.outgoing is not None:
        return block.outgoing
    alphabet, delta = block.alphabet, block.delta

    def enumerate_all(q: int) -> list:
        return [(c, delta(q, c)) for c in alphabet.colors()]

    return enumerate_all


def _chain(blocks: tuple) -> SafetyAutomaton:
    """Flat representation of the left-associated sequential product.

    The state set is the disjoint union of the blocks' states; a letter
    undefined in the current block jumps (consuming the letter) to the next
    block's initial state, and is undefined only in the last block.
    """
    alphabet = blocks[0].alphabet
    for b in blocks[1:]:
        if b.alphabet != alphabet:
            raise AlphabetMismatchError(
                f"sequential product mixes alphabets {alphabet!r} and {b.alphabet!r}"
            )
    offsets = [0]
    for b in blocks:
        offsets.append(offsets[-1] + b.state_count)
    total = offsets[-1]
    last = len(blocks) - 1
    deltas = [b.delta for b in blocks]
    jump_target = [
        offsets[i + 1] + blocks[i + 1].initial if i < last else None for i in range(len(blocks))
    ]

    def delta(s: int, c: Color) -> Optional[int]:
        i = bisect.bisect_right(offsets, s) - 1
        t = deltas[i](s - offsets[i], c)
        if t is not None:
            return offsets[i] + t
        return jump_target[i]

    outs = [_effective_outgoing(b) for b in blocks]

    def outgoing(s: int) -> list:
        i = bisect.bisect_right(offsets, s) - 1
        result = []
        for c, t in outs[i](s - offsets[i]):
            result.append((c, offsets[i] + t if t is not None else jump_target[i]))
        return result

    def state_label(s: int) -> str:
        i = bisect.bisect_right(offsets, s) - 1
        return f"{i}:{blocks[i].label(s - offsets[i])}"

    return SafetyAutomaton(
        state_count=total,
        initial=blocks[0].initial,
        alphabet=alphabet,
        delta=delta,
        parts=blocks,
        outgoing=outgoing,
        state_label=state_label,
    )


def sequential_product(a1: SafetyAutomaton, a2: SafetyAutomaton) -> SafetyAutomaton:
    """Run ``a1`` until it rejects a letter, then hand the rest of the word to
    ``a2`` (the rejected letter itself is consumed by the hand-off)."""
    return _chain(_parts(a1) + _parts(a2))


def sequential_fold(auts: Sequence[SafetyAutomaton]) -> SafetyAutomaton:
    """Left fold of the sequential product; state counts add up."""
    auts = list(auts)
    if not auts:
        raise ValueError("sequential_fold needs at least one automaton")
    if len(auts) == 1:
        return auts[0]
    blocks: tuple = ()
    for a in auts:
        blocks = blocks + _parts(a)
    return _chain(blocks)


# ---------------------------------------------------------------------------
# Chained game (object pipeline)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ChainedGame:
    """Safety game synchronizing a game with an automaton.

    Only product states reachable from the requested roots are materialized.
    ``bottom`` is the Eve-owned losing sink reached on undefined transitions,
    present only if some undefined transition is reachable.  ``edge_origin``
    maps each product edge to the index of the game edge that induced it.
    """

    game: Game
    state_ids: dict
    bottom: Optional[int]
    roots: tuple
    product_pairs: tuple
    edge_origin: tuple
    source: Game

    def product_vertex(self, v: int, q: int) -> int:
        return self.state_ids[(v, q)]


def _build_chained(game: Game, aut: SafetyAutomaton, roots: Sequence[int]) -> ChainedGame:
    _check_alphabet(game, aut)
    succ = game.graph.successors
    delta = aut.delta
    ids: dict = {}
    pairs: list = []
    owner: list = []
    order: list = []

    def intern(v: int, q: int) -> int:
        key = (v, q)
        pid = ids.get(key)
        if pid is None:
            pid = len(pairs)
            ids[key] = pid
            pairs.append(key)
            owner.append(game.owner[v])
            order.append(key)
        return pid

    # per-vertex indices into graph.edges, aligned with successors order
    edge_index: list = [[] for _ in range(game.vertex_count)]
    for i, e in enumerate(game.graph.edges):
        edge_index[e[0]].append(i)

    bottom: Optional[int] = None
    root_ids = [intern(v, aut.initial) for v in roots]
    edges: list = []
    origins: list = []
    head = 0
    while head < len(order):
        v, q = order[head]
        src = ids[(v, q)]
        head += 1
        seen_targets = set()
        for gi, (c, w) in enumerate(succ[v]):
            t = delta(q, c)
            if t is None:
                if bottom is None:
                    bottom = len(pairs)
                    pairs.append(None)
                    owner.append(EVE)
                tgt = bottom
            else:
                tgt = intern(w, t)
            if tgt in seen_targets:
                continue
            seen_targets.add(tgt)
            edges.append((src, None, tgt))
            origins.append(edge_index[v][gi])
    product = Game(
        graph=Graph(len(pairs), tuple(edges)),
        owner=tuple(owner),
        objective=Safety(),
    )
    return ChainedGame(
        game=product,
        state_ids=ids,
        bottom=bottom,
        roots=tuple(root_ids),
        product_pairs=tuple(pairs),
        edge_origin=tuple(origins),
        source=game,
    )


def chained_game(game: Game, aut: SafetyAutomaton, v0: int) -> ChainedGame:
    """Product safety game reachable from ``(v0, initial)``."""
    if not 0 <= v0 < game.vertex_count:
        raise InvalidGameError(f"start vertex {v0} out of range")
    return _build_chained(game, aut, [v0])


def _check_alphabet(game: Game, aut: SafetyAutomaton) -> None:
    if aut.alphabet != game.objective:
        raise AlphabetMismatchError(
            f"automaton alphabet {aut.alphabet!r} does not match objective {game.objective!r}"
        )


# ---------------------------------------------------------------------------
# Flat product solving (integer-coded pipeline)
# ---------------------------------------------------------------------------


def _solve_flat(game: Game, aut: SafetyAutomaton, roots: Sequence[int]):
    """Solve the chained game without materializing python objects.

    Product states are coded ``v * state_count + q``; the losing sink gets the
    one-past-the-end code.  Returns (per-root win flags, stats dict).
    """
    g = game.graph
    n, nq = g.vertex_count, aut.state_count
    bot = n * nq

    colors = list(dict.fromkeys(e[1] for e in g.edges))
    cid = {c: i for i, c in enumerate(colors)}
    ncol = len(colors)

    esrc = g._src_array
    order = np.argsort(esrc, kind="stable")
    gdst = g._dst_array[order]
    gcid = np.fromiter((cid[g.edges[i][1]] for i in order), dtype=np.int64, count=len(order))
    gptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(esrc, minlength=n), out=gptr[1:])

    table = np.full((nq, max(ncol, 1)), -2, dtype=np.int64)
    built = np.zeros(nq, dtype=bool)

    def ensure_rows(states: np.ndarray) -> None:
        for q in states[~built[states]]:
            q = int(q)
            row = table[q]
            for ci, c in enumerate(colors):
                t = aut.delta(q, c)
                row[ci] = -1 if t is None else t
            built[q] = True

    visited = np.zeros(bot + 1, dtype=bool)
    root_codes = np.array([v * nq + aut.initial for v in roots], dtype=np.int64)
    frontier = np.unique(root_codes)
    visited[frontier] = True
    src_chunks: list = []
    dst_chunks: list = []
    edge_total = 0
    while frontier.size:
        pairs = frontier[frontier < bot]
        fv = pairs // nq
        fq = pairs % nq
        ensure_rows(np.unique(fq))
        starts = gptr[fv]
        lens = gptr[fv + 1] - starts
        total = int(lens.sum())
        if total == 0:
            break
        offsets = np.repeat(np.cumsum(lens) - lens, lens)
        idx = np.repeat(starts, lens) + (np.arange(total) - offsets)
        src_rep = np.repeat(pairs, lens)
        tq = table[np.repeat(fq, lens), gcid[idx]]
        tcode = np.where(tq >= 0, gdst[idx] * nq + tq, bot)
        src_chunks.append(src_rep)
        dst_chunks.append(tcode)
        edge_total += total
        fresh = np.unique(tcode[~visited[tcode]])
        visited[fresh] = True
        frontier = fresh

    if src_chunks:
        all_src = np.concatenate(src_chunks)
        all_dst = np.concatenate(dst_chunks)
    else:
        all_src = np.zeros(0, dtype=np.int64)
        all_dst = np.zeros(0, dtype=np.int64)

    eve_game = np.fromiter((o is EVE for o in game.owner), dtype=bool, count=n)
    eve_code = np.empty(bot + 1, dtype=bool)
    eve_code[:bot] = np.repeat(eve_game, nq)
    eve_code[bot] = True

    outdeg = np.bincount(all_src, minlength=bot + 1)
    seed = np.flatnonzero(visited & eve_code & (outdeg == 0))
    attracted = _attract(bot + 1, all_src, all_dst, eve_code, seed)
    wins = ~attracted[root_codes]
    stats = {
        "product_states": int(visited.sum()),
        "product_edges": edge_total,
        "automaton_states": nq,
    }
    return wins, stats


# ---------------------------------------------------------------------------
# Game solving through a separating automaton
# ---------------------------------------------------------------------------


def solve_via_separating(game: Game, v0: int, aut: SafetyAutomaton) -> bool:
    """Does Eve win from ``v0``?  Correct whenever ``aut`` separates at the
    size of ``game``: Eve wins the game iff she wins the chained safety game
    from ``(v0, initial)``."""
    if not 0 <= v0 < game.vertex_count:
        raise InvalidGameError(f"start vertex {v0} out of range")
    _check_alphabet(game, aut)
    if game.vertex_count * aut.state_count <= _OBJECT_PATH_LIMIT:
        chain = chained_game(game, aut, v0)
        region = solve_safety(chain.game)
        return chain.product_vertex(v0, aut.initial) in region.eve_wins
    wins, _ = _solve_flat(game, aut, [v0])
    return bool(wins[0])


def separating_winning_region(game: Game, aut: SafetyAutomaton, with_stats: bool = False):
    """All vertices from which Eve wins, via one multi-rooted product solve.

    Safety winning regions only depend on the forward cone of a vertex, so
    solving the product grown from every ``(v, initial)`` at once answers all
    start vertices together.
    """
    _check_alphabet(game, aut)
    roots = list(range(game.vertex_count))
    if not roots:
        return (frozenset(), {"product_states": 0, "product_edges": 0}) if with_stats else frozenset()
    if game.vertex_count * aut.state_count <= _OBJECT_PATH_LIMIT:
        chain = _build_chained(game, aut, roots)
        region = solve_safety(chain.game)
        wins = frozenset(v for v in roots if chain.product_vertex(v, aut.initial) in region.eve_wins)
        stats = {
            "product_states": chain.game.vertex_count,
            "product_edges": chain.game.graph.edge_count,
            "automaton_states": aut.state_count,
        }
    else:
        flags, stats = _solve_flat(game, aut, roots)
        wins = frozenset(v for v, f in zip(roots, flags) if f)
    return (wins, stats) if with_stats else wins


# ---------------------------------------------------------------------------
# Induced graphs of automata
# ---------------------------------------------------------------------------


def _reduce_edges(alphabet: Objective, raw: list) -> list:
    """Collapse parallel transitions to representatives that preserve every
    cycle-structure check: exact priorities are kept, weights are minimized
    (componentwise for vectors) within each (source, priority, target) class.
    """
    if isinstance(alphabet, (Safety,)):
        return sorted({(u, None, v) for (u, c, v) in raw})
    if isinstance(alphabet, Parity):
        return sorted({(u, c, v) for (u, c, v) in raw})
    if isinstance(alphabet, MeanPayoff):
        best: dict = {}
        for u, w, v in raw:
            key = (u, v)
            if key not in best or w < best[key]:
                best[key] = w
        return sorted((u, w, v) for (u, v), w in best.items())
    if isinstance(alphabet, ParityOrMeanPayoff):
        best = {}
        for u, (p, w), v in raw:
            key = (u, p, v)
            if key not in best or w < best[key]:
                best[key] = w
        return sorted((u, (p, w), v) for (u, p, v), w in best.items())
    if isinstance(alphabet, MeanPayoffDisjunction):
        best = {}
        for u, vec, v in raw:
            key = (u, v)
            cur = best.get(key)
            best[key] = vec if cur is None else tuple(map(min, cur, vec))
        return sorted((u, vec, v) for (u, v), vec in best.items())
    raise InvalidGameError(f"unsupported alphabet {alphabet!r}")


def reachable_graph(aut: SafetyAutomaton) -> Graph:
    """Graph induced by the automaton, restricted to states reachable from the
    initial state and re-indexed densely in discovery order.

    Parallel transitions are collapsed to weight-minimal representatives; the
    reduction leaves every negative-cycle / odd-cycle verdict unchanged while
    keeping vector alphabets tractable.
    """
    out = _effective_outgoing(aut)
    index = {aut.initial: 0}
    order = [aut.initial]
    raw = []
    head = 0
    while head < len(order):
        q = order[head]
        head += 1
        for c, t in out(q):
            if t is None:
                continue
            if t not in index:
                index[t] = len(order)
                order.append(t)
            raw.append((index[q], c, index[t]))
    edges = _reduce_edges(aut.alphabet, raw)
    return Graph(len(order), tuple(edges))


def reachable_state_count(aut: SafetyAutomaton) -> int:
    return reachable_graph(aut).vertex_count


# ---------------------------------------------------------------------------
# DOT export
# ---------------------------------------------------------------------------


def _color_str(c: Color) -> str:
    if c is None:
        return "ε"
    if isinstance(c, tuple):
        return ",".join(str(x) for x in c)
    return str(c)


def automaton_dot(aut: SafetyAutomaton) -> str:
    """Graphviz rendering: states as nodes, transitions as labeled edges.
    Enumerates the reduced outgoing representatives of reachable states."""
    out = _effective_outgoing(aut)
    lines = ["digraph automaton {", "  rankdir=LR;"]
    index = {aut.initial: 0}
    order = [aut.initial]
    transitions = []
    head = 0
    while head < len(order):
        q = order[head]
        head += 1
        for c, t in out(q):
            if t is None:
                continue
            if t not in index:
                index[t] = len(order)
                order.append(t)
            transitions.append((q, c, t))
    for q in order:
        shape = "doublecircle" if q == aut.initial else "circle"
        lines.append(f'  q{q} [label="{aut.label(q)}", shape={shape}];')
    for q, c, t in transitions:
        lines.append(f'  q{q} -> q{t} [label="{_color_str(c)}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def chained_game_dot(chained: ChainedGame) -> str:
    """Graphviz rendering of a product game: Eve vertices are ellipses, Adam
    vertices boxes, and the losing sink a doubled octagon."""
    lines = ["digraph chained_game {"]
    for pid, pair in enumerate(chained.product_pairs):
        if pair is None:
            lines.append(f'  p{pid} [label="⊥", shape=doubleoctagon];')
            continue
        v, q = pair
        shape = "ellipse" if chained.game.owner[pid] is EVE else "box"
        lines.append(f'  p{pid} [label="{v},{q}", shape={shape}];')
    for u, _, v in chained.game.graph.edges:
        lines.append(f"  p{u} -> p{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
