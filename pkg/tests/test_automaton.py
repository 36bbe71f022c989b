import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import refs
from sepgames import (
    ADAM,
    EVE,
    AlphabetMismatchError,
    Game,
    Graph,
    MeanPayoff,
    SafetyAutomaton,
    Safety,
    accepts_all_paths,
    automaton_dot,
    chained_game,
    chained_game_dot,
    eve_wins_bruteforce,
    mp_separator,
    run,
    separating_winning_region,
    sequential_fold,
    sequential_product,
    solve_via_separating,
)
from sepgames.automaton import _solve_flat
from sepgames.frontend import build_separator, generate_game


def _table_automaton(states, initial, table, weight_bound=1):
    """Small automaton from an explicit (state, letter) -> state dict."""
    return SafetyAutomaton(
        state_count=states,
        initial=initial,
        alphabet=MeanPayoff(weight_bound),
        delta=lambda q, c: table.get((q, c)),
    )


@st.composite
def table_automata(draw, max_states=4):
    states = draw(st.integers(1, max_states))
    letters = [-1, 0, 1]
    table = {}
    for q in range(states):
        for c in letters:
            t = draw(st.integers(-1, states - 1))
            if t >= 0:
                table[(q, c)] = t
    return _table_automaton(states, draw(st.integers(0, states - 1)), table)


# ---------------------------------------------------------------------------
# run
# ---------------------------------------------------------------------------


def test_empty_word_stays_at_initial():
    aut = mp_separator(3, 2)
    assert run(aut, []) == aut.initial == 4


def test_total_one_state_loop():
    aut = _table_automaton(1, 0, {(0, c): 0 for c in (-1, 0, 1)})
    assert run(aut, [0, 1, -1, 1]) == 0


def test_counter_rejects_after_draining():
    aut = mp_separator(3, 2)
    assert run(aut, [-2, -2]) == 0
    assert run(aut, [-2, -2, -1]) is None


def test_run_rejects_foreign_letters():
    aut = mp_separator(2, 1)
    with pytest.raises(AlphabetMismatchError):
        run(aut, [2])


# ---------------------------------------------------------------------------
# accepts_all_paths
# ---------------------------------------------------------------------------


def test_accepts_everything_on_edgeless_graph():
    assert accepts_all_paths(mp_separator(2, 1), Graph(3, []))


def test_zero_loop_accepted_by_counter():
    assert accepts_all_paths(mp_separator(2, 1), Graph(1, [(0, 0, 0)]))


def test_negative_loop_rejected_by_counter():
    assert not accepts_all_paths(mp_separator(2, 1), Graph(1, [(0, -1, 0)]))


# ---------------------------------------------------------------------------
# sequential product and fold
# ---------------------------------------------------------------------------


def test_forced_jump_then_loop():
    reject_all = _table_automaton(1, 0, {})
    loop = _table_automaton(1, 0, {(0, c): 0 for c in (-1, 0, 1)})
    prod = sequential_product(reject_all, loop)
    assert prod.state_count == 2
    # first letter jumps into the loop copy, everything after stays there
    assert run(prod, [0]) == 1
    assert run(prod, [0, 1, -1]) == 1


def test_singleton_fold_is_identity():
    aut = mp_separator(2, 1)
    assert sequential_fold([aut]) is aut


def test_two_counters_absorb_two_hits_each():
    aut = sequential_product(mp_separator(2, 1), mp_separator(2, 1))
    # init 1 -> 0 -> jump; then 1 -> 0 -> undefined at the fourth letter
    assert run(aut, [-1]) == 0
    assert run(aut, [-1, -1]) == 2 + 1  # second copy's initial (offset 2, counter 1)
    assert run(aut, [-1, -1, -1]) == 2 + 0
    assert run(aut, [-1, -1, -1, -1]) is None


def test_fold_sizes_add():
    parts = [mp_separator(3, 1), mp_separator(4, 1), mp_separator(5, 1)]
    assert sequential_fold(parts).state_count == sum(p.state_count for p in parts)


def test_fold_rejects_empty_and_mixed_alphabets():
    with pytest.raises(ValueError):
        sequential_fold([])
    with pytest.raises(AlphabetMismatchError):
        sequential_product(mp_separator(2, 1), mp_separator(2, 2))


def test_product_flattening_matches_pairwise_nesting():
    a, b, c = mp_separator(2, 1), mp_separator(3, 1), mp_separator(2, 1)
    left = sequential_product(sequential_product(a, b), c)
    right = sequential_product(a, sequential_product(b, c))
    rng = random.Random(4)
    for _ in range(300):
        word = [rng.randint(-1, 1) for _ in range(rng.randint(0, 12))]
        assert run(left, word) == run(right, word)


@settings(max_examples=200, deadline=None)
@given(table_automata(), table_automata(), st.lists(st.sampled_from([-1, 0, 1]), max_size=10))
def test_product_language_is_staged_simulation(a1, a2, word):
    prod = sequential_product(a1, a2)
    assert (run(prod, word) is not None) == refs.staged_run_defined(a1, a2, word)


def test_chain_runs_eventually_settle_in_one_copy():
    # block index never decreases along transitions, so every cycle (hence
    # every lasso's loop) stays inside a single copy
    aut = sequential_fold([mp_separator(3, 1)] * 4)
    offsets = []
    acc = 0
    for part in aut.parts:
        offsets.append(acc)
        acc += part.state_count

    def block(state):
        return max(i for i, off in enumerate(offsets) if off <= state)

    for q in range(aut.state_count):
        for c in (-1, 0, 1):
            t = aut.delta(q, c)
            if t is not None:
                assert block(t) >= block(q)
    rng = random.Random(9)
    from sepgames import reachable_graph

    g = reachable_graph(aut)
    for _ in range(200):
        lasso = refs.sample_lasso(rng, g, rng.randrange(g.vertex_count))
        if lasso is None:
            continue
        _, _, cycle_vs, _ = lasso
        assert len({block(v) for v in cycle_vs}) <= 1  # reindexed ids keep order


# ---------------------------------------------------------------------------
# chained game
# ---------------------------------------------------------------------------


def test_chained_total_automaton_omits_bottom():
    game = Game(Graph(1, [(0, 0, 0)]), (EVE,), MeanPayoff(1))
    loop = _table_automaton(1, 0, {(0, c): 0 for c in (-1, 0, 1)})
    chain = chained_game(game, loop, 0)
    assert chain.game.vertex_count == 1
    assert chain.bottom is None
    assert chain.game.graph.edges == ((0, None, 0),)


def test_chained_undefined_goes_to_bottom():
    game = Game(Graph(1, [(0, 0, 0)]), (EVE,), MeanPayoff(1))
    never = _table_automaton(1, 0, {})
    chain = chained_game(game, never, 0)
    assert chain.bottom is not None
    bottom = chain.bottom
    assert chain.game.graph.edges == ((0, None, bottom),)
    assert chain.game.owner[bottom] is EVE
    assert chain.game.graph.is_sink(bottom)


def test_chained_size_bound_and_edge_origins():
    rng = random.Random(31)
    for _ in range(60):
        n = rng.randint(1, 5)
        game = generate_game(n, 0, 3, MeanPayoff(2), seed=rng.randrange(10**9))
        aut = mp_separator(n, 2)
        chain = chained_game(game, aut, 0)
        assert chain.game.vertex_count <= n * aut.state_count + 1
        # ownership is inherited from the game component
        for pid, pair in enumerate(chain.product_pairs):
            if pair is not None:
                assert chain.game.owner[pid] == game.owner[pair[0]]
        # each product edge is induced by the recorded game edge
        for (src, _, dst), origin in zip(chain.game.graph.edges, chain.edge_origin):
            u, c, v = game.graph.edges[origin]
            sv, sq = chain.product_pairs[src]
            assert sv == u
            t = aut.delta(sq, c)
            if t is None:
                assert dst == chain.bottom
            else:
                assert chain.product_pairs[dst] == (v, t)


# ---------------------------------------------------------------------------
# solve_via_separating
# ---------------------------------------------------------------------------


def test_solve_matches_strategy_enumeration_on_loops():
    win = Game(Graph(1, [(0, 0, 0)]), (EVE,), MeanPayoff(1))
    lose = Game(Graph(1, [(0, -1, 0)]), (EVE,), MeanPayoff(1))
    adam = Game(Graph(1, [(0, 1, 0), (0, -1, 0)]), (ADAM,), MeanPayoff(1))
    aut = mp_separator(1, 1)
    for game, expected in ((win, True), (lose, False), (adam, False)):
        assert solve_via_separating(game, 0, aut) == expected == eve_wins_bruteforce(game, 0)


def test_solve_rejects_alphabet_mismatch():
    game = Game(Graph(1, [(0, 0, 0)]), (EVE,), MeanPayoff(1))
    with pytest.raises(AlphabetMismatchError):
        solve_via_separating(game, 0, mp_separator(1, 2))


def test_flat_and_object_paths_agree():
    rng = random.Random(13)
    for kind in ("parity", "mp", "parity-mp", "disj-mp"):
        from conftest import random_objective

        for _ in range(40):
            n = rng.randint(1, 6)
            obj = random_objective(rng, kind)
            game = generate_game(n, 0, 3, obj, seed=rng.randrange(10**9))
            aut = build_separator(obj, n)
            flags, stats = _solve_flat(game, aut, list(range(n)))
            flat_region = frozenset(v for v in range(n) if flags[v])
            assert flat_region == separating_winning_region(game, aut)
            assert stats["product_states"] <= n * aut.state_count + 1


def test_parity_reduction_matches_recursive_solver_at_medium_scale():
    # independent cross-check far beyond brute-force reach
    rng = random.Random(515)
    for _ in range(25):
        n = rng.randint(2, 22)
        d = rng.randint(1, 5)
        from sepgames import Parity

        game = generate_game(n, 0, 3, Parity(d), seed=rng.randrange(10**9))
        aut = build_separator(game.objective, n)
        assert separating_winning_region(game, aut) == refs.zielonka_region(game)


def test_mp_reduction_matches_value_iteration_at_medium_scale():
    rng = random.Random(516)
    for _ in range(25):
        n = rng.randint(2, 40)
        game = generate_game(n, 0, 3, MeanPayoff(rng.randint(0, 3)), seed=rng.randrange(10**9))
        aut = build_separator(game.objective, n)
        assert separating_winning_region(game, aut) == refs.mp_value_iteration_region(game)


# ---------------------------------------------------------------------------
# DOT export
# ---------------------------------------------------------------------------


def test_automaton_dot_is_stable_and_complete():
    aut = mp_separator(2, 1)
    dot = automaton_dot(aut)
    assert dot == automaton_dot(aut)
    assert "doublecircle" in dot  # initial state highlighted
    assert dot.count("->") == sum(
        1 for q in range(aut.state_count) for c in (-1, 0, 1) if aut.delta(q, c) is not None
    )


def test_chained_game_dot_renders_bottom_as_double_octagon():
    game = Game(Graph(1, [(0, -1, 0)]), (ADAM,), MeanPayoff(1))
    chain = chained_game(game, mp_separator(1, 1), 0)
    dot = chained_game_dot(chain)
    assert "doubleoctagon" in dot
    assert "box" in dot  # Adam vertex
