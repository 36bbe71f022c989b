from __future__ import annotations

import random

from hypothesis import strategies as st

from sepgames import (
    ADAM,
    EVE,
    Game,
    Graph,
    MeanPayoff,
    MeanPayoffDisjunction,
    Parity,
    ParityOrMeanPayoff,
    Safety,
)


@st.composite
def graphs(draw, max_vertices=8, color=st.integers(-3, 3), max_edges=16):
    """Random edge-colored graph with scalar colors by default."""
    n = draw(st.integers(1, max_vertices))
    possible = draw(
        st.lists(
            st.tuples(st.integers(0, n - 1), color, st.integers(0, n - 1)),
            max_size=max_edges,
            unique=True,
        )
    )
    return Graph(n, tuple(possible))


@st.composite
def safety_games(draw, max_vertices=7):
    n = draw(st.integers(1, max_vertices))
    edges = draw(
        st.lists(
            st.tuples(st.integers(0, n - 1), st.none(), st.integers(0, n - 1)),
            max_size=14,
            unique=True,
        )
    )
    owner = tuple(draw(st.sampled_from([EVE, ADAM])) for _ in range(n))
    return Game(Graph(n, tuple(edges)), owner, Safety())


def random_objective(rng: random.Random, kind: str):
    if kind == "parity":
        return Parity(rng.randint(1, 4))
    if kind == "mp":
        return MeanPayoff(rng.randint(0, 3))
    if kind == "parity-mp":
        return ParityOrMeanPayoff(rng.randint(1, 4), rng.randint(0, 3))
    if kind == "disj-mp":
        return MeanPayoffDisjunction(rng.randint(1, 3), rng.randint(0, 2))
    raise ValueError(kind)
