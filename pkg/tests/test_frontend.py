import io
import random
from contextlib import redirect_stderr, redirect_stdout

import pytest

from conftest import random_objective
from sepgames import (
    ADAM,
    EVE,
    Game,
    Graph,
    MeanPayoff,
    MeanPayoffDisjunction,
    Parity,
    ParityOrMeanPayoff,
    ParseError,
    Safety,
    cli,
    generate_game,
    parse_game,
    print_game,
)

MINIMAL = """sepgame 1
objective mp 1
vertices 1
vertex 0 E
edge 0 0 0
"""


def _run_cli(args):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = cli(args)
    return code, out.getvalue(), err.getvalue()


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def test_parse_minimal():
    game = parse_game(MINIMAL)
    assert game.vertex_count == 1
    assert game.objective == MeanPayoff(1)
    assert game.graph.edges == ((0, 0, 0),)
    assert game.owner == (EVE,)


def test_parse_pair_color_arity():
    text = "sepgame 1 objective parity-mp 4 10 vertices 1 vertex 0 A edge 0 0 2 -7"
    game = parse_game(text)
    assert game.graph.edges == ((0, (2, -7), 0),)


def test_parse_comments_and_whitespace():
    text = "sepgame 1  # header\n objective   mp 1\nvertices 1\nvertex 0 E # Eve\nedge 0 0 0\n"
    assert parse_game(text) == parse_game(MINIMAL)


def test_priority_out_of_bounds_is_positioned():
    text = "sepgame 1\nobjective parity 4\nvertices 1\nvertex 0 E\nedge 0 0 5\n"
    with pytest.raises(ParseError) as exc:
        parse_game(text)
    assert "priority 5 exceeds d=4" in str(exc.value)
    assert exc.value.line == 5 and exc.value.column == 10


def test_duplicate_edge_rejected():
    text = MINIMAL + "edge 0 0 0\n"
    with pytest.raises(ParseError) as exc:
        parse_game(text)
    assert "duplicate" in str(exc.value)


def test_id_out_of_range():
    text = "sepgame 1\nobjective mp 1\nvertices 1\nvertex 0 E\nedge 0 3 0\n"
    with pytest.raises(ParseError) as exc:
        parse_game(text)
    assert "out of range" in str(exc.value)


def test_wrong_arity_reported():
    text = "sepgame 1\nobjective parity-mp 2 2\nvertices 1\nvertex 0 E\nedge 0 0 1\nedge 0 0 1 1\n"
    with pytest.raises(ParseError) as exc:
        parse_game(text)
    assert "component" in str(exc.value)


def test_bad_token_reported():
    with pytest.raises(ParseError):
        parse_game("sepgame 2\n")
    with pytest.raises(ParseError):
        parse_game("sepgame 1\nobjective tetris\n")
    with pytest.raises(ParseError):
        parse_game("sepgame 1\nobjective mp 1\nvertices one\n")


def test_vertices_must_be_declared_in_order():
    text = "sepgame 1\nobjective mp 1\nvertices 2\nvertex 1 E\nvertex 0 E\n"
    with pytest.raises(ParseError) as exc:
        parse_game(text)
    assert "in order" in str(exc.value)


# ---------------------------------------------------------------------------
# Round trips
# ---------------------------------------------------------------------------


def test_print_parse_roundtrip_across_objectives():
    rng = random.Random(19)
    for kind in ("parity", "mp", "parity-mp", "disj-mp"):
        for _ in range(30):
            obj = random_objective(rng, kind)
            game = generate_game(rng.randint(1, 7), 0, 3, obj, seed=rng.randrange(10**9))
            text = print_game(game)
            reparsed = parse_game(text)
            assert reparsed == game
            assert print_game(reparsed) == text  # canonical form is stable


def test_safety_games_roundtrip():
    game = Game(Graph(2, [(0, None, 1), (1, None, 1)]), (EVE, ADAM), Safety())
    assert parse_game(print_game(game)) == game


# ---------------------------------------------------------------------------
# Generator
# ---------------------------------------------------------------------------


def test_generator_is_seed_deterministic():
    a = generate_game(6, 1, 3, ParityOrMeanPayoff(2, 2), seed=42)
    b = generate_game(6, 1, 3, ParityOrMeanPayoff(2, 2), seed=42)
    assert print_game(a) == print_game(b)
    c = generate_game(6, 1, 3, ParityOrMeanPayoff(2, 2), seed=43)
    assert print_game(a) != print_game(c)


def test_generator_degrees_in_range():
    game = generate_game(6, 1, 3, MeanPayoff(2), seed=7)
    degrees = [game.graph.out_degree(v) for v in range(6)]
    assert all(1 <= d <= 3 for d in degrees)


def test_generator_ownership_roughly_uniform():
    eve = total = 0
    for seed in range(1000):
        game = generate_game(6, 1, 2, MeanPayoff(1), seed=seed)
        eve += sum(1 for o in game.owner if o is EVE)
        total += 6
    assert abs(eve / total - 0.5) < 0.05


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------


def test_cli_solve_minimal(tmp_path):
    f = tmp_path / "min.game"
    f.write_text(MINIMAL)
    code, out, _ = _run_cli(["solve", "--input", str(f), "--from", "0"])
    assert code == 0 and out.strip() == "WIN"
    code, out, _ = _run_cli(["solve", "--input", str(f), "--from", "0", "--algo", "oracle"])
    assert code == 0 and out.strip() == "WIN"


def test_cli_solve_region_and_stats(tmp_path):
    f = tmp_path / "g.game"
    game = generate_game(5, 1, 2, Parity(2), seed=3)
    f.write_text(print_game(game))
    code, out, _ = _run_cli(
        ["solve", "--input", str(f), "--from", "0", "--region", "--stats"]
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] in ("WIN", "LOSE")
    assert lines[1].startswith("region:")
    assert any(line.startswith("product_states:") for line in lines)


def test_cli_algo_agreement(tmp_path):
    rng = random.Random(8)
    for kind in ("parity", "mp", "parity-mp", "disj-mp"):
        for _ in range(5):
            game = generate_game(rng.randint(1, 5), 0, 3, random_objective(rng, kind), seed=rng.randrange(10**9))
            f = tmp_path / "g.game"
            f.write_text(print_game(game))
            _, sep_out, _ = _run_cli(["solve", "--input", str(f), "--from", "0", "--region"])
            _, orc_out, _ = _run_cli(
                ["solve", "--input", str(f), "--from", "0", "--region", "--algo", "oracle"]
            )
            assert sep_out.splitlines()[:2] == orc_out.splitlines()[:2]


def test_cli_solve_safety_objective(tmp_path):
    f = tmp_path / "safe.game"
    f.write_text(
        "sepgame 1\nobjective safety\nvertices 3\n"
        "vertex 0 A\nvertex 1 E\nvertex 2 E\nedge 0 1\nedge 1 1\n"
    )
    for algo in ("separating", "oracle"):
        code, out, _ = _run_cli(["solve", "--input", str(f), "--from", "0", "--region", "--algo", algo])
        assert code == 0
        assert out.splitlines() == ["WIN", "region: 0 1"]


def test_cli_check_ok_and_parse_error(tmp_path):
    good = tmp_path / "good.game"
    good.write_text(MINIMAL)
    code, out, _ = _run_cli(["check", "--input", str(good)])
    assert code == 0 and out.startswith("ok:")

    bad = tmp_path / "bad.game"
    bad.write_text("sepgame 1\nobjective parity 4\nvertices 1\nvertex 0 E\nedge 0 0 5\n")
    code, _, err = _run_cli(["check", "--input", str(bad)])
    assert code == 2
    assert "line 5" in err and "column 10" in err


def test_cli_invariant_violation_exit_code(tmp_path):
    f = tmp_path / "min.game"
    f.write_text(MINIMAL)
    code, _, err = _run_cli(["solve", "--input", str(f), "--from", "5"])
    assert code == 3 and "out of range" in err


def test_cli_guard_exit_code(tmp_path):
    # oracle on a game with a huge strategy space
    game = generate_game(25, 3, 3, MeanPayoff(1), seed=1)
    f = tmp_path / "big.game"
    f.write_text(print_game(game))
    code, _, err = _run_cli(["solve", "--input", str(f), "--from", "0", "--algo", "oracle"])
    assert code == 4 and "strategy space" in err


def test_cli_automaton_stats_and_dot():
    code, out, _ = _run_cli(
        ["automaton", "--objective", "disj-mp", "--n", "4", "--d", "2", "--N", "1", "--emit", "stats"]
    )
    assert code == 0
    assert "states: 16" in out and "bound: 16" in out

    code, out, _ = _run_cli(
        ["automaton", "--objective", "parity", "--n", "3", "--d", "2", "--emit", "dot"]
    )
    assert code == 0 and out.startswith("digraph") and "doublecircle" in out

    code, out, _ = _run_cli(
        ["automaton", "--objective", "parity-mp", "--n", "2", "--d", "2", "--N", "1", "--emit", "stats"]
    )
    assert code == 0
    # (d+1) * |parity states| * |counter states| = 3 * 2 * 2
    assert "states: 12" in out and "bound: 12" in out


def test_cli_generate_writes_parseable_output(tmp_path):
    out_file = tmp_path / "gen.game"
    code, _, _ = _run_cli(
        [
            "generate", "--vertices", "5", "--objective", "disj-mp", "--d", "2",
            "--N", "1", "--seed", "11", "--output", str(out_file),
        ]
    )
    assert code == 0
    game = parse_game(out_file.read_text())
    assert game.vertex_count == 5
    assert game.objective == MeanPayoffDisjunction(2, 1)


def test_cli_bench_small_emits_table():
    code, out, _ = _run_cli(["bench", "--suite", "small"])
    assert code == 0
    lines = [line for line in out.splitlines() if line and not line.startswith("#")]
    assert lines[0].split("\t") == ["n", "d", "N", "states", "product_states", "ms"]
    assert len(lines) == 5
    for row in lines[1:]:
        assert len(row.split("\t")) == 6


def test_cli_usage_error_exit_code():
    code, _, _ = _run_cli(["solve"])  # missing required flags
    assert code == 2
