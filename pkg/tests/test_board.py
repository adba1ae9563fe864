import json
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from halfgame import (
    Board,
    Game,
    GameConfig,
    GreedyMaker,
    IllegalMoveError,
    StopPolicy,
    UniformBreaker,
    edge_count,
    edge_endpoints,
    edge_index,
    run_game,
)
from halfgame.board import BREAKER, MAKER
from halfgame.harness import play_one


def test_edge_index_examples():
    assert edge_index(0, 1, 5) == 0
    assert edge_index(1, 3, 5) == 5
    assert edge_index(3, 4, 5) == 9 == edge_count(5) - 1


def test_edge_index_errors():
    with pytest.raises(ValueError):
        edge_index(2, 2, 5)
    with pytest.raises(ValueError):
        edge_index(0, 5, 5)
    with pytest.raises(ValueError):
        edge_index(-1, 2, 5)


def test_edge_index_is_lexicographic():
    n = 7
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    assert [edge_index(u, v, n) for u, v in pairs] == list(range(len(pairs)))


@given(st.integers(2, 60), st.data())
def test_edge_index_roundtrip(n, data):
    e = data.draw(st.integers(0, edge_count(n) - 1))
    u, v = edge_endpoints(e, n)
    assert 0 <= u < v < n
    assert edge_index(u, v, n) == e
    # order of arguments must not matter
    assert edge_index(v, u, n) == e


def test_claim_records_sequence():
    b = Board(4)
    b.claim(MAKER, 0)
    b.claim(BREAKER, 3)
    assert b.play_sequence() == [(0, MAKER), (3, BREAKER)]
    assert b.owner(0) == MAKER and b.owner(3) == BREAKER
    assert b.free_count == 4


def test_claim_twice_is_illegal():
    b = Board(4)
    b.claim(MAKER, 2)
    with pytest.raises(IllegalMoveError):
        b.claim(BREAKER, 2)


def test_claim_on_full_board_is_illegal():
    b = Board(3)
    for e in range(3):
        b.claim(BREAKER, e)
    with pytest.raises(IndexError):
        b.free_edges[0]
    with pytest.raises(IllegalMoveError):
        b.claim(MAKER, 0)


def test_smallest_free_edge_advances():
    b = Board(4)
    assert b.smallest_free_edge() == 0
    b.claim(MAKER, 0)
    b.claim(BREAKER, 2)
    assert b.smallest_free_edge() == 1
    b.claim(MAKER, 1)
    assert b.smallest_free_edge() == 3


def _run(cfg, record_sequence=False):
    return run_game(
        cfg,
        GreedyMaker(),
        UniformBreaker(),
        random.Random(cfg.seed),
        record_sequence=record_sequence,
    )


def test_breaker_truncation_fills_board_in_one_round():
    cfg = GameConfig(
        n=4, bias=5, game=Game.MINDEG1, seed=1,
        stop_policy=StopPolicy.PLAY_TO_FULL,
    )
    r = _run(cfg, record_sequence=True)
    assert r.rounds == 1
    assert r.board_full
    assert len(r.play_sequence) == edge_count(4)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_pm_hard_zero_move_budget(seed):
    # budget ceil(4950/121) = 41 < 50, so Maker can never own a matching
    cfg = GameConfig(
        n=100, bias=120, game=Game.PM, seed=seed,
        stop_policy=StopPolicy.PLAY_TO_FULL,
    )
    r = play_one(cfg, 0.45)
    assert r.outcome == "MakerLoss"
    assert r.maker_moves == 41 == math.ceil(4950 / 121)


@pytest.mark.parametrize("seed", [0, 1])
def test_ham_hard_zero_move_budget(seed):
    cfg = GameConfig(
        n=100, bias=75, game=Game.HAM, seed=seed,
        stop_policy=StopPolicy.PLAY_TO_FULL,
    )
    r = play_one(cfg, 0.45)
    assert r.outcome == "MakerLoss"
    assert r.maker_moves == 66 == math.ceil(4950 / 76)


def test_play_to_full_covers_every_edge():
    cfg = GameConfig(
        n=9, bias=3, game=Game.CONN, seed=5,
        stop_policy=StopPolicy.PLAY_TO_FULL,
    )
    r = _run(cfg, record_sequence=True)
    assert len(r.play_sequence) == edge_count(9)
    assert len({e for e, _ in r.play_sequence}) == edge_count(9)


def test_turn_schedule_owner_pattern():
    cfg = GameConfig(
        n=8, bias=3, game=Game.CONN, seed=9,
        stop_policy=StopPolicy.PLAY_TO_FULL,
    )
    r = _run(cfg, record_sequence=True)
    for i, (_, owner) in enumerate(r.play_sequence):
        expected = MAKER if i % (cfg.bias + 1) == 0 else BREAKER
        assert owner == expected


def test_replay_determinism():
    cfg = GameConfig(n=30, bias=4, game=Game.PM, seed=77)
    r1 = play_one(cfg, 0.45, record_sequence=True)
    r2 = play_one(cfg, 0.45, record_sequence=True)
    assert r1.to_json() == r2.to_json()
    assert r1.play_sequence == r2.play_sequence


@given(
    st.integers(4, 16),
    st.integers(1, 20),
    st.integers(0, 10_000),
)
@settings(max_examples=40, deadline=None)
def test_maker_move_budget_bound(n, bias, seed):
    cfg = GameConfig(
        n=n, bias=bias, game=Game.CONN, seed=seed,
        stop_policy=StopPolicy.PLAY_TO_FULL,
    )
    r = _run(cfg)
    assert r.maker_moves <= math.ceil(edge_count(n) / (bias + 1))
    assert r.maker_moves == math.ceil(edge_count(n) / (bias + 1))


def test_forfeit_keeps_claiming_smallest_free_edge():
    # n=50 makes the matching schedule degenerate, so the strategy forfeits
    # on move one and must then always take the smallest free edge.
    cfg = GameConfig(
        n=50, bias=6, game=Game.PM, seed=3,
        stop_policy=StopPolicy.PLAY_TO_FULL,
    )
    r = play_one(cfg, 0.45, record_sequence=True)
    assert r.forfeited and r.forfeit_stage == "S3"
    taken = set()
    for e, owner in r.play_sequence:
        if owner == MAKER:
            free_below = [x for x in range(e) if x not in taken]
            assert not free_below
        taken.add(e)


def test_game_record_json_shape():
    cfg = GameConfig(n=20, bias=2, game=Game.PM, seed=5)
    r = play_one(cfg, 0.45)
    out = json.loads(r.to_json())
    for key in (
        "outcome", "winRound", "makerMoves", "forfeited", "forfeitStage",
        "seed",
    ):
        assert key in out


def test_pm_requires_even_n():
    cfg = GameConfig(n=9, bias=2, game=Game.PM, seed=0)
    with pytest.raises(ValueError):
        cfg.validate()
