import random
from collections import Counter

import pytest
from scipy import stats

from halfgame import (
    Board,
    Game,
    GameConfig,
    edge_count,
    permutation_breaker_move,
    sample_permutation,
    uniform_breaker_move,
)
from halfgame.board import BREAKER, MAKER, ConsistencyError
from halfgame.breaker import PermutationState, UniformBreaker
from halfgame.harness import play_one, run_trials


def test_single_free_edge_is_forced():
    b = Board(3)
    b.claim(MAKER, 0)
    b.claim(BREAKER, 2)
    rng = random.Random(0)
    for _ in range(10):
        assert uniform_breaker_move(b, rng) == 1


def test_uniform_over_two_free_edges():
    rng = random.Random(42)
    counts = Counter()
    for _ in range(20_000):
        b = Board(3)
        b.claim(MAKER, 0)
        counts[uniform_breaker_move(b, rng)] += 1
    assert set(counts) == {1, 2}
    p = counts[1] / 20_000
    sigma = (0.25 / 20_000) ** 0.5
    assert abs(p - 0.5) <= 3 * sigma


def test_uniform_chi_square_over_14_free_edges():
    n = 6  # 15 edges, one claimed -> 14 free
    rng = random.Random(7)
    board = Board(n)
    board.claim(MAKER, 4)
    free = sorted(board.free_edges)
    counts = Counter()
    for _ in range(100_000):
        counts[uniform_breaker_move(board, rng)] += 1
    observed = [counts[e] for e in free]
    _, pvalue = stats.chisquare(observed)
    assert pvalue > 0.001


def test_empty_board_move_refused():
    b = Board(3)
    for e in range(3):
        b.claim(BREAKER, e)
    with pytest.raises(ConsistencyError):
        uniform_breaker_move(b, random.Random(0))


def test_sample_permutation_shape():
    rng = random.Random(1)
    state = sample_permutation(rng, edge_count(5))
    assert state.cursor == 0
    assert sorted(state.sigma) == list(range(10))


def test_permutation_uniformity_n3():
    rng = random.Random(3)
    counts = Counter()
    trials = 60_000
    for _ in range(trials):
        counts[tuple(sample_permutation(rng, 3).sigma)] += 1
    assert len(counts) == 6
    sigma = ((1 / 6) * (5 / 6) / trials) ** 0.5
    for perm, c in counts.items():
        assert abs(c / trials - 1 / 6) <= 3 * sigma, perm


def test_permutation_move_skips_taken_edges():
    b = Board(3)
    state = PermutationState(sigma=[0, 1, 2])
    b.claim(MAKER, 0)
    assert permutation_breaker_move(state, b) == 1
    assert state.cursor == 2


def test_permutation_move_identity_fresh_board():
    b = Board(3)
    state = PermutationState(sigma=[0, 1, 2])
    assert permutation_breaker_move(state, b) == 0
    assert state.cursor == 1


def test_permutation_exhaustion_is_engine_error():
    b = Board(3)
    state = PermutationState(sigma=[0, 1, 2], cursor=3)
    with pytest.raises(ConsistencyError):
        permutation_breaker_move(state, b)


def test_take_turn_matches_single_move_stream():
    """The batched uniform turn consumes the RNG exactly like repeated
    single uniform draws."""
    cfg_seed = 99
    b1 = Board(8)
    b2 = Board(8)
    rng1 = random.Random(cfg_seed)
    rng2 = random.Random(cfg_seed)
    breaker = UniformBreaker()
    for _ in range(4):
        breaker.take_turn(b1, rng1, 3)
        for _ in range(3):
            e = uniform_breaker_move(b2, rng2)
            b2.claim(BREAKER, e)
    assert b1.sequence == b2.sequence


def test_round_index_bound_small_games():
    # every Breaker edge by round i sits below position i*(b+1) in sigma
    for seed in range(50):
        cfg = GameConfig(
            n=30, bias=7, game=Game.PM, seed=seed,
            breaker_mode=__import__("halfgame").BreakerMode.PERM,
        )
        r = play_one(cfg, 0.45, track_perm_rounds=True)
        assert r.perm_index_violations == 0


def test_permutation_and_uniform_agree_on_win_rate():
    # crude distributional sanity: the two Breaker modes give similar win
    # rates on an easy game
    from halfgame import BreakerMode

    cfg_u = GameConfig(n=40, bias=2, game=Game.PM)
    cfg_p = GameConfig(
        n=40, bias=2, game=Game.PM, breaker_mode=BreakerMode.PERM
    )
    s_u = run_trials(cfg_u, 120, 5, epsilon=0.5)
    s_p = run_trials(cfg_p, 120, 5, epsilon=0.5)
    assert abs(s_u.win_rate - s_p.win_rate) < 0.25
