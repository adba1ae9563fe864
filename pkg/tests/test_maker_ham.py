import random

import pytest

from halfgame import (
    Board,
    Game,
    GameConfig,
    HamiltonCycleMaker,
    PathFamily,
    init_paths,
    pm_params,
    x_arrow,
)
from halfgame.board import BREAKER, MAKER, ConsistencyError
from halfgame.harness import play_one


def family_from(n, paths):
    fam = PathFamily(n)
    for p in paths:
        fam.add_path(list(p))
    return fam


def path_lists(fam):
    return sorted(tuple(p) for p in fam.paths.values())


def test_init_paths_from_matching():
    fam = init_paths([(0, 1), (2, 3)], 4)
    assert path_lists(fam) == [(0, 1), (2, 3)]
    assert all(len(p) == 2 for p in fam.paths.values())
    with pytest.raises(ValueError):
        init_paths([(0, 1)], 4)


def test_orientation_normalized():
    fam = family_from(6, [[5, 4, 0], [1, 2, 3]])
    assert path_lists(fam) == [(0, 4, 5), (1, 2, 3)]


def test_x_arrow_on_a_path():
    # family {0-1-2-3, 4-5}; only the edge (4,2) is open for vertex 4
    board = Board(6)
    fam = family_from(6, [[0, 1, 2, 3], [4, 5]])
    for x in (0, 1, 3):
        board.claim(BREAKER, board.edge(4, x))
    assert x_arrow(board, fam, 4) == {1}


def test_x_arrow_initial_vertices_contribute_nothing():
    fam = family_from(6, [[0, 1], [2, 3], [4, 5]])
    # fresh board: X_4 = {0, 1, 2, 3} ((4,5) is used); only 1 and 3 have
    # predecessors, and 5's predecessor would be 4 itself
    assert x_arrow(Board(6), fam, 4) == {0, 2}
    # restrict X_4 to path-initial vertices: nothing has a predecessor
    board = Board(6)
    for x in (1, 3):
        board.claim(BREAKER, board.edge(4, x))
    assert x_arrow(board, fam, 4) == set()


def test_x_arrow_size_lower_bound():
    rng = random.Random(5)
    n = 24
    for _ in range(40):
        vs = list(range(n))
        rng.shuffle(vs)
        cuts = sorted(rng.sample(range(2, n - 2), 5))
        paths, prev = [], 0
        for c in cuts + [n]:
            if c - prev >= 2:
                paths.append(vs[prev:c])
                prev = c
        covered = [v for p in paths for v in p]
        fam = family_from(n, paths) if len(covered) == n else None
        if fam is None:
            continue
        board = Board(n)
        for _ in range(60):
            e = board.free_edges[rng.randrange(board.free_count)]
            board.claim(BREAKER, e)
        for pid in list(fam.paths):
            a = fam.paths[pid][0]
            xa = [
                u for u in range(n)
                if u != a and board.occupancy[fam.eid(a, u)] != BREAKER
                and fam.eid(a, u) not in fam.used
            ]
            assert len(x_arrow(board, fam, a)) >= len(xa) - fam.count - 1


def test_stage1_join_example():
    board = Board(4)
    fam = family_from(4, [[0, 1], [2, 3]])
    maker = HamiltonCycleMaker(4, pm_params(4, 0.45))
    maker.family = fam
    plan = maker._plan_join(board)
    assert plan is not None
    (step,) = plan.steps
    assert step[1] == board.edge(0, 2)
    fam.apply_surgery([(0, 2)], [])
    assert path_lists(fam) == [(1, 0, 2, 3)]


def test_stage2_case2_surgery_matches_printed_result():
    # single shared path alpha = 0..5, beta = 6-7; splice at (v,u) = (2,3)
    # with b = 7: expected alpha_s..a_{j+1} a_j a_0 a_1 .. a_{j-1} b_s..b_0
    fam = family_from(8, [[0, 1, 2, 3, 4, 5], [6, 7]])
    fam.apply_surgery([(0, 3), (7, 2)], [(2, 3)])
    assert path_lists(fam) == [(5, 4, 3, 0, 1, 2, 7, 6)]


def test_stage2_case1_surgery_matches_printed_result():
    # alpha = 0-1, beta = 2-3, gamma = 4-5-6-7, splice at (v,u) = (5,6)
    fam = family_from(8, [[0, 1], [2, 3], [4, 5, 6, 7]])
    fam.apply_surgery([(0, 6), (3, 5)], [(5, 6)])
    assert path_lists(fam) == [(1, 0, 6, 7), (2, 3, 5, 4)]


def test_stage2_case3_surgery():
    # gamma = beta = 2-3-4-5 with b = 5, v = 3, u = 4, a = 0 on alpha 0-1:
    # result: alpha_s..alpha_0 beta_j..beta_s beta_{j-1}..beta_0
    fam = family_from(6, [[0, 1], [2, 3, 4, 5]])
    fam.apply_surgery([(0, 4), (5, 3)], [(3, 4)])
    assert path_lists(fam) == [(1, 0, 4, 5, 3, 2)]


def test_surgery_then_inverse_restores_family():
    fam = family_from(8, [[0, 1], [2, 3], [4, 5, 6, 7]])
    before = path_lists(fam)
    fam.apply_surgery([(0, 6), (3, 5)], [(5, 6)])
    fam.apply_surgery([(5, 6)], [(0, 6), (3, 5)])
    assert path_lists(fam) == before


def test_surgery_rejects_bad_splices():
    fam = family_from(6, [[0, 1, 2], [3, 4, 5]])
    with pytest.raises(ConsistencyError):
        fam.apply_surgery([], [(0, 2)])  # not a path edge
    fam2 = family_from(6, [[0, 1, 2], [3, 4, 5]])
    with pytest.raises(ConsistencyError):
        fam2.apply_surgery([(0, 2)], [])  # closes a cycle
    fam3 = family_from(6, [[0, 1, 2], [3, 4, 5]])
    with pytest.raises(ConsistencyError):
        fam3.apply_surgery([(1, 3)], [])  # interior vertex degree 3


def test_plan_reduces_path_count_by_one():
    n = 100
    board = Board(n)
    maker = HamiltonCycleMaker(n, pm_params(n, 0.5))
    maker.start(board)
    rng = random.Random(17)
    counts = []
    while not maker.goal_reached and not maker.forfeited:
        board.claim(MAKER, maker.next_edge(board))
        if maker.family is not None:
            counts.append(maker.family.count)
        for _ in range(min(2, board.free_count)):
            board.claim(
                BREAKER, board.free_edges[rng.randrange(board.free_count)]
            )
    assert maker.goal_reached
    drops = [a - b for a, b in zip(counts, counts[1:]) if a != b]
    assert set(drops) == {1}
    assert counts[-1] == 0  # the closing move turns the last path into a cycle
    assert counts[-2] == 1


def test_cycle_certificate_emitted_and_valid():
    cfg = GameConfig(n=100, bias=4, game=Game.HAM, seed=12)
    r = play_one(cfg, 0.5, check_invariants=True)
    assert r.maker_won  # engine re-verified the certificate already


def test_stage4_closes_cycle_directly():
    n = 8
    board = Board(n)
    maker = HamiltonCycleMaker(n, pm_params(n, 0.5))
    maker.start(board)
    fam = family_from(n, [list(range(n))])
    maker.family = fam
    plan = maker._plan_close(board)
    assert plan is not None and plan.expect_cycle
    for kind, e in plan.steps:
        board.claim(MAKER, e)
    maker._complete_plan(board, plan)
    assert maker.goal_reached
    # path edges were not claimed in this synthetic setup, so check shape only
    assert len(maker.cycle) == n and set(maker.cycle) == set(range(n))


def test_odd_n_absorbs_lone_vertex():
    # n = 101 keeps the matching schedule meaningful, so the lone vertex is
    # absorbed by a real extra move before the path stages start
    cfg = GameConfig(n=101, bias=2, game=Game.CONN, seed=3)
    r = play_one(cfg, 0.5, check_invariants=True)
    assert r.maker_won and not r.forfeited


def test_full_game_paths_partition_all_rounds():
    for seed in (0, 5):
        cfg = GameConfig(n=120, bias=6, game=Game.HAM, seed=seed)
        r = play_one(cfg, 0.5, check_invariants=True)
        if r.maker_won:
            assert not r.forfeited


def test_exact_stage_arithmetic_n200():
    # stage 0: (200+76+56)/2 = 166; stages 1-4: (100-76) + 2(76-56) + 3*55 + 3
    expected = 166 + 24 + 40 + 165 + 3
    assert expected == 398
    wins = 0
    for seed in range(6):
        cfg = GameConfig(n=200, bias=10, game=Game.HAM, seed=seed)
        r = play_one(cfg, 0.5, check_invariants=True)
        if r.maker_won and not r.forfeited:
            wins += 1
            assert r.win_round == 398
    assert wins >= 4
