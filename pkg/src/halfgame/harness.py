"""Trial farming, bias sweeps, threshold estimation, and exact small-board
distribution tests.

Reproducibility: the game for trial j of a batch uses seed
splitmix64(batch_seed, j), and a sweep gives bias point b the batch seed
splitmix64(master_seed, b).  Aggregation is order-independent, so results
do not depend on the worker pool size.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import comb, floor, sqrt

from .board import (
    BREAKER,
    MAKER,
    Board,
    BreakerMode,
    ConsistencyError,
    Game,
    GameConfig,
    GameRecord,
    ScopeError,
    StopPolicy,
    run_game,
)
from .breaker import PermutationBreaker, UniformBreaker
from .maker_ham import HamiltonCycleMaker
from .maker_pm import PerfectMatchingMaker, pm_params
from .strategy import GreedyMaker

import random

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

#: Versioned sweep CSV header; columns are fixed and documented in README.
CSV_HEADER = "bias,trials,wins,winRate,wilsonLo,wilsonHi,roundsMean,roundsMax,forfeits"
SWEEP_SCHEMA = "halfgame-sweep-v1"

_WILSON_Z = 1.959963984540054  # 95% two-sided


def derive_seed(master: int, index: int) -> int:
    """SplitMix64 finalizer over (master, index); documented and stable."""
    z = (master + _GOLDEN * (index + 1)) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def wilson_interval(wins: int, trials: int) -> tuple[float, float]:
    """95% Wilson score interval for a binomial proportion."""
    if trials == 0:
        return (0.0, 1.0)
    z = _WILSON_Z
    phat = wins / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = (
        z * sqrt(phat * (1.0 - phat) / trials + z * z / (4 * trials * trials))
        / denom
    )
    lo = 0.0 if wins == 0 else max(0.0, center - half)
    hi = 1.0 if wins == trials else min(1.0, center + half)
    return (lo, hi)


def make_maker(game: Game, n: int, epsilon: float):
    """Strategy instance for one game: the matching builder for the perfect
    matching / degree-1 games, the cycle builder for the rest."""
    params = pm_params(n, epsilon)
    if game is Game.PM or (game is Game.MINDEG1 and n % 2 == 0):
        return PerfectMatchingMaker(n, params)
    return HamiltonCycleMaker(n, params)


def make_breaker(mode: BreakerMode, track_rounds: bool = False):
    if mode is BreakerMode.UNIFORM:
        return UniformBreaker()
    return PermutationBreaker(track_rounds=track_rounds)


def play_one(
    cfg: GameConfig,
    epsilon: float,
    record_sequence: bool = False,
    check_invariants: bool = False,
    track_perm_rounds: bool = False,
) -> GameRecord:
    """One game from its config; convenience wrapper used by CLI and harness."""
    maker = make_maker(cfg.game, cfg.n, epsilon)
    breaker = make_breaker(cfg.breaker_mode, track_rounds=track_perm_rounds)
    rng = random.Random(cfg.seed)
    record = run_game(
        cfg,
        maker,
        breaker,
        rng,
        record_sequence=record_sequence,
        check_invariants=check_invariants,
    )
    if track_perm_rounds and isinstance(breaker, PermutationBreaker):
        record.perm_index_violations = breaker.round_index_violations(cfg.bias)
    return record


@dataclass
class TrialStats:
    """Aggregate over independent trials at one (game, n, bias) point."""

    bias: int
    trials: int
    wins: int
    win_rate: float
    wilson_lo: float
    wilson_hi: float
    rounds_mean: float | None
    rounds_max: int | None
    forfeits: int
    forfeit_by_stage: dict[str, int] = field(default_factory=dict)
    doubles_planned: int = 0
    doubles_failed: int = 0
    triples_planned: int = 0
    triples_failed: int = 0
    perm_index_violations: int = 0

    def to_json_dict(self) -> dict:
        return {
            "bias": self.bias,
            "trials": self.trials,
            "wins": self.wins,
            "winRate": self.win_rate,
            "wilsonLo": self.wilson_lo,
            "wilsonHi": self.wilson_hi,
            "roundsMean": self.rounds_mean,
            "roundsMax": self.rounds_max,
            "forfeits": self.forfeits,
            "forfeitByStage": dict(sorted(self.forfeit_by_stage.items())),
            "doublesPlanned": self.doubles_planned,
            "doublesFailed": self.doubles_failed,
            "triplesPlanned": self.triples_planned,
            "triplesFailed": self.triples_failed,
            "permIndexViolations": self.perm_index_violations,
        }


def _trial_payload(cfg: GameConfig, epsilon: float, flags: tuple[bool, bool]):
    return (
        cfg.game.value, cfg.n, cfg.bias, cfg.breaker_mode.value,
        cfg.stop_policy.value, cfg.seed, epsilon, flags[0], flags[1],
    )


def _run_trial(payload) -> tuple:
    game, n, bias, mode, stop, seed, epsilon, check, track = payload
    cfg = GameConfig(
        n=n, bias=bias, game=Game(game), breaker_mode=BreakerMode(mode),
        seed=seed, stop_policy=StopPolicy(stop),
    )
    r = play_one(
        cfg, epsilon, check_invariants=check, track_perm_rounds=track
    )
    return (
        r.maker_won,
        r.win_round,
        r.forfeited,
        r.forfeit_stage,
        r.doubles_planned,
        r.doubles_failed,
        r.triples_planned,
        r.triples_failed,
        getattr(r, "perm_index_violations", 0),
    )


def run_trials(
    cfg: GameConfig,
    trials: int,
    master_seed: int,
    epsilon: float = 0.45,
    workers: int = 1,
    check_invariants: bool = False,
    track_perm_rounds: bool = False,
) -> TrialStats:
    """`trials` independent games with per-trial derived seeds."""
    if trials < 1:
        raise ValueError("need at least one trial")
    flags = (check_invariants, track_perm_rounds)
    payloads = []
    for j in range(trials):
        c = GameConfig(
            n=cfg.n, bias=cfg.bias, game=cfg.game,
            breaker_mode=cfg.breaker_mode,
            seed=derive_seed(master_seed, j), stop_policy=cfg.stop_policy,
        )
        payloads.append(_trial_payload(c, epsilon, flags))
    if workers > 1:
        from multiprocessing import Pool

        with Pool(workers) as pool:
            results = pool.map(_run_trial, payloads, chunksize=8)
    else:
        results = [_run_trial(p) for p in payloads]

    wins = 0
    win_rounds: list[int] = []
    forfeits = 0
    by_stage: dict[str, int] = {}
    dp = df = tp = tf = viol = 0
    for won, wr, forf, stage, d1, d2, t1, t2, v in results:
        if won:
            wins += 1
            win_rounds.append(wr)
        if forf:
            forfeits += 1
            by_stage[stage] = by_stage.get(stage, 0) + 1
        dp += d1
        df += d2
        tp += t1
        tf += t2
        viol += v
    lo, hi = wilson_interval(wins, trials)
    return TrialStats(
        bias=cfg.bias,
        trials=trials,
        wins=wins,
        win_rate=wins / trials,
        wilson_lo=lo,
        wilson_hi=hi,
        rounds_mean=(sum(win_rounds) / len(win_rounds)) if win_rounds else None,
        rounds_max=max(win_rounds) if win_rounds else None,
        forfeits=forfeits,
        forfeit_by_stage=by_stage,
        doubles_planned=dp,
        doubles_failed=df,
        triples_planned=tp,
        triples_failed=tf,
        perm_index_violations=viol,
    )


@dataclass
class SweepResult:
    game: Game
    n: int
    epsilon: float
    bias_grid: list[int]
    stats: list[TrialStats]
    estimated_threshold: float | None
    non_monotone: bool
    seed: int
    trials: int
    breaker_mode: BreakerMode

    def to_json_dict(self) -> dict:
        return {
            "schema": SWEEP_SCHEMA,
            "game": self.game.value,
            "n": self.n,
            "epsilon": self.epsilon,
            "biasGrid": self.bias_grid,
            "trials": self.trials,
            "seed": self.seed,
            "breakerMode": self.breaker_mode.value,
            "estimatedThreshold": self.estimated_threshold,
            "nonMonotoneFlag": self.non_monotone,
            "stats": [s.to_json_dict() for s in self.stats],
        }


def isotonic_decreasing(values: list[float], weights: list[float]) -> list[float]:
    """Weighted least-squares fit that never increases (pool adjacent
    violators)."""
    blocks: list[list[float]] = []  # [pooled value, weight, member count]
    for v, w in zip(values, weights):
        blocks.append([v, w, 1])
        while len(blocks) > 1 and blocks[-2][0] < blocks[-1][0]:
            v2, w2, c2 = blocks.pop()
            v1, w1, c1 = blocks.pop()
            blocks.append([(v1 * w1 + v2 * w2) / (w1 + w2), w1 + w2, c1 + c2])
    out: list[float] = []
    for v, _, c in blocks:
        out.extend([v] * int(c))
    return out


def estimate_threshold(grid: list[int], fitted: list[float]) -> float | None:
    """Bias where the monotone fit crosses winRate = 1/2, by linear
    interpolation (earliest touch when the fit sits exactly at 1/2); None
    when the curve does not straddle 1/2."""
    if len(grid) < 2:
        return None
    for i in range(len(grid) - 1):
        y0, y1 = fitted[i], fitted[i + 1]
        if y0 >= 0.5 >= y1:
            if y0 == y1:
                return (grid[i] + grid[i + 1]) / 2.0
            return grid[i] + (y0 - 0.5) * (grid[i + 1] - grid[i]) / (y0 - y1)
    return None


def bias_sweep(
    game: Game,
    n: int,
    epsilon: float,
    grid: list[int],
    trials: int,
    seed: int,
    workers: int = 1,
    breaker_mode: BreakerMode = BreakerMode.UNIFORM,
) -> SweepResult:
    total = comb(n, 2)
    if sorted(set(grid)) != list(grid):
        raise ValueError("bias grid must be strictly increasing")
    if grid and not (1 <= grid[0] and grid[-1] <= total):
        raise ValueError(f"bias grid must stay within [1, {total}]")
    stats = []
    for b in grid:
        cfg = GameConfig(n=n, bias=b, game=game, breaker_mode=breaker_mode)
        stats.append(
            run_trials(
                cfg, trials, derive_seed(seed, b), epsilon=epsilon,
                workers=workers,
            )
        )
    raw = [s.win_rate for s in stats]
    weights = [float(s.trials) for s in stats]
    fitted = isotonic_decreasing(raw, weights)
    half_widths = [(s.wilson_hi - s.wilson_lo) / 2 for s in stats]
    non_monotone = any(
        raw[i + 1] - raw[i] > half_widths[i] + half_widths[i + 1]
        for i in range(len(raw) - 1)
    )
    return SweepResult(
        game=game,
        n=n,
        epsilon=epsilon,
        bias_grid=list(grid),
        stats=stats,
        estimated_threshold=estimate_threshold(list(grid), fitted),
        non_monotone=non_monotone,
        seed=seed,
        trials=trials,
        breaker_mode=breaker_mode,
    )


def parse_bias_grid(text: str) -> list[int]:
    """start:stop:step, inclusive of stop when it lies on the step lattice."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError("bias grid must look like start:stop:step")
    start, stop, step = (int(p) for p in parts)
    if step < 1 or stop < start:
        raise ValueError("bias grid needs stop >= start and step >= 1")
    return list(range(start, stop + 1, step))


def trivial_bound(game: Game, n: int) -> int:
    """floor(C(n,2) / winning-set size) - 1: the largest bias at which
    Maker's move budget still covers one winning structure."""
    from .board import WINNING_SET_SIZE

    k = WINNING_SET_SIZE[game](n)
    return comb(n, 2) // k - 1


def write_sweep_csv(path: str, sweep: SweepResult) -> str:
    """Write the versioned CSV and its JSON sidecar; returns the sidecar path.

    Formats are fixed: UTF-8, header row exactly CSV_HEADER, rates with six
    decimals, roundsMean with three, empty cells when no trial won.
    """
    lines = [CSV_HEADER]
    for s in sweep.stats:
        rm = "" if s.rounds_mean is None else f"{s.rounds_mean:.3f}"
        rx = "" if s.rounds_max is None else str(s.rounds_max)
        lines.append(
            f"{s.bias},{s.trials},{s.wins},{s.win_rate:.6f},"
            f"{s.wilson_lo:.6f},{s.wilson_hi:.6f},{rm},{rx},{s.forfeits}"
        )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    sidecar = os.path.splitext(path)[0] + ".json"
    with open(sidecar, "w", encoding="utf-8") as fh:
        json.dump(sweep.to_json_dict(), fh, indent=2)
        fh.write("\n")
    return sidecar


# -- exact play-sequence distribution tests (small boards) --------------------


def _maker_position(j: int, bias: int) -> bool:
    """Is 1-based move j one of Maker's (Maker first, then bias Breaker moves)?"""
    return (j - 1) % (bias + 1) == 0


def _replay(n: int, bias: int, prefix: tuple[int, ...], maker_cls):
    """Fresh board and maker advanced through the given move prefix."""
    board = Board(n, record_sequence=False)
    maker = maker_cls()
    maker.start(board)
    for j, e in enumerate(prefix, start=1):
        if _maker_position(j, bias):
            chosen = maker.next_edge(board)
            if chosen != e:
                raise ConsistencyError("prefix is not consistent with maker")
            board.claim(MAKER, chosen)
        else:
            board.claim(BREAKER, e)
    return board, maker


def uniform_play_distribution(
    n: int, bias: int, m: int, maker_cls=GreedyMaker
) -> dict[tuple[int, ...], Fraction]:
    """Exact distribution of length-m play sequences when Breaker draws
    uniformly from the free edges: each realizable sequence has probability
    prod over Breaker positions j of 1/(C(n,2) - j + 1)."""
    total = comb(n, 2)
    out: dict[tuple[int, ...], Fraction] = {}
    stack: list[tuple[tuple[int, ...], Fraction]] = [((), Fraction(1))]
    while stack:
        prefix, prob = stack.pop()
        j = len(prefix) + 1
        if j > m:
            out[prefix] = out.get(prefix, Fraction(0)) + prob
            continue
        board, maker = _replay(n, bias, prefix, maker_cls)
        if _maker_position(j, bias):
            e = maker.next_edge(board)
            stack.append((prefix + (e,), prob))
        else:
            free = sorted(board.free_edges)
            share = Fraction(1, total - j + 1)
            for e in free:
                stack.append((prefix + (e,), prob * share))
    return out


def permutation_play_distribution(
    n: int, bias: int, m: int, maker_cls=GreedyMaker
) -> dict[tuple[int, ...], Fraction]:
    """Exact distribution of length-m play sequences when Breaker follows a
    uniformly random edge permutation, by enumerating all C(n,2)! of them."""
    total = comb(n, 2)
    counts: dict[tuple[int, ...], int] = {}
    n_perms = 0
    for sigma in permutations(range(total)):
        n_perms += 1
        board = Board(n, record_sequence=False)
        maker = maker_cls()
        maker.start(board)
        seq: list[int] = []
        cursor = 0
        while len(seq) < m:
            if _maker_position(len(seq) + 1, bias):
                e = maker.next_edge(board)
            else:
                while not board.is_free(sigma[cursor]):
                    cursor += 1
                e = sigma[cursor]
            board.claim(MAKER if _maker_position(len(seq) + 1, bias) else BREAKER, e)
            seq.append(e)
        key = tuple(seq)
        counts[key] = counts.get(key, 0) + 1
    return {k: Fraction(c, n_perms) for k, c in counts.items()}


def greedy_breaker_play_distribution(
    n: int, bias: int, m: int, maker_cls=GreedyMaker
) -> dict[tuple[int, ...], Fraction]:
    """Degenerate comparison distribution: Breaker always takes the smallest
    free edge (a deliberately non-uniform sampler)."""
    board = Board(n, record_sequence=False)
    maker = maker_cls()
    maker.start(board)
    seq: list[int] = []
    while len(seq) < m:
        if _maker_position(len(seq) + 1, bias):
            e = maker.next_edge(board)
            board.claim(MAKER, e)
        else:
            e = board.smallest_free_edge()
            board.claim(BREAKER, e)
        seq.append(e)
    return {tuple(seq): Fraction(1)}


def total_variation(
    p: dict[tuple[int, ...], Fraction], q: dict[tuple[int, ...], Fraction]
) -> Fraction:
    keys = set(p) | set(q)
    zero = Fraction(0)
    return sum((abs(p.get(k, zero) - q.get(k, zero)) for k in keys), zero) / 2


def equivalence_test(
    n: int,
    bias: int,
    rounds: int | None = None,
    maker_cls=GreedyMaker,
    breaker_model: str = "perm",
) -> Fraction:
    """Exact total-variation distance between the uniform-Breaker play
    sequence distribution and an alternative Breaker model over the first
    `rounds` rounds (full game when None).

    Exhaustive over all C(n,2)! permutations, so n <= 4 only, and the
    enumerated sequence space is capped at 10^5.
    """
    if n > 4:
        raise ScopeError("exact equivalence enumeration restricted to n <= 4")
    total = comb(n, 2)
    m = total if rounds is None else min(total, rounds * (bias + 1))
    space = 1
    for j in range(1, m + 1):
        if not _maker_position(j, bias):
            space *= total - j + 1
            if space > 10**5:
                raise ScopeError("play-sequence space exceeds the 10^5 guard")
    uni = uniform_play_distribution(n, bias, m, maker_cls)
    if breaker_model == "perm":
        other = permutation_play_distribution(n, bias, m, maker_cls)
    elif breaker_model == "greedy":
        other = greedy_breaker_play_distribution(n, bias, m, maker_cls)
    else:
        raise ValueError(f"unknown breaker model {breaker_model!r}")
    return total_variation(uni, other)


# -- batch diagnostics ---------------------------------------------------------


def play_rounds(
    n: int,
    bias: int,
    rounds: int,
    seed: int,
    epsilon: float = 0.45,
    game: Game = Game.PM,
):
    """Play a fixed number of rounds and return the final Board (diagnostic
    helper for looking at Breaker's graph mid-game)."""
    maker = make_maker(game, n, epsilon)
    breaker = UniformBreaker()
    rng = random.Random(seed)
    board = Board(n, record_sequence=False)
    maker.start(board)
    breaker.start(board, rng)
    for _ in range(rounds):
        if not board.free_count:
            break
        board.claim(MAKER, maker.next_edge(board))
        if not board.free_count:
            break
        breaker.take_turn(board, rng, bias)
    return board


def domination_check(
    n: int,
    bias: int,
    round_i: int,
    prop,
    trials: int,
    seed: int,
    epsilon: float = 0.45,
) -> dict:
    """Empirical check that Breaker's round-i graph is stochastically
    dominated by G(n, i*(b+1)) for a monotone increasing property."""
    from .verify import SimpleGraph, sample_gnm

    hits_game = 0
    for j in range(trials):
        board = play_rounds(n, bias, round_i, derive_seed(seed, j), epsilon)
        g = SimpleGraph(
            n, {e for e in range(board.total) if board.occupancy[e] == BREAKER}
        )
        if prop(g):
            hits_game += 1
    rng = random.Random(derive_seed(seed, 10**9))
    m = min(round_i * (bias + 1), comb(n, 2))
    hits_gnm = 0
    for _ in range(trials):
        if prop(sample_gnm(n, m, rng)):
            hits_gnm += 1
    p_game = hits_game / trials
    p_gnm = hits_gnm / trials
    se = sqrt(
        p_game * (1 - p_game) / trials + p_gnm * (1 - p_gnm) / trials
    )
    return {
        "pGame": p_game,
        "pGnm": p_gnm,
        "stderr": se,
        "dominated": p_game <= p_gnm + 3 * se,
    }


def breaker_property_diagnostics(
    n: int,
    epsilon: float,
    trials: int,
    seed: int,
    bias: int | None = None,
) -> dict:
    """Violation frequencies of the four random-graph properties that the
    strategy analysis relies on, measured on Breaker's graph after the
    scheduled number of rounds.

    At desk scale the schedule constants usually exceed n, making some
    properties vacuous and the board saturated; the output flags this
    rather than pretending the asymptotic regime is reachable.
    """
    from math import ceil as _ceil

    from .verify import (
        SimpleGraph,
        has_complete_bipartite,
        has_dense_kset,
        max_degree,
    )

    params = pm_params(n, epsilon)
    b = floor((1 - epsilon) * n) if bias is None else bias
    t = (n + params.k + params.l) // 2
    total = comb(n, 2)
    saturated = (b + 1) * t > total
    deg_cap = floor((1 - epsilon / 4) * n)
    bip_r = max(1, _ceil(epsilon * n / 8))
    bal_r = max(1, _ceil(epsilon * n / (32 * params.l)))

    counts = {"maxDegree": 0, "denseKSet": 0, "bipartite": 0, "balancedBipartite": 0}
    skipped = {key: False for key in counts}
    for j in range(trials):
        board = play_rounds(n, b, t, derive_seed(seed, j), epsilon)
        g = SimpleGraph(
            n, {e for e in range(board.total) if board.occupancy[e] == BREAKER}
        )
        if max_degree(g) > deg_cap:
            counts["maxDegree"] += 1
        try:
            if has_dense_kset(g, params.k):
                counts["denseKSet"] += 1
        except ScopeError:
            skipped["denseKSet"] = True
        try:
            if has_complete_bipartite(g, bip_r, params.l):
                counts["bipartite"] += 1
        except ScopeError:
            skipped["bipartite"] = True
        try:
            if has_complete_bipartite(g, bal_r, bal_r):
                counts["balancedBipartite"] += 1
        except ScopeError:
            skipped["balancedBipartite"] = True

    freqs = {key: counts[key] / trials for key in counts}
    return {
        "n": n,
        "epsilon": epsilon,
        "bias": b,
        "rounds": t,
        "k": params.k,
        "l": params.l,
        "saturated": saturated,
        "degreeCap": deg_cap,
        "bipartiteSides": [bip_r, params.l],
        "balancedSides": [bal_r, bal_r],
        "violationFrequency": freqs,
        "skipped": skipped,
        "trials": trials,
    }
