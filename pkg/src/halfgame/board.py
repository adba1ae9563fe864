"""Edge-indexed board state and the turn engine for (1:b) games on E(K_n).

Edges of the complete graph K_n are identified by their lexicographic rank:
edge {u, v} with u < v gets index  u*(2n - u - 1)//2 + (v - u - 1),  so
(0,1) -> 0, (0,2) -> 1, ..., (n-2, n-1) -> C(n,2)-1.  "Smallest edge" always
means smallest index under this convention.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from math import comb, isqrt

FREE = 0
MAKER = 1
BREAKER = 2

_OWNER_NAMES = {MAKER: "maker", BREAKER: "breaker"}


class IllegalMoveError(RuntimeError):
    """Raised when a claim targets a non-free edge. Always an engine bug."""


class ConsistencyError(RuntimeError):
    """Raised when an internal structure check fails. Always an engine bug."""


class ScopeError(ValueError):
    """Raised when an exact computation is refused because it would not fit
    the documented size guard."""


def edge_count(n: int) -> int:
    return comb(n, 2)


def edge_index(u: int, v: int, n: int) -> int:
    """Lexicographic rank of the pair {u, v} among all pairs of [0, n)."""
    if not (0 <= u < n and 0 <= v < n) or u == v:
        raise ValueError(f"invalid vertex pair ({u}, {v}) for n={n}")
    if u > v:
        u, v = v, u
    return u * (2 * n - u - 1) // 2 + (v - u - 1)


def edge_endpoints(e: int, n: int) -> tuple[int, int]:
    """Inverse of edge_index."""
    total = comb(n, 2)
    if not 0 <= e < total:
        raise ValueError(f"edge index {e} out of range for n={n}")
    # Solve for the row u: largest u with u*(2n-u-1)/2 <= e.
    rem = total - 1 - e
    t = (isqrt(8 * rem + 1) - 1) // 2
    u = n - 2 - t
    while u * (2 * n - u - 1) // 2 > e:
        u -= 1
    while (u + 1) * (2 * n - u - 2) // 2 <= e:
        u += 1
    v = e - u * (2 * n - u - 1) // 2 + u + 1
    return u, v


class Game(str, Enum):
    PM = "pm"
    HAM = "ham"
    CONN = "conn"
    MINDEG1 = "mindeg1"
    MINDEG2 = "mindeg2"


class BreakerMode(str, Enum):
    UNIFORM = "uniform"
    PERM = "perm"


class StopPolicy(str, Enum):
    STOP_AT_GOAL = "goal"
    PLAY_TO_FULL = "full"


#: Minimum number of edges in a winning structure, per game.
WINNING_SET_SIZE = {
    Game.PM: lambda n: n // 2,
    Game.HAM: lambda n: n,
    Game.CONN: lambda n: n - 1,
    Game.MINDEG1: lambda n: (n + 1) // 2,
    Game.MINDEG2: lambda n: n,
}


@dataclass
class GameConfig:
    n: int
    bias: int
    game: Game = Game.PM
    breaker_mode: BreakerMode = BreakerMode.UNIFORM
    seed: int = 0
    stop_policy: StopPolicy = StopPolicy.STOP_AT_GOAL

    def validate(self) -> None:
        if self.n < 3:
            raise ValueError("need n >= 3")
        if self.bias < 1:
            raise ValueError("need breaker bias >= 1")
        if self.game is Game.PM and self.n % 2:
            raise ValueError("perfect matching game requires even n")


@dataclass
class GameRecord:
    """Outcome summary of one game.

    win_round is the 1-based round in which Maker's graph first contained the
    target structure, or None.  maker_moves counts every edge Maker claimed,
    including filler moves after a forfeit.
    """

    outcome: str
    win_round: int | None
    maker_moves: int
    rounds: int
    forfeited: bool
    forfeit_stage: str | None
    seed: int
    doubles_planned: int = 0
    doubles_failed: int = 0
    triples_planned: int = 0
    triples_failed: int = 0
    board_full: bool = False
    perm_index_violations: int = 0
    play_sequence: list[tuple[int, int]] | None = field(default=None, repr=False)

    @property
    def maker_won(self) -> bool:
        return self.outcome == "MakerWin"

    def to_json_dict(self) -> dict:
        return {
            "outcome": self.outcome,
            "winRound": self.win_round,
            "makerMoves": self.maker_moves,
            "rounds": self.rounds,
            "forfeited": self.forfeited,
            "forfeitStage": self.forfeit_stage,
            "seed": self.seed,
            "doublesPlanned": self.doubles_planned,
            "doublesFailed": self.doubles_failed,
            "triplesPlanned": self.triples_planned,
            "triplesFailed": self.triples_failed,
            "boardFull": self.board_full,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


class Board:
    """Occupancy state of all C(n,2) edges plus the recorded play sequence.

    A board belongs to exactly one game.  Claims are never undone; the free
    edge pool is a dense array supporting O(1) uniform sampling and removal.
    """

    __slots__ = (
        "n", "total", "occupancy", "free_edges", "_free_pos",
        "sequence", "_min_free_cursor", "record_sequence",
    )

    def __init__(self, n: int, record_sequence: bool = True):
        if n < 2:
            raise ValueError("need n >= 2")
        self.n = n
        self.total = comb(n, 2)
        self.occupancy = bytearray(self.total)
        self.free_edges = list(range(self.total))
        self._free_pos = list(range(self.total))
        self.sequence: list[int] | None = [] if record_sequence else None
        self.record_sequence = record_sequence
        self._min_free_cursor = 0

    def edge(self, u: int, v: int) -> int:
        return edge_index(u, v, self.n)

    def endpoints(self, e: int) -> tuple[int, int]:
        return edge_endpoints(e, self.n)

    @property
    def free_count(self) -> int:
        return len(self.free_edges)

    def is_free(self, e: int) -> bool:
        return self.occupancy[e] == FREE

    def owner(self, e: int) -> int:
        return self.occupancy[e]

    def claim(self, owner: int, e: int) -> None:
        """Mark edge e as taken by owner.  The edge must be free."""
        if self.occupancy[e] != FREE:
            raise IllegalMoveError(
                f"edge {e} already owned by {_OWNER_NAMES[self.occupancy[e]]}"
            )
        self.occupancy[e] = owner
        free = self.free_edges
        pos = self._free_pos
        i = pos[e]
        last = free.pop()
        if last != e:
            free[i] = last
            pos[last] = i
        if self.sequence is not None:
            self.sequence.append(e if owner == BREAKER else -e - 1)

    def smallest_free_edge(self) -> int:
        """Lowest-index free edge.  Amortized O(1) over a game."""
        occ = self.occupancy
        c = self._min_free_cursor
        while occ[c] != FREE:
            c += 1
        self._min_free_cursor = c
        return c

    def breaker_turn_uniform(self, moves: int, rng) -> None:
        """Claim up to `moves` uniformly random free edges for Breaker.

        Equivalent to repeated single uniform draws; written as one loop so a
        full (1:b) turn costs one call.
        """
        free = self.free_edges
        pos = self._free_pos
        occ = self.occupancy
        seq = self.sequence
        # randrange delegates to _randbelow; bind it directly in this loop
        rr = getattr(rng, "_randbelow", rng.randrange)
        m = len(free)
        take = moves if moves < m else m
        for _ in range(take):
            i = rr(m)
            e = free[i]
            m -= 1
            last = free.pop()
            if i != m:
                free[i] = last
                pos[last] = i
            occ[e] = BREAKER
            if seq is not None:
                seq.append(e)

    def play_sequence(self) -> list[tuple[int, int]]:
        """Recorded claims as (edge, owner) pairs, in play order."""
        if self.sequence is None:
            raise ConsistencyError("board was created with recording disabled")
        return [
            (e, BREAKER) if e >= 0 else (-e - 1, MAKER) for e in self.sequence
        ]

    def maker_edges(self) -> list[int]:
        return [e for e in range(self.total) if self.occupancy[e] == MAKER]

    def breaker_edges(self) -> list[int]:
        return [e for e in range(self.total) if self.occupancy[e] == BREAKER]

    def dump_moves(self) -> str:
        """Play sequence as one "u-v:owner" token per line."""
        lines = []
        for e, owner in self.play_sequence():
            u, v = edge_endpoints(e, self.n)
            lines.append(f"{u}-{v}:{_OWNER_NAMES[owner]}")
        return "\n".join(lines)


def run_game(
    cfg: GameConfig,
    maker,
    breaker,
    rng,
    record_sequence: bool = False,
    check_invariants: bool = False,
) -> GameRecord:
    """Play one full (1:b) game, Maker moving first.

    Each round is one Maker move followed by up to `bias` Breaker moves,
    truncated when the board runs out.  Under STOP_AT_GOAL the game halts as
    soon as the win detector fires after a Maker move (Breaker moves cannot
    complete Maker structures), or as soon as Maker provably cannot reach the
    target any more; under PLAY_TO_FULL it continues until no free edge
    remains.
    """
    cfg.validate()
    board = Board(cfg.n, record_sequence=record_sequence)
    maker.start(board)
    breaker.start(board, rng)
    detector = make_detector(cfg.game, cfg.n)
    stop_at_goal = cfg.stop_policy is StopPolicy.STOP_AT_GOAL
    need = WINNING_SET_SIZE[cfg.game](cfg.n)
    b = cfg.bias

    rounds = 0
    maker_moves = 0
    maker_pairs: list[tuple[int, int]] = []
    win_round: int | None = None
    while board.free_count:
        rounds += 1
        e = maker.next_edge(board)
        board.claim(MAKER, e)
        maker_moves += 1
        maker_pairs.append(edge_endpoints(e, cfg.n))
        if check_invariants:
            maker.check_invariants(board)
        if win_round is None:
            if detector is not None:
                won = detector.add_edge(*maker_pairs[-1])
            else:
                won = maker.goal_reached
            if won:
                win_round = rounds
                _reverify_win(cfg, maker, maker_pairs)
                if stop_at_goal:
                    break
        if stop_at_goal and win_round is None:
            # Loss is certain once Maker's final edge count cannot reach the
            # winning-set size, and (for certificate-detected games) once the
            # strategy has forfeited.
            budget = maker_moves + (board.free_count + b) // (b + 1)
            if budget < need or (detector is None and maker.forfeited):
                break
        if not board.free_count:
            break
        breaker.take_turn(board, rng, b)

    doubles_planned, doubles_failed, triples_planned, triples_failed = (
        maker.plan_counters()
    )
    outcome = "MakerWin" if win_round is not None else "MakerLoss"
    return GameRecord(
        outcome=outcome,
        win_round=win_round,
        maker_moves=maker_moves,
        rounds=rounds,
        forfeited=maker.forfeited,
        forfeit_stage=maker.forfeit_stage,
        seed=cfg.seed,
        doubles_planned=doubles_planned,
        doubles_failed=doubles_failed,
        triples_planned=triples_planned,
        triples_failed=triples_failed,
        board_full=board.free_count == 0,
        play_sequence=board.play_sequence() if record_sequence else None,
    )


def _reverify_win(cfg: GameConfig, maker, maker_pairs) -> None:
    """Confirm a detected win from Maker's edge list alone; a refuted win is
    an engine bug, never a game outcome."""
    from . import verify

    g = verify.SimpleGraph.from_pairs(cfg.n, maker_pairs)
    cycle = getattr(maker, "cycle", None)
    if not verify.check_win(cfg.game.value, g, cycle):
        raise ConsistencyError(
            f"recorded {cfg.game.value} win failed independent verification"
        )


class _CounterDetector:
    """Exact O(1)-per-edge win detection from vertex degree counters."""

    __slots__ = ("need_degree", "deficient", "degree")

    def __init__(self, n: int, need_degree: int):
        self.need_degree = need_degree
        self.deficient = n
        self.degree = [0] * n

    def add_edge(self, u: int, v: int) -> bool:
        deg = self.degree
        for x in (u, v):
            deg[x] += 1
            if deg[x] == self.need_degree:
                self.deficient -= 1
        return self.deficient == 0


class _ConnectivityDetector:
    """Union-find over Maker's edges; wins when one component spans [0, n)."""

    __slots__ = ("parent", "components", "touched", "untouched")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.components = 0
        self.touched = [False] * n
        self.untouched = n

    def _find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def add_edge(self, u: int, v: int) -> bool:
        for x in (u, v):
            if not self.touched[x]:
                self.touched[x] = True
                self.components += 1
                self.untouched -= 1
        ru, rv = self._find(u), self._find(v)
        if ru != rv:
            self.parent[ru] = rv
            self.components -= 1
        return self.components == 1 and self.untouched == 0


class _MatchingDetector:
    """Exact perfect-matching detection, incremental over edge insertions.

    Cheap greedy growth while any vertex is still isolated (a perfect
    matching is impossible then); once every vertex is covered, augments the
    maintained matching to maximum after each insertion.
    """

    __slots__ = ("n", "finder", "isolated", "degree", "won")

    def __init__(self, n: int):
        from .verify import MatchingFinder

        self.n = n
        self.finder = MatchingFinder(n)
        self.isolated = n
        self.degree = [0] * n
        self.won = False

    def add_edge(self, u: int, v: int) -> bool:
        if self.won:
            return True
        deg = self.degree
        for x in (u, v):
            deg[x] += 1
            if deg[x] == 1:
                self.isolated -= 1
        f = self.finder
        f.add_edge(u, v)
        if f.match[u] < 0 and f.match[v] < 0:
            f.match[u] = v
            f.match[v] = u
            f.size += 1
        if self.isolated == 0 and f.size < self.n // 2:
            f.augment_to_maximum()
        self.won = f.size == self.n // 2
        return self.won


def make_detector(game: Game, n: int):
    """Strategy-blind incremental win detector, or None when detection is by
    strategy certificate only (Hamiltonicity: exact online detection is not
    tractable, so a win is the strategy completing its cycle, which the
    caller re-verifies)."""
    if game is Game.PM:
        return _MatchingDetector(n)
    if game is Game.MINDEG1:
        return _CounterDetector(n, 1)
    if game is Game.MINDEG2:
        return _CounterDetector(n, 2)
    if game is Game.CONN:
        return _ConnectivityDetector(n)
    return None
