"""Random Breaker in two interchangeable modes.

Uniform mode draws each move uniformly from the currently free edges.
Permutation mode shuffles all C(n,2) edges once up front and then claims
free edges in shuffled order.  The two produce identically distributed
play sequences against any fixed Maker strategy; permutation mode
additionally exposes the index bookkeeping that couples Breaker's graph
after round i to a uniform random graph with i*(b+1) edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .board import BREAKER, Board, ConsistencyError


def uniform_breaker_move(board: Board, rng) -> int:
    """One uniformly random free edge.  Does not claim it."""
    m = board.free_count
    if m == 0:
        raise ConsistencyError("breaker asked to move on a full board")
    return board.free_edges[rng.randrange(m)]


@dataclass
class PermutationState:
    """A shuffled edge order plus the scan cursor.

    last_taken_index[i] is the 0-based position in sigma of the last edge
    taken during round i+1; after round i it never exceeds i*(b+1) - 1.
    """

    sigma: list[int]
    cursor: int = 0
    last_taken_index: list[int] = field(default_factory=list)


def sample_permutation(rng, n_edges: int) -> PermutationState:
    """Uniform random permutation of all edge indices (Fisher-Yates)."""
    sigma = list(range(n_edges))
    rng.shuffle(sigma)
    return PermutationState(sigma)


def permutation_breaker_move(state: PermutationState, board: Board) -> int:
    """Next free edge in sigma order; advances the cursor past it."""
    sigma = state.sigma
    is_free = board.is_free
    c = state.cursor
    end = len(sigma)
    while c < end:
        e = sigma[c]
        c += 1
        if is_free(e):
            state.cursor = c
            return e
    raise ConsistencyError("permutation exhausted with free edges remaining")


class UniformBreaker:
    """Claims uniformly random free edges."""

    mode = "uniform"

    def start(self, board: Board, rng) -> None:
        pass

    def take_turn(self, board: Board, rng, moves: int) -> None:
        board.breaker_turn_uniform(moves, rng)


class PermutationBreaker:
    """Claims free edges in the order of a uniformly shuffled permutation."""

    mode = "perm"

    def __init__(self, track_rounds: bool = False):
        self.track_rounds = track_rounds
        self.state: PermutationState | None = None

    def start(self, board: Board, rng) -> None:
        self.state = sample_permutation(rng, board.total)

    def take_turn(self, board: Board, rng, moves: int) -> None:
        state = self.state
        sigma = state.sigma
        occ = board.occupancy
        c = state.cursor
        end = len(sigma)
        take = min(moves, board.free_count)
        last = -1
        for _ in range(take):
            while c < end and occ[sigma[c]]:
                c += 1
            if c >= end:
                raise ConsistencyError(
                    "permutation exhausted with free edges remaining"
                )
            last = c
            board.claim(BREAKER, sigma[c])
            c += 1
        state.cursor = c
        if self.track_rounds and last >= 0:
            state.last_taken_index.append(last)

    def round_index_violations(self, bias: int) -> int:
        """Rounds whose last taken sigma index reached i*(bias+1)."""
        state = self.state
        bad = 0
        for i, m_i in enumerate(state.last_taken_index, start=1):
            if m_i >= i * (bias + 1):
                bad += 1
        return bad
