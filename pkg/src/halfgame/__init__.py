"""Biased Maker-Breaker games on K_n against a random Breaker.

Maker claims one edge per round, Breaker claims b uniformly random free
edges; the library provides deterministic Maker strategies that build a
perfect matching or a Hamilton cycle near the largest playable bias, a
Monte Carlo harness for estimating the empirical threshold bias, and
independent checkers for every win condition.
"""

from .board import (
    Board,
    BreakerMode,
    ConsistencyError,
    Game,
    GameConfig,
    GameRecord,
    IllegalMoveError,
    ScopeError,
    StopPolicy,
    edge_count,
    edge_endpoints,
    edge_index,
    run_game,
)
from .breaker import (
    PermutationBreaker,
    PermutationState,
    UniformBreaker,
    permutation_breaker_move,
    sample_permutation,
    uniform_breaker_move,
)
from .harness import (
    SweepResult,
    TrialStats,
    bias_sweep,
    derive_seed,
    equivalence_test,
    play_one,
    run_trials,
    trivial_bound,
    wilson_interval,
)
from .maker_ham import HamiltonCycleMaker, PathFamily, init_paths, x_arrow
from .maker_pm import PerfectMatchingMaker, StrategyParams, pm_params, x_plus, x_set
from .strategy import GreedyMaker, MakerStrategy
from .verify import (
    SimpleGraph,
    has_complete_bipartite,
    has_dense_kset,
    is_connected,
    is_hamiltonian,
    is_hamiltonian_cycle,
    is_perfect_matching,
    max_degree,
    max_matching_size,
    min_degree,
    sample_gnm,
)

__version__ = "0.1.0"
