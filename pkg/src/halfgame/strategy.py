"""Shared Maker-strategy plumbing: committed move plans and the forfeit rule.

A plan is a short list of specific edges the strategy wants over its next
consecutive turns (single, double, or triple move).  The first edge of a
plan is free when planned; later ones can be stolen by Breaker in between,
which aborts the plan and forfeits.  A planned edge the strategy already
owns but does not use is adopted into the structure for free, and that turn
claims the smallest free edge instead.

By convention a strategy keeps playing after forfeiting (or after its goal
is complete): it claims the smallest-index free edge until the board fills.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .board import Board

CLAIM = 0
ADOPT = 1


@dataclass
class Plan:
    """Edges committed for the next one, two, or three turns.

    steps holds (CLAIM, edge) or (ADOPT, edge) entries in claim order; add
    and remove describe the structure update applied once the last step has
    been played.  expect_cycle marks the closing move of the cycle builder.
    """

    steps: list[tuple[int, int]]
    add: list[int] = field(default_factory=list)
    remove: list[int] = field(default_factory=list)
    expect_cycle: bool = False


class MakerStrategy:
    """Base class: plan execution, forfeit bookkeeping, move counters."""

    def __init__(self):
        self.forfeited = False
        self.forfeit_stage: str | None = None
        self.goal_reached = False
        self.doubles_planned = 0
        self.doubles_failed = 0
        self.triples_planned = 0
        self.triples_failed = 0
        self._plan: Plan | None = None
        self._step = 0

    # -- subclass surface -------------------------------------------------
    def start(self, board: Board) -> None:
        pass

    @property
    def stage(self) -> str:
        return "?"

    @property
    def done(self) -> bool:
        return self.goal_reached

    def _make_plan(self, board: Board) -> Plan | None:
        raise NotImplementedError

    def _complete_plan(self, board: Board, plan: Plan) -> None:
        pass

    def _on_claim(self, board: Board, e: int) -> None:
        pass

    def check_invariants(self, board: Board) -> None:
        pass

    def plan_counters(self) -> tuple[int, int, int, int]:
        """(doubles planned, doubles failed, triples planned, triples failed)."""
        return (
            self.doubles_planned,
            self.doubles_failed,
            self.triples_planned,
            self.triples_failed,
        )

    # -- engine surface ---------------------------------------------------
    def next_edge(self, board: Board) -> int:
        if self.forfeited or self.done:
            return self._filler(board)
        if self._plan is None:
            plan = self._make_plan(board)
            if plan is None:
                self._forfeit()
                return self._filler(board)
            self._plan = plan
            self._step = 0
            if len(plan.steps) == 2:
                self.doubles_planned += 1
            elif len(plan.steps) == 3:
                self.triples_planned += 1
        plan = self._plan
        kind, e = plan.steps[self._step]
        if kind == CLAIM:
            if not board.is_free(e):
                # Breaker occupied a reserved edge between our turns.
                if len(plan.steps) == 2:
                    self.doubles_failed += 1
                elif len(plan.steps) == 3:
                    self.triples_failed += 1
                self._plan = None
                self._forfeit()
                return self._filler(board)
            out = e
        else:
            # Already ours: start using it, spend the turn elsewhere.
            out = board.smallest_free_edge()
        self._step += 1
        if self._step == len(plan.steps):
            self._plan = None
            self._complete_plan(board, plan)
        self._on_claim(board, out)
        return out

    def _filler(self, board: Board) -> int:
        e = board.smallest_free_edge()
        self._on_claim(board, e)
        return e

    def _forfeit(self) -> None:
        if not self.forfeited:
            self.forfeited = True
            self.forfeit_stage = self.stage


class GreedyMaker(MakerStrategy):
    """Deterministic baseline: always claims the smallest free edge."""

    @property
    def stage(self) -> str:
        return "greedy"

    def _make_plan(self, board: Board) -> Plan:
        return Plan(steps=[(CLAIM, board.smallest_free_edge())])
