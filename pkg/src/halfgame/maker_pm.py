"""Maker strategy for the perfect matching game.

The strategy maintains a matching M of Maker's graph and grows it by one
edge per completed plan, in three phases driven by |M|:

  single moves   while |M| < (n - k')/2   join two isolated vertices
  double moves   while |M| < (n - l)/2    length-3 augmenting path through
                                          one matching edge
  triple moves   while |M| < n/2          length-5 augmenting path through
                                          two matching edges

where k' = max(k, l + 2) guards the small-n regime in which the k and l
schedule parameters cross.  An edge is "vacant" when it is neither
Breaker's nor used in M; all tie-breaking is by smallest edge index or
smallest vertex, so play is a deterministic function of the board.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import ceil, log

from .board import BREAKER, FREE, Board, ConsistencyError, edge_endpoints
from .strategy import ADOPT, CLAIM, MakerStrategy, Plan


@dataclass(frozen=True)
class StrategyParams:
    """Schedule parameters derived from (n, epsilon)."""

    n: int
    epsilon: float
    p: float
    k: int
    l: int
    k_eff: int
    stage1_bound: int
    stage2_bound: int

    @property
    def ideal_rounds(self) -> int:
        """Maker moves used by a forfeit-free perfect-matching run (even n):
        (n + k' + l) / 2."""
        return (self.n + self.k_eff + self.l) // 2


def pm_params(n: int, epsilon: float) -> StrategyParams:
    """Evaluate the move-schedule parameters.

    p = 1 - eps/2,  k = 4*ceil(ln n / ln(1/p)),  l = 8*ceil(1/(eps*ln(1/p))).
    Bounds are floored and clamped so the stage thresholds are always
    well-ordered; at small n they may collapse to zero, in which case the
    strategy starts directly with triple moves (and typically forfeits, as
    the schedule is designed for large boards).
    """
    if not 0 < epsilon <= 0.5:
        raise ValueError("epsilon must be in (0, 1/2]")
    if n < 4:
        raise ValueError("need n >= 4")
    p = 1.0 - epsilon / 2.0
    log_inv_p = -log(p)
    k = 4 * ceil(log(n) / log_inv_p)
    l = 8 * ceil(1.0 / (epsilon * log_inv_p))
    if l % 2:
        raise ConsistencyError("l must be even by construction")
    k_eff = max(k, l + 2)
    stage1 = max(0, (n - k_eff) // 2)
    stage2 = max(stage1, (n - l) // 2)
    return StrategyParams(
        n=n, epsilon=epsilon, p=p, k=k, l=l, k_eff=k_eff,
        stage1_bound=stage1, stage2_bound=stage2,
    )


def x_set(board: Board, state: "PerfectMatchingMaker", a: int) -> set[int]:
    """Vertices u with edge au vacant (not Breaker's, not used in M)."""
    occ = board.occupancy
    m_set = state.m_set
    out = set()
    for u in range(board.n):
        if u == a:
            continue
        e = state.eid(a, u)
        if occ[e] != BREAKER and e not in m_set:
            out.add(u)
    return out


def x_plus(board: Board, state: "PerfectMatchingMaker", a: int) -> set[int]:
    """Matching partners of the members of x_set(a)."""
    partner = state.partner
    return {partner[u] for u in x_set(board, state, a) if partner[u] >= 0}


class PerfectMatchingMaker(MakerStrategy):
    """Deterministic Maker for the perfect matching game.

    Also used for the minimum-degree-1 game (odd n allowed there: the
    target is floor(n/2) matching edges and one vertex stays uncovered for
    the caller to absorb).
    """

    def __init__(self, n: int, params: StrategyParams):
        super().__init__()
        self.n = n
        self.params = params
        self.target = n // 2
        self.partner = [-1] * n
        self.m_edges: list[tuple[int, int, int]] = []  # (eid, u, v), sorted
        self.m_set: set[int] = set()
        self.degree = [0] * n
        self.isolated = list(range(n))
        # eid(u, v) = _rowbase[u] + v for u < v.
        self._rowbase = [u * (2 * n - u - 1) // 2 - u - 1 for u in range(n)]

    def eid(self, u: int, v: int) -> int:
        if u > v:
            u, v = v, u
        return self._rowbase[u] + v

    @property
    def matching_size(self) -> int:
        return len(self.m_edges)

    @property
    def matching_pairs(self) -> list[tuple[int, int]]:
        return [(u, v) for _, u, v in self.m_edges]

    @property
    def done(self) -> bool:
        return self.matching_size >= self.target

    @property
    def stage(self) -> str:
        m = self.matching_size
        if m >= self.target:
            return "Done"
        if m < self.params.stage1_bound:
            return "S1"
        if m < self.params.stage2_bound:
            return "S2"
        return "S3"

    # -- plan construction --------------------------------------------------
    def _make_plan(self, board: Board) -> Plan | None:
        stage = self.stage
        if stage == "S1":
            return self._plan_single(board)
        if stage == "S2":
            return self._plan_double(board)
        return self._plan_triple(board)

    def _plan_single(self, board: Board) -> Plan | None:
        """Smallest free edge joining two isolated vertices."""
        occ = board.occupancy
        iso = self.isolated
        rowbase = self._rowbase
        for i in range(len(iso) - 1):
            base = rowbase[iso[i]]
            for j in range(i + 1, len(iso)):
                e = base + iso[j]
                if occ[e] == FREE:
                    return Plan(steps=[(CLAIM, e)], add=[e])
        return None

    def _plan_double(self, board: Board) -> Plan | None:
        """Lowest matching edge uv admitting isolated a, b with au, bv free;
        claims au then bv, then swaps uv out of M for them."""
        occ = board.occupancy
        iso = self.isolated
        eid = self.eid
        for e_uv, u, v in self.m_edges:
            for x, y in ((u, v), (v, u)):
                ax = self._first_two_free(occ, iso, x, eid)
                if not ax:
                    continue
                by = self._first_two_free(occ, iso, y, eid)
                if not by:
                    continue
                a, b = ax[0], by[0]
                if a == b:
                    if len(by) > 1:
                        b = by[1]
                    elif len(ax) > 1:
                        a = ax[1]
                    else:
                        continue
                e_ax, e_by = eid(a, x), eid(b, y)
                return Plan(
                    steps=[(CLAIM, e_ax), (CLAIM, e_by)],
                    add=[e_ax, e_by],
                    remove=[e_uv],
                )
        return None

    @staticmethod
    def _first_two_free(occ, iso, x, eid):
        found = []
        for a in iso:
            if occ[eid(a, x)] == FREE:
                found.append(a)
                if len(found) == 2:
                    break
        return found

    def _plan_triple(self, board: Board) -> Plan | None:
        """Two lowest isolated vertices a, b; vacant wz between the partner
        shadows of their free neighborhoods; claims au, wz, vb and swaps the
        two crossed matching edges out."""
        iso = self.isolated
        if len(iso) < 2:
            return None
        a, b = iso[0], iso[1]
        occ = board.occupancy
        eid = self.eid
        partner = self.partner
        m_set = self.m_set

        def plus_of(c: int) -> list[int]:
            out = []
            for u in range(self.n):
                if u != c and occ[eid(c, u)] == FREE and partner[u] >= 0:
                    out.append(partner[u])
            out.sort()
            return out

        x_a_plus = plus_of(a)
        if not x_a_plus:
            return None
        x_b_plus = plus_of(b)
        for w in x_a_plus:
            for z in x_b_plus:
                if w == z:
                    continue
                e_wz = eid(w, z)
                if occ[e_wz] == BREAKER or e_wz in m_set:
                    continue
                u, v = partner[w], partner[z]
                e_au, e_vb = eid(a, u), eid(v, b)
                steps = [
                    (CLAIM, e_au),
                    (CLAIM if occ[e_wz] == FREE else ADOPT, e_wz),
                    (CLAIM, e_vb),
                ]
                return Plan(
                    steps=steps,
                    add=[e_au, e_wz, e_vb],
                    remove=[eid(u, w), eid(z, v)],
                )
        return None

    # -- bookkeeping ----------------------------------------------------------
    def _complete_plan(self, board: Board, plan: Plan) -> None:
        for e in plan.remove:
            self._matching_remove(e)
        for e in plan.add:
            self._matching_add(e)

    def _matching_add(self, e: int) -> None:
        u, v = edge_endpoints(e, self.n)
        if self.partner[u] >= 0 or self.partner[v] >= 0:
            raise ConsistencyError(f"matching add would share a vertex: {u},{v}")
        self.partner[u] = v
        self.partner[v] = u
        self.m_set.add(e)
        item = (e, u, v)
        lo, hi = 0, len(self.m_edges)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.m_edges[mid][0] < e:
                lo = mid + 1
            else:
                hi = mid
        self.m_edges.insert(lo, item)

    def _matching_remove(self, e: int) -> None:
        u, v = edge_endpoints(e, self.n)
        if self.partner[u] != v:
            raise ConsistencyError(f"removing non-matching edge {u}-{v}")
        self.partner[u] = -1
        self.partner[v] = -1
        self.m_set.remove(e)
        for i, item in enumerate(self.m_edges):
            if item[0] == e:
                del self.m_edges[i]
                return

    def _on_claim(self, board: Board, e: int) -> None:
        u, v = edge_endpoints(e, self.n)
        deg = self.degree
        for x in (u, v):
            deg[x] += 1
            if deg[x] == 1:
                iso = self.isolated
                lo, hi = 0, len(iso)
                while lo < hi:
                    mid = (lo + hi) // 2
                    if iso[mid] < x:
                        lo = mid + 1
                    else:
                        hi = mid
                del iso[lo]

    def check_invariants(self, board: Board) -> None:
        """Full consistency audit; meant for test runs, not hot loops."""
        seen = set()
        for e, u, v in self.m_edges:
            if board.occupancy[e] != 1:
                raise ConsistencyError(f"matching edge {u}-{v} not Maker-owned")
            if u in seen or v in seen:
                raise ConsistencyError("matching shares a vertex")
            seen.update((u, v))
            if self.partner[u] != v or self.partner[v] != u:
                raise ConsistencyError("partner array out of sync")
        for x in self.isolated:
            if self.degree[x] != 0 or x in seen:
                raise ConsistencyError("isolated set out of sync")
