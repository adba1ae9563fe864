"""Maker strategy for the Hamilton cycle game.

The strategy first builds a perfect matching, then treats it as a family of
vertex-disjoint directed paths covering all vertices and merges the family
down to a single Hamilton path, finally closing it into a cycle:

  stage 0   perfect matching (near-perfect plus one absorb move for odd n)
  stage 1   while i > k'  single move joining endpoints of two paths
  stage 2   while i > l   double move splicing a path at an interior edge
  stage 3   while i > 1   triple move, with half-split candidate sets when
                          both pivot neighborhoods concentrate on one of the
                          two chosen paths (avoids closing a premature cycle)
  stage 4   i = 1         closing triple move around the Hamilton path

where i is the number of paths and k', l come from the matching schedule.
Paths are stored with a fixed orientation (first vertex < last vertex); an
edge is "vacant" when neither Breaker's nor used on a current path.  Every
surgery is applied by rewriting the affected paths from their edge set and
re-validating shape, so a malformed splice raises instead of corrupting
state.
"""

from __future__ import annotations

from .board import BREAKER, FREE, Board, ConsistencyError, edge_endpoints
from .maker_pm import PerfectMatchingMaker, StrategyParams
from .strategy import ADOPT, CLAIM, MakerStrategy, Plan


class PathFamily:
    """Vertex-disjoint directed paths partitioning [0, n)."""

    def __init__(self, n: int):
        self.n = n
        self.paths: dict[int, list[int]] = {}
        self.vpath = [-1] * n
        self.vpos = [0] * n
        self.used: set[int] = set()
        self._next_pid = 0
        self._rowbase = [u * (2 * n - u - 1) // 2 - u - 1 for u in range(n)]

    def eid(self, u: int, v: int) -> int:
        if u > v:
            u, v = v, u
        return self._rowbase[u] + v

    def add_path(self, vertices: list[int]) -> int:
        if len(vertices) < 2:
            raise ConsistencyError("paths must span at least one edge")
        if vertices[0] > vertices[-1]:
            vertices = vertices[::-1]
        pid = self._next_pid
        self._next_pid += 1
        self.paths[pid] = vertices
        for i, v in enumerate(vertices):
            self.vpath[v] = pid
            self.vpos[v] = i
        for i in range(len(vertices) - 1):
            self.used.add(self.eid(vertices[i], vertices[i + 1]))
        return pid

    @property
    def count(self) -> int:
        return len(self.paths)

    def apply_surgery(
        self,
        add_pairs: list[tuple[int, int]],
        remove_pairs: list[tuple[int, int]],
        expect_cycle: bool = False,
    ) -> list[int] | None:
        """Add and remove path edges, then rebuild the affected paths.

        Removals cut the affected paths into segments; additions must stitch
        segment ends back into simple paths covering exactly the affected
        vertices, or the caller planned a bad splice and this raises.  With
        expect_cycle=True the result must instead be a single cycle covering
        the affected vertices, which is returned.
        """
        vpath, vpos = self.vpath, self.vpos
        involved: set[int] = set()
        for u, v in add_pairs:
            involved.update((u, v))
        for u, v in remove_pairs:
            involved.update((u, v))
        pids = {vpath[x] for x in involved}
        if -1 in pids:
            raise ConsistencyError("surgery touches a vertex on no path")

        cuts: dict[int, list[int]] = {pid: [] for pid in pids}
        for u, v in remove_pairs:
            pid = vpath[u]
            if vpath[v] != pid or abs(vpos[u] - vpos[v]) != 1:
                raise ConsistencyError(f"removed edge {u}-{v} not on a path")
            cuts[pid].append(min(vpos[u], vpos[v]))
            self.used.discard(self.eid(u, v))
        segments: list[list[int]] = []
        total_vertices = 0
        for pid in pids:
            vs = self.paths[pid]
            total_vertices += len(vs)
            prev = 0
            for c in sorted(cuts[pid]):
                seg = vs[prev : c + 1]
                if not seg:
                    raise ConsistencyError("edge removed twice")
                segments.append(seg)
                prev = c + 1
            segments.append(vs[prev:])

        # Segment ends can absorb one new edge each (two for a lone vertex);
        # links are consumed as the stitch walk uses them.
        seg_at: dict[int, int] = {}
        capacity: dict[int, int] = {}
        for idx, seg in enumerate(segments):
            seg_at[seg[0]] = idx
            seg_at[seg[-1]] = idx
            capacity[seg[0]] = 2 if len(seg) == 1 else 1
            if len(seg) > 1:
                capacity[seg[-1]] = 1
        link: dict[int, list[int]] = {}
        for u, v in add_pairs:
            for x in (u, v):
                if capacity.get(x, 0) <= 0:
                    raise ConsistencyError(
                        f"added edge {u}-{v} would give a vertex degree > 2"
                    )
                capacity[x] -= 1
            link.setdefault(u, []).append(v)
            link.setdefault(v, []).append(u)
            self.used.add(self.eid(u, v))

        consumed = [False] * len(segments)

        def extend_through(out: list[int], idx: int, enter: int) -> int:
            seg = segments[idx]
            consumed[idx] = True
            if seg[0] == enter:
                out.extend(seg)
            elif seg[-1] == enter:
                out.extend(reversed(seg))
            else:
                raise ConsistencyError("segment entered away from an end")
            return out[-1]

        def follow(exit_v: int) -> int | None:
            partners = link.get(exit_v)
            if not partners:
                return None
            nxt = partners.pop(0)
            link[nxt].remove(exit_v)
            return nxt

        new_paths: list[list[int]] = []
        for idx, seg in enumerate(segments):
            if consumed[idx]:
                continue
            enter = None
            if capacity.get(seg[0], 0) > 0:
                enter = seg[0]
            elif capacity.get(seg[-1], 0) > 0:
                enter = seg[-1]
            if enter is None:
                continue  # interior of a cycle, handled below
            out: list[int] = []
            cur_idx, cur_enter = idx, enter
            while True:
                exit_v = extend_through(out, cur_idx, cur_enter)
                nxt = follow(exit_v)
                if nxt is None:
                    break
                j = seg_at.get(nxt)
                if j is None or consumed[j]:
                    raise ConsistencyError("stitching revisited a segment")
                cur_idx, cur_enter = j, nxt
            new_paths.append(out)

        leftovers = [i for i, c in enumerate(consumed) if not c]
        if expect_cycle:
            if new_paths or not leftovers:
                raise ConsistencyError("closing surgery did not form a cycle")
            idx = leftovers[0]
            start = segments[idx][0]
            cycle: list[int] = []
            cur_idx, cur_enter = idx, start
            while True:
                exit_v = extend_through(cycle, cur_idx, cur_enter)
                nxt = follow(exit_v)
                if nxt is None:
                    raise ConsistencyError("cycle walk broke into a chain")
                if nxt == start:
                    break
                j = seg_at.get(nxt)
                if j is None or consumed[j]:
                    raise ConsistencyError("cycle walk revisited a segment")
                cur_idx, cur_enter = j, nxt
            if len(cycle) != total_vertices or any(not c for c in consumed):
                raise ConsistencyError("cycle does not cover the affected vertices")
            if any(link.values()):
                raise ConsistencyError("unused edges after the closing surgery")
            for pid in pids:
                for v in self.paths[pid]:
                    self.vpath[v] = -1
                del self.paths[pid]
            return cycle

        if leftovers:
            raise ConsistencyError("surgery closed an unexpected cycle")
        if sum(len(p) for p in new_paths) != total_vertices:
            raise ConsistencyError("surgery lost or duplicated vertices")
        if any(link.values()):
            raise ConsistencyError("surgery left unused edges")
        for pid in pids:
            del self.paths[pid]
        for comp in new_paths:
            self.add_path(comp)
        return None

    def check_partition(self, board: Board | None = None) -> None:
        """Audit: paths are disjoint, cover [0, n), edges tracked and (when a
        board is given) Maker-owned."""
        seen: set[int] = set()
        edge_count = 0
        for pid, vs in self.paths.items():
            if vs[0] > vs[-1]:
                raise ConsistencyError("path orientation violated")
            for i, v in enumerate(vs):
                if v in seen:
                    raise ConsistencyError(f"vertex {v} on two paths")
                seen.add(v)
                if self.vpath[v] != pid or self.vpos[v] != i:
                    raise ConsistencyError("vertex position index out of sync")
            for i in range(len(vs) - 1):
                e = self.eid(vs[i], vs[i + 1])
                edge_count += 1
                if e not in self.used:
                    raise ConsistencyError("path edge missing from used set")
                if board is not None and board.occupancy[e] != 1:
                    raise ConsistencyError("path edge not Maker-owned")
        if len(seen) != self.n:
            raise ConsistencyError("paths do not cover the vertex set")
        if edge_count != len(self.used):
            raise ConsistencyError("used-edge set out of sync")


def init_paths(matching_pairs: list[tuple[int, int]], n: int) -> PathFamily:
    """Path family of length-1 paths from a perfect matching (even n)."""
    if 2 * len(matching_pairs) != n:
        raise ValueError("matching does not cover the vertex set")
    fam = PathFamily(n)
    for u, v in matching_pairs:
        fam.add_path([u, v])
    return fam


def x_arrow(board: Board, fam: PathFamily, a: int) -> set[int]:
    """Predecessors (in path order) of vertices with a vacant edge to a,
    excluding a itself.  Path-initial vertices contribute nothing."""
    occ = board.occupancy
    used = fam.used
    out: set[int] = set()
    for u in range(fam.n):
        if u == a:
            continue
        e = fam.eid(a, u)
        if occ[e] != BREAKER and e not in used:
            vs = fam.paths[fam.vpath[u]]
            i = fam.vpos[u]
            if i >= 1 and vs[i - 1] != a:
                out.add(vs[i - 1])
    return out


class HamiltonCycleMaker(MakerStrategy):
    """Deterministic Maker for the Hamilton cycle game (also used for the
    connectivity and minimum-degree-2 games, which it wins on the way)."""

    def __init__(self, n: int, params: StrategyParams):
        super().__init__()
        self.n = n
        self.params = params
        self.pm = PerfectMatchingMaker(n, params)
        self.family: PathFamily | None = None
        self.cycle: list[int] | None = None
        self._rowbase = [u * (2 * n - u - 1) // 2 - u - 1 for u in range(n)]

    def eid(self, u: int, v: int) -> int:
        if u > v:
            u, v = v, u
        return self._rowbase[u] + v

    @property
    def stage(self) -> str:
        if self.goal_reached:
            return "Done"
        if self.family is None:
            return "S0"
        i = self.family.count
        if i > self.params.k_eff:
            return "S1"
        if i > self.params.l:
            return "S2"
        if i > 1:
            return "S3"
        return "S4"

    def plan_counters(self) -> tuple[int, int, int, int]:
        return (
            self.doubles_planned + self.pm.doubles_planned,
            self.doubles_failed + self.pm.doubles_failed,
            self.triples_planned + self.pm.triples_planned,
            self.triples_failed + self.pm.triples_failed,
        )

    def next_edge(self, board: Board) -> int:
        if self.family is None and not self.forfeited:
            if not self.pm.done:
                e = self.pm.next_edge(board)
                if self.pm.forfeited:
                    self.forfeited = True
                    self.forfeit_stage = "S0"
                elif self.pm.done and self.n % 2 == 0:
                    self.family = init_paths(self.pm.matching_pairs, self.n)
                return e
            return self._absorb_move(board)
        return super().next_edge(board)

    def _absorb_move(self, board: Board) -> int:
        """Odd n: connect the one uncovered vertex to a matched vertex."""
        lone = self.pm.isolated[0]
        occ = board.occupancy
        for w in range(self.n):
            if w != lone and occ[self.eid(lone, w)] == FREE:
                fam = PathFamily(self.n)
                partner = self.pm.partner[w]
                for u, v in self.pm.matching_pairs:
                    if w in (u, v):
                        fam.add_path([partner, w, lone])
                    else:
                        fam.add_path([u, v])
                self.family = fam
                return self.eid(lone, w)
        self.forfeited = True
        self.forfeit_stage = "S0"
        return self._filler(board)

    # -- plan construction ----------------------------------------------------
    def _make_plan(self, board: Board) -> Plan | None:
        stage = self.stage
        if stage == "S1":
            return self._plan_join(board)
        if stage == "S2":
            return self._plan_bridge(board)
        if stage == "S3":
            return self._plan_splice(board)
        return self._plan_close(board)

    def _vacant(self, board: Board, e: int) -> bool:
        return board.occupancy[e] != BREAKER and e not in self.family.used

    def _step_for(self, board: Board, e: int) -> tuple[int, int]:
        return (CLAIM if board.occupancy[e] == FREE else ADOPT, e)

    def _x_list(self, board: Board, a: int) -> list[int]:
        """Vertices with a vacant edge to a, ascending."""
        occ = board.occupancy
        used = self.family.used
        rowbase = self._rowbase
        base_a = rowbase[a]
        out = []
        for u in range(a):
            e = rowbase[u] + a
            if occ[e] != BREAKER and e not in used:
                out.append(u)
        for u in range(a + 1, self.n):
            e = base_a + u
            if occ[e] != BREAKER and e not in used:
                out.append(u)
        return out

    def _plan_join(self, board: Board) -> Plan | None:
        """Lowest vacant edge between endpoints of two different paths."""
        fam = self.family
        eps = []
        for pid, vs in fam.paths.items():
            eps.append((vs[0], pid))
            eps.append((vs[-1], pid))
        eps.sort()
        eid = self.eid
        for i in range(len(eps) - 1):
            x, px = eps[i]
            for j in range(i + 1, len(eps)):
                y, py = eps[j]
                if py == px:
                    continue
                e = eid(x, y)
                if self._vacant(board, e):
                    return Plan(steps=[self._step_for(board, e)], add=[e])
        return None

    def _plan_bridge(self, board: Board) -> Plan | None:
        """Double move: a is the start of the lowest-starting path; find v in
        the predecessor shadow of a's vacant neighborhood and a path end b
        with bv vacant; claim au and bv and cut the path at vu."""
        fam = self.family
        alpha_pid = min(fam.paths, key=lambda pid: fam.paths[pid][0])
        a = fam.paths[alpha_pid][0]
        occ = board.occupancy
        used = fam.used
        eid = self.eid
        shadow = []  # (v, u): u has a vacant edge to a, v precedes u
        for u in self._x_list(board, a):
            vs = fam.paths[fam.vpath[u]]
            i = fam.vpos[u]
            if i >= 1 and vs[i - 1] != a:
                shadow.append((vs[i - 1], u))
        shadow.sort()
        ends = sorted(
            vs[-1] for pid, vs in fam.paths.items() if pid != alpha_pid
        )
        for v, u in shadow:
            for b in ends:
                e_bv = eid(b, v)
                if occ[e_bv] != BREAKER and e_bv not in used:
                    e_au = eid(a, u)
                    return Plan(
                        steps=[
                            self._step_for(board, e_au),
                            self._step_for(board, e_bv),
                        ],
                        add=[e_au, e_bv],
                        remove=[eid(v, u)],
                    )
        return None

    def _pivot_paths(self) -> tuple[int, int]:
        """The two paths with the lowest starting vertices."""
        starts = sorted((vs[0], pid) for pid, vs in self.family.paths.items())
        return starts[0][1], starts[1][1]

    def _argmax_path(self, members: list[int]) -> int | None:
        """Path holding the most of `members`; ties to the path containing
        the smallest vertex."""
        fam = self.family
        tally: dict[int, int] = {}
        for u in members:
            pid = fam.vpath[u]
            tally[pid] = tally.get(pid, 0) + 1
        if not tally:
            return None
        return min(tally, key=lambda pid: (-tally[pid], min(fam.paths[pid])))

    def _plan_splice(self, board: Board) -> Plan | None:
        """Triple move merging around the two lowest-starting paths."""
        fam = self.family
        alpha_pid, beta_pid = self._pivot_paths()
        a = fam.paths[alpha_pid][0]
        b = fam.paths[beta_pid][0]
        x_a = self._x_list(board, a)
        x_b = self._x_list(board, b)
        ga = self._argmax_path(x_a)
        gb = self._argmax_path(x_b)
        if ga is None or gb is None:
            return None

        if ga == gb and ga in (alpha_pid, beta_pid):
            # Both neighborhoods concentrate on one pivot path: split the
            # candidate indices in halves so the splice cannot close a cycle.
            # The formulas are written for the pivot that lies on the shared
            # path (position 0); the other orientation mirrors them.
            glist = fam.paths[ga]
            e_pos = sorted(fam.vpos[u] for u in x_a if fam.vpath[u] == ga)
            f_pos = sorted(fam.vpos[u] for u in x_b if fam.vpath[u] == gb)
            if not e_pos or not f_pos:
                return None
            a_on_path = ga == alpha_pid
            on_pos, off_pos = (e_pos, f_pos) if a_on_path else (f_pos, e_pos)
            q, r = len(on_pos) - 1, len(off_pos) - 1
            if on_pos[q // 2] < off_pos[r // 2]:
                cand_on = [
                    (glist[p - 1], glist[p])
                    for p in on_pos[1 : q // 2 + 1]
                    if p >= 1
                ]
                cand_off = [
                    (glist[p + 1], glist[p])
                    for p in off_pos[r // 2 : r]
                    if p + 1 < len(glist)
                ]
            else:
                cand_on = [
                    (glist[p - 1], glist[p]) for p in on_pos[q // 2 :] if p >= 1
                ]
                cand_off = [
                    (glist[p - 1], glist[p])
                    for p in off_pos[1 : r // 2 + 1]
                    if p >= 1
                ]
            cand_a, cand_b = (
                (cand_on, cand_off) if a_on_path else (cand_off, cand_on)
            )
            count_a = len(e_pos)
            count_b = len(f_pos)
        else:
            cand_a = self._shadow_on(ga, x_a, a)
            cand_b = self._shadow_on(gb, x_b, b)
            count_a = sum(1 for u in x_a if fam.vpath[u] == ga)
            count_b = sum(1 for u in x_b if fam.vpath[u] == gb)

        # Half-split size guarantee: |candidates| >= |X ∩ path| / 2 - 1.
        if 2 * len(cand_a) < count_a - 2 or 2 * len(cand_b) < count_b - 2:
            raise ConsistencyError("splice candidate set smaller than guaranteed")

        occ = board.occupancy
        used = fam.used
        eid = self.eid
        for w, u in cand_a:
            for z, v in cand_b:
                if w == z:
                    continue
                e_wz = eid(w, z)
                if occ[e_wz] == BREAKER or e_wz in used:
                    continue
                e_au, e_bv = eid(a, u), eid(b, v)
                return Plan(
                    steps=[
                        self._step_for(board, e_au),
                        self._step_for(board, e_bv),
                        self._step_for(board, e_wz),
                    ],
                    add=[e_au, e_bv, e_wz],
                    remove=[eid(w, u), eid(z, v)],
                )
        return None

    def _shadow_on(self, pid: int, members: list[int], a: int):
        """(predecessor, member) pairs for members on path pid, in path order."""
        fam = self.family
        vs = fam.paths[pid]
        out = []
        for u in members:
            if fam.vpath[u] == pid:
                i = fam.vpos[u]
                if i >= 1 and vs[i - 1] != a:
                    out.append((fam.vpos[u], vs[i - 1], u))
        out.sort()
        return [(w, u) for _, w, u in out]

    def _plan_close(self, board: Board) -> Plan | None:
        """Closing triple move: bridge the two halves of the Hamilton path."""
        fam = self.family
        (glist,) = fam.paths.values()
        a, b = glist[0], glist[-1]
        pos_a = sorted(fam.vpos[u] for u in self._x_list(board, a))
        pos_b = sorted(fam.vpos[u] for u in self._x_list(board, b))
        if not pos_a or not pos_b:
            return None
        s, t = len(pos_a) - 1, len(pos_b) - 1
        eid = self.eid
        last = len(glist) - 1
        if pos_a[s // 2] < pos_b[t // 2]:
            u_cands = pos_a[: s // 2 + 1]
            v_cands = pos_b[t // 2 :]
            off_u, off_v = -1, +1
        else:
            u_cands = pos_a[s // 2 :]
            v_cands = pos_b[: t // 2]
            off_u, off_v = +1, -1
        for c in u_cands:
            if not 0 <= c + off_u <= last:
                continue
            for d in v_cands:
                if not 0 <= d + off_v <= last:
                    continue
                w, z = glist[c + off_u], glist[d + off_v]
                if w == z:
                    continue
                e_wz = eid(w, z)
                if not self._vacant(board, e_wz):
                    continue
                e_au, e_bv = eid(a, glist[c]), eid(b, glist[d])
                return Plan(
                    steps=[
                        self._step_for(board, e_au),
                        self._step_for(board, e_wz),
                        self._step_for(board, e_bv),
                    ],
                    add=[e_au, e_wz, e_bv],
                    remove=[eid(w, glist[c]), eid(z, glist[d])],
                    expect_cycle=True,
                )
        return None

    # -- bookkeeping ------------------------------------------------------------
    def _complete_plan(self, board: Board, plan: Plan) -> None:
        fam = self.family
        before = fam.count
        add_pairs = [edge_endpoints(e, self.n) for e in plan.add]
        remove_pairs = [edge_endpoints(e, self.n) for e in plan.remove]
        cycle = fam.apply_surgery(add_pairs, remove_pairs, plan.expect_cycle)
        if plan.expect_cycle:
            self.cycle = cycle
            self.goal_reached = True
        elif fam.count != before - 1:
            raise ConsistencyError("completed plan must merge exactly one path")

    def check_invariants(self, board: Board) -> None:
        if self.family is None:
            self.pm.check_invariants(board)
        elif not self.goal_reached:
            fam = self.family
            fam.check_partition(board)
            if self.stage == "S2":
                # feasibility floor for the double-move search: the pivot's
                # predecessor shadow can lose at most one vertex per path,
                # one to the pivot itself, and one per Breaker edge at it
                alpha_pid = min(fam.paths, key=lambda pid: fam.paths[pid][0])
                a = fam.paths[alpha_pid][0]
                deg_b = sum(
                    1
                    for u in range(self.n)
                    if u != a and board.occupancy[self.eid(a, u)] == BREAKER
                )
                floor = self.n - 2 - deg_b - fam.count - 1
                if len(x_arrow(board, fam, a)) < floor:
                    raise ConsistencyError(
                        "predecessor shadow smaller than its lower bound"
                    )
