"""Strategy-blind win-condition checkers and random-graph utilities.

Everything here works on plain vertex/edge data and never looks at game
state, so recorded wins can be re-verified independently of the strategy
that produced them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from .board import ScopeError, edge_endpoints, edge_index

#: Exact searches refuse to enumerate more than this many subsets.
SUBSET_GUARD = 10**7

#: Exact Hamiltonicity is refused above this vertex count (use a certificate).
HAM_EXACT_LIMIT = 20


@dataclass
class SimpleGraph:
    """A simple graph on vertex set [0, n) with edges stored as edge indices."""

    n: int
    edges: set[int] = field(default_factory=set)

    @classmethod
    def from_pairs(cls, n: int, pairs) -> "SimpleGraph":
        return cls(n, {edge_index(u, v, n) for u, v in pairs})

    def pairs(self) -> list[tuple[int, int]]:
        return sorted(edge_endpoints(e, self.n) for e in self.edges)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for e in self.edges:
            u, v = edge_endpoints(e, self.n)
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def has_pair(self, u: int, v: int) -> bool:
        return edge_index(u, v, self.n) in self.edges

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for e in self.edges:
            u, v = edge_endpoints(e, self.n)
            deg[u] += 1
            deg[v] += 1
        return deg


class MatchingFinder:
    """Maximum cardinality matching in a general graph (Edmonds' blossom
    algorithm, augmenting one exposed vertex at a time).

    Supports incremental edge insertion: after add_edge, call
    augment_to_maximum() to restore maximality.  match[v] is the partner of
    v or -1; size is the number of matched pairs.
    """

    def __init__(self, n: int):
        self.n = n
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.match = [-1] * n
        self.size = 0

    def add_edge(self, u: int, v: int) -> None:
        self.adj[u].append(v)
        self.adj[v].append(u)

    def _find_augmenting_path(self, root: int) -> bool:
        n = self.n
        adj = self.adj
        match = self.match
        parent = [-1] * n
        base = list(range(n))
        in_tree = [False] * n
        in_tree[root] = True
        queue = [root]
        head = 0

        def lca(a: int, b: int) -> int:
            seen = [False] * n
            x = a
            while True:
                x = base[x]
                seen[x] = True
                if match[x] < 0:
                    break
                x = parent[match[x]]
            y = b
            while True:
                y = base[y]
                if seen[y]:
                    return y
                y = parent[match[y]]

        def mark_blossom(x: int, stem: int, child: int, flag: list[bool]) -> None:
            while base[x] != stem:
                flag[base[x]] = True
                flag[base[match[x]]] = True
                parent[x] = child
                child = match[x]
                x = parent[match[x]]

        while head < len(queue):
            v = queue[head]
            head += 1
            for u in adj[v]:
                if base[v] == base[u] or match[v] == u:
                    continue
                if u == root or (match[u] >= 0 and parent[match[u]] >= 0):
                    # Odd cycle: contract the blossom to its stem.
                    stem = lca(v, u)
                    flag = [False] * n
                    mark_blossom(v, stem, u, flag)
                    mark_blossom(u, stem, v, flag)
                    for i in range(n):
                        if flag[base[i]]:
                            base[i] = stem
                            if not in_tree[i]:
                                in_tree[i] = True
                                queue.append(i)
                elif parent[u] < 0:
                    parent[u] = v
                    if match[u] < 0:
                        # Augment along the alternating path back to root.
                        while u >= 0:
                            pv = parent[u]
                            nxt = match[pv]
                            match[u] = pv
                            match[pv] = u
                            u = nxt
                        return True
                    in_tree[match[u]] = True
                    queue.append(match[u])
        return False

    def augment_to_maximum(self) -> int:
        for v in range(self.n):
            if self.match[v] < 0 and self.adj[v]:
                if self._find_augmenting_path(v):
                    self.size += 1
        return self.size


def max_matching_size(g: SimpleGraph) -> int:
    finder = MatchingFinder(g.n)
    for u, v in g.pairs():
        finder.add_edge(u, v)
        # Greedy seeding keeps the number of full searches small.
        if finder.match[u] < 0 and finder.match[v] < 0:
            finder.match[u] = v
            finder.match[v] = u
            finder.size += 1
    return finder.augment_to_maximum()


def is_perfect_matching(g: SimpleGraph) -> bool:
    """True iff g contains n/2 pairwise disjoint edges covering all vertices."""
    if g.n % 2:
        raise ValueError("perfect matchings require an even vertex count")
    return max_matching_size(g) == g.n // 2


def min_degree(g: SimpleGraph) -> int:
    return min(g.degrees(), default=0)


def max_degree(g: SimpleGraph) -> int:
    return max(g.degrees(), default=0)


def is_connected(g: SimpleGraph) -> bool:
    if g.n <= 1:
        return True
    adj = g.adjacency()
    seen = [False] * g.n
    seen[0] = True
    stack = [0]
    count = 1
    while stack:
        v = stack.pop()
        for u in adj[v]:
            if not seen[u]:
                seen[u] = True
                count += 1
                stack.append(u)
    return count == g.n


def is_hamiltonian(g: SimpleGraph) -> bool:
    """Exact Hamilton-cycle test via subset DP.  Exponential; refused above
    HAM_EXACT_LIMIT vertices (validate a claimed cycle instead)."""
    n = g.n
    if n > HAM_EXACT_LIMIT:
        raise ScopeError(
            f"exact Hamiltonicity limited to n <= {HAM_EXACT_LIMIT}; "
            "use a cycle certificate"
        )
    if n < 3:
        return False
    adj = g.adjacency()
    if min(len(a) for a in adj) < 2:
        return False
    nbr_mask = [0] * n
    for v in range(n):
        for u in adj[v]:
            nbr_mask[v] |= 1 << u
    full = (1 << n) - 1
    # dp[mask] = bitmask of endpoints of paths that start at 0 and span mask.
    dp = [0] * (1 << n)
    dp[1] = 1
    for mask in range(1, 1 << n, 2):
        ends = dp[mask]
        if not ends:
            continue
        v = 0
        rest = ends
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            avail = nbr_mask[v] & ~mask
            while avail:
                ub = avail & -avail
                dp[mask | ub] |= ub
                avail ^= ub
    return bool(dp[full] & nbr_mask[0])


def is_hamiltonian_cycle(g: SimpleGraph, cycle: list[int]) -> bool:
    """Linear-time certificate check: cycle visits every vertex exactly once
    and every consecutive (wrapping) pair is an edge of g."""
    n = g.n
    if len(cycle) != n or n < 3 or set(cycle) != set(range(n)):
        return False
    edges = g.edges
    for i in range(n):
        u, v = cycle[i], cycle[(i + 1) % n]
        if edge_index(u, v, n) not in edges:
            return False
    return True


def has_dense_kset(g: SimpleGraph, k: int) -> bool:
    """True iff some k vertices induce at least C(k,2) - k/2 edges.

    Exact enumeration; the threshold comparison is done in integers
    (2*induced >= k*(k-2)) so half-integral bounds are honored exactly.
    """
    if k > g.n:
        return False
    if comb(g.n, k) > SUBSET_GUARD:
        raise ScopeError(f"C({g.n},{k}) subsets exceed the exact-search guard")
    nbrs = _neighbor_sets(g)
    for subset in combinations(range(g.n), k):
        members = set(subset)
        induced = sum(len(nbrs[v] & members) for v in subset) // 2
        if 2 * induced >= k * (k - 2):
            return True
    return False


def has_complete_bipartite(g: SimpleGraph, r: int, q: int) -> bool:
    """True iff g has disjoint vertex sets A, B with |A|=r, |B|=q and every
    A-B pair an edge.  Enumerates the smaller side exactly."""
    if r < 1 or q < 1:
        raise ValueError("side sizes must be positive")
    small, big = min(r, q), max(r, q)
    if small + big > g.n:
        return False
    if comb(g.n, small) > SUBSET_GUARD:
        raise ScopeError(f"C({g.n},{small}) subsets exceed the exact-search guard")
    nbrs = _neighbor_sets(g)
    for subset in combinations(range(g.n), small):
        common = set(nbrs[subset[0]])
        for v in subset[1:]:
            common &= nbrs[v]
            if len(common) < big:
                break
        else:
            if len(common - set(subset)) >= big:
                return True
    return False


def _neighbor_sets(g: SimpleGraph) -> list[set[int]]:
    nbrs: list[set[int]] = [set() for _ in range(g.n)]
    for e in g.edges:
        u, v = edge_endpoints(e, g.n)
        nbrs[u].add(v)
        nbrs[v].add(u)
    return nbrs


def sample_gnm(n: int, m: int, rng) -> SimpleGraph:
    """Uniform random graph with exactly m edges."""
    total = comb(n, 2)
    if not 0 <= m <= total:
        raise ValueError(f"edge count {m} out of range [0, {total}]")
    return SimpleGraph(n, set(rng.sample(range(total), m)))


def check_win(game: str, g: SimpleGraph, cycle: list[int] | None = None) -> bool:
    """Re-verify a recorded Maker win from the final Maker graph alone."""
    if game == "pm":
        return is_perfect_matching(g)
    if game == "mindeg1":
        return min_degree(g) >= 1
    if game == "mindeg2":
        return min_degree(g) >= 2
    if game == "conn":
        return is_connected(g)
    if game == "ham":
        if cycle is not None:
            return is_hamiltonian_cycle(g, cycle)
        return is_hamiltonian(g)
    raise ValueError(f"unknown game {game!r}")
