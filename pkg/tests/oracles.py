"""Brute-force reference implementations, independent of the library code.

These are deliberately naive: they enumerate structures directly and are
used only to cross-check the real checkers on small graphs.
"""

from itertools import combinations


def brute_max_matching(n, pairs):
    """Maximum matching size by backtracking over the edge list."""
    pairs = list(pairs)

    def grow(start, used):
        best = 0
        for i in range(start, len(pairs)):
            u, v = pairs[i]
            if u in used or v in used:
                continue
            best = max(best, 1 + grow(i + 1, used | {u, v}))
        return best

    return grow(0, frozenset())


def brute_has_perfect_matching(n, pairs):
    if n % 2:
        raise ValueError("even n only")
    return brute_max_matching(n, pairs) == n // 2


def all_perfect_matchings(n):
    """Every perfect matching of the complete graph on [0, n)."""
    def rec(rest):
        if not rest:
            yield []
            return
        a = rest[0]
        for i in range(1, len(rest)):
            b = rest[i]
            tail = rest[1:i] + rest[i + 1:]
            for m in rec(tail):
                yield [(a, b)] + m

    yield from rec(list(range(n)))


def brute_is_hamiltonian(n, pairs):
    """Depth-first enumeration of simple cycles through vertex 0."""
    if n < 3:
        return False
    adj = {v: set() for v in range(n)}
    for u, v in pairs:
        adj[u].add(v)
        adj[v].add(u)

    visited = [False] * n
    visited[0] = True

    def walk(v, depth):
        if depth == n:
            return 0 in adj[v]
        for w in adj[v]:
            if not visited[w]:
                visited[w] = True
                if walk(w, depth + 1):
                    return True
                visited[w] = False
        return False

    return walk(0, 1)


def brute_has_complete_bipartite(n, pairs, r, q):
    edges = {frozenset(p) for p in pairs}
    for a_side in combinations(range(n), r):
        rest = [v for v in range(n) if v not in a_side]
        for b_side in combinations(rest, q):
            if all(
                frozenset((x, y)) in edges for x in a_side for y in b_side
            ):
                return True
    return False


def brute_has_dense_kset(n, pairs, k):
    if k > n:
        return False
    edges = {frozenset(p) for p in pairs}
    for sub in combinations(range(n), k):
        count = sum(
            1 for x, y in combinations(sub, 2) if frozenset((x, y)) in edges
        )
        if 2 * count >= k * (k - 2):
            return True
    return False
