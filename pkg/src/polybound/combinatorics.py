"""Hyperedge orderings and labeled-hypergraph counting.

A labeled hypergraph here has vertex set ``1..l`` and an ordered sequence of
(possibly repeated) hyperedges.  Edge positions are 0-based indices into that
sequence.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Sequence

__all__ = [
    "ENUM_CAP",
    "LabeledHypergraph",
    "CanonicalOrdering",
    "OrderingError",
    "UnionFind",
    "connected_components",
    "edge_components",
    "canonical_orderings",
    "verify_ordering",
    "enumerate_labeled",
    "labeled_histogram",
    "counting_min_R0",
    "counting_sweep",
]

ENUM_CAP = 10**7


class OrderingError(ValueError):
    pass


class UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}
        self.count = len(self.parent)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.count -= 1


@dataclass(frozen=True)
class LabeledHypergraph:
    vertex_count: int
    edges: tuple

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(tuple(sorted(e)) for e in self.edges))

    @property
    def k(self) -> int:
        return len(self.edges)

    def degrees(self) -> list[int]:
        deg = [0] * (self.vertex_count + 1)
        for e in self.edges:
            for v in e:
                deg[v] += 1
        return deg[1:]


def connected_components(g: LabeledHypergraph) -> tuple[int, list[list[int]]]:
    """Component count and vertex partition of ``g`` (every vertex of ``1..l`` counts)."""
    uf = UnionFind(range(1, g.vertex_count + 1))
    for e in g.edges:
        for a, b in zip(e, e[1:]):
            uf.union(a, b)
    parts: dict[int, list[int]] = {}
    for v in range(1, g.vertex_count + 1):
        parts.setdefault(uf.find(v), []).append(v)
    return uf.count, sorted(parts.values())


def edge_components(edges: Sequence[Sequence[int]]) -> int:
    """Components of the hypergraph spanned by ``edges`` (vertex set = their union)."""
    verts = sorted({v for e in edges for v in e})
    if not verts:
        return 0
    uf = UnionFind(verts)
    for e in edges:
        for a, b in zip(e, e[1:]):
            uf.union(a, b)
    return uf.count


@dataclass(frozen=True)
class CanonicalOrdering:
    order1: tuple
    order2: tuple
    S1: frozenset
    S2: frozenset

    @property
    def c(self) -> int:
        return len(self.S1)


def _line_graph(edges) -> list[list[int]]:
    k = len(edges)
    sets = [set(e) for e in edges]
    adj: list[list[int]] = [[] for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            if sets[i] & sets[j]:
                adj[i].append(j)
                adj[j].append(i)
    return adj


def _spanning_forest(adj) -> list[set[int]]:
    """BFS forest of the line graph, visiting lowest indices first."""
    k = len(adj)
    forest: list[set[int]] = [set() for _ in range(k)]
    seen = [False] * k
    for root in range(k):
        if seen[root]:
            continue
        seen[root] = True
        queue = [root]
        while queue:
            u = queue.pop(0)
            for w in adj[u]:
                if not seen[w]:
                    seen[w] = True
                    forest[u].add(w)
                    forest[w].add(u)
                    queue.append(w)
    return forest


def _tree_components(forest) -> list[list[int]]:
    uf = UnionFind(range(len(forest)))
    for u, nbrs in enumerate(forest):
        for w in nbrs:
            uf.union(u, w)
    comps: dict[int, list[int]] = {}
    for u in range(len(forest)):
        comps.setdefault(uf.find(u), []).append(u)
    return sorted(comps.values())


def _peel(forest, first: frozenset, last: frozenset, c: int) -> tuple:
    """Remove leaves one at a time: ``first`` set, then the rest, then ``last``."""
    k = len(forest)
    nbrs = [set(s) for s in forest]
    alive = set(range(k))
    order = []
    for i in range(k):
        if i < c:
            allowed = first
        elif i < k - c:
            allowed = alive - first - last
        else:
            allowed = last
        leaves = [u for u in sorted(allowed & alive) if len(nbrs[u]) <= 1]
        if not leaves:
            raise OrderingError(f"no admissible leaf at step {i + 1}")
        u = leaves[0]
        order.append(u)
        alive.discard(u)
        for w in nbrs[u]:
            nbrs[w].discard(u)
        nbrs[u].clear()
    return tuple(order)


def canonical_orderings(g: LabeledHypergraph) -> CanonicalOrdering:
    """Two hyperedge orderings whose long suffixes keep every component alive.

    Requires every vertex to have degree at least 2.  Ties are broken by the
    lowest edge index, so the result is a pure function of ``g``.
    """
    deg = g.degrees()
    low = [v for v, d in enumerate(deg, start=1) if d < 2]
    if low:
        raise OrderingError(f"vertices {low} have degree < 2")
    forest = _spanning_forest(_line_graph(g.edges))
    s1, s2 = set(), set()
    for comp in _tree_components(forest):
        leaves = [u for u in comp if len(forest[u]) <= 1]
        if len(leaves) < 2:
            raise OrderingError(f"component {comp} has fewer than two edges")
        s1.add(leaves[0])
        s2.add(leaves[1])
    S1, S2 = frozenset(s1), frozenset(s2)
    c = len(S1)
    order1 = _peel(forest, S2, S1, c)
    order2 = _peel(forest, S1, S2, c)
    return CanonicalOrdering(order1=order1, order2=order2, S1=S1, S2=S2)


def verify_ordering(g: LabeledHypergraph, co: CanonicalOrdering) -> bool:
    """Check the three ordering properties post hoc."""
    k = g.k
    c = edge_components(g.edges)
    if sorted(co.order1) != list(range(k)) or sorted(co.order2) != list(range(k)):
        return False
    if len(co.S1) != c or len(co.S2) != c or co.S1 & co.S2:
        return False
    if set(co.order1[:c]) != co.S2 or set(co.order2[k - c:]) != co.S2:
        return False
    if set(co.order1[k - c:]) != co.S1 or set(co.order2[:c]) != co.S1:
        return False
    for order in (co.order1, co.order2):
        for s in range(k - c):
            if edge_components([g.edges[i] for i in order[s:]]) != c:
                return False
    return True


# ---------------------------------------------------------------------------
# counting


def _check_case(l: int, k: int, q: int, d: Sequence[int]) -> None:
    if len(d) != l:
        raise ValueError(f"degree vector has {len(d)} entries, expected {l}")
    if q * k != sum(d):
        raise ValueError(f"q*k = {q * k} differs from degree sum {sum(d)}")
    if any(x < 2 for x in d):
        raise ValueError("every degree must be at least 2")


def _direct_sequences(l: int, k: int, q: int, cap: int) -> Iterator[tuple]:
    choices = list(itertools.combinations(range(1, l + 1), q))
    if len(choices) ** k > cap:
        raise ValueError(f"C({l},{q})^{k} = {len(choices) ** k} candidates exceed cap {cap}")
    return itertools.product(choices, repeat=k)


def _degree_vector(edges, l):
    deg = [0] * l
    for e in edges:
        for v in e:
            deg[v - 1] += 1
    return tuple(deg)


def _enumerate_direct(l, k, q, d, c, cap, witnesses):
    target = tuple(d)
    count, found = 0, []
    for edges in _direct_sequences(l, k, q, cap):
        if _degree_vector(edges, l) == target and edge_components(edges) == c:
            count += 1
            if witnesses:
                found.append(edges)
    return count, found


def _enumerate_recursive(l, k, q, d, c, witnesses):
    """Backtracking over edge sequences with remaining-degree pruning."""
    choices = list(itertools.combinations(range(1, l + 1), q))
    remaining = list(d)
    seq: list[tuple] = []
    count = 0
    found = []

    def rec(depth):
        nonlocal count
        slots_left = (k - depth) * q
        if sum(remaining) != slots_left or any(r > k - depth for r in remaining):
            return
        if depth == k:
            if edge_components(seq) == c:
                count += 1
                if witnesses:
                    found.append(tuple(seq))
            return
        for e in choices:
            if all(remaining[v - 1] > 0 for v in e):
                for v in e:
                    remaining[v - 1] -= 1
                seq.append(e)
                rec(depth + 1)
                seq.pop()
                for v in e:
                    remaining[v - 1] += 1

    rec(0)
    return count, found


def enumerate_labeled(
    l: int,
    k: int,
    q: int,
    d: Sequence[int],
    c: int,
    method: str = "direct",
    cap: int = ENUM_CAP,
    witnesses: bool = False,
):
    """Number of labeled hypergraphs on ``[l]`` with ``k`` edges of size ``q``,
    degree vector ``d`` and exactly ``c`` components.

    ``method`` is ``"direct"`` (product enumeration) or ``"recursive"``
    (backtracking).  With ``witnesses=True`` returns ``(count, edge sequences)``.
    """
    _check_case(l, k, q, d)
    if method == "direct":
        count, found = _enumerate_direct(l, k, q, d, c, cap, witnesses)
    elif method == "recursive":
        count, found = _enumerate_recursive(l, k, q, d, c, witnesses)
    else:
        raise ValueError(f"unknown method {method!r}")
    return (count, found) if witnesses else count


def labeled_histogram(l: int, k: int, q: int, cap: int = ENUM_CAP) -> Counter:
    """Counts keyed by ``(degree vector, components)`` over all sequences with min degree 2."""
    hist: Counter = Counter()
    for edges in _direct_sequences(l, k, q, cap):
        deg = _degree_vector(edges, l)
        if min(deg, default=0) >= 2:
            hist[(deg, edge_components(edges))] += 1
    return hist


def counting_min_R0(l: int, k: int, q: int, d: Sequence[int], c: int, count: int | None = None) -> float:
    """Smallest ``R0`` with ``|S| prod d_v! <= R0^(qk) k^(qk - (q-1)c)``."""
    if count is None:
        count = enumerate_labeled(l, k, q, d, c)
    lhs = count * math.prod(math.factorial(x) for x in d)
    exponent = q * k - (q - 1) * c
    return (lhs / k**exponent) ** (1.0 / (q * k))


def counting_holds(l, k, q, d, c, count, R0) -> bool:
    lhs = count * math.prod(math.factorial(x) for x in d)
    return lhs <= R0 ** (q * k) * k ** (q * k - (q - 1) * c)


def _degree_vectors(l: int, total: int, hi: int):
    """Compositions of ``total`` into ``l`` parts within ``[2, hi]``."""
    if l == 0:
        if total == 0:
            yield ()
        return
    for first in range(2, min(hi, total - 2 * (l - 1)) + 1):
        for rest in _degree_vectors(l - 1, total - first, hi):
            yield (first,) + rest


def counting_sweep(max_qk: int = 8, recursive_check: bool = True) -> list[dict]:
    """Every ``(q, k, l, d, c)`` with ``q k <= max_qk`` and a nonempty class.

    Each row carries the direct count, the recursive count (when requested)
    and the minimal ``R0`` for that case.
    """
    rows = []
    for q in range(1, max_qk + 1):
        for k in range(1, max_qk // q + 1):
            for l in range(q, q * k // 2 + 1):
                hist = labeled_histogram(l, k, q)
                for d in _degree_vectors(l, q * k, k):
                    for c in range(1, l + 1):
                        direct = hist.get((d, c), 0)
                        if direct == 0 and not recursive_check:
                            continue
                        rec = enumerate_labeled(l, k, q, d, c, method="recursive") if recursive_check else None
                        if direct == 0 and not rec:
                            continue
                        rows.append(
                            {
                                "q": q, "k": k, "l": l, "d": d, "c": c,
                                "count": direct, "count_recursive": rec,
                                "R0_min": counting_min_R0(l, k, q, d, c, count=direct),
                            }
                        )
    return rows
