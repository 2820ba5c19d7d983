"""Matchings on the plus-graph and in the pattern, and the Erdős–Gallai bound.

The maximum matching itself comes from networkx; it is certified by an
Edmonds blossom search for an augmenting path (none may remain).
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Iterable, List, Optional

import networkx as nx

from src.core import Edge, InputError, Pattern, SignedCompleteGraph, edge_key, pair_count, plus_subgraph

Matching = FrozenSet[Edge]


def _to_networkx(graph: Pattern) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(1, graph.n + 1))
    g.add_edges_from(graph.sorted_edges())
    return g


def max_matching(graph: Pattern) -> Matching:
    """Maximum-cardinality matching of ``graph``, certified optimal."""
    found = nx.max_weight_matching(_to_networkx(graph), maxcardinality=True)
    matching = frozenset(edge_key(u, v) for u, v in found)
    if find_augmenting_path(graph, matching) is not None:
        raise RuntimeError("maximum matching certificate failed: an augmenting path remains")
    return matching


def find_augmenting_path(graph: Pattern, matching: Iterable[Edge]) -> Optional[List[int]]:
    """An augmenting path for ``matching`` in ``graph``, or None if it is maximum.

    Edmonds' search with blossom bases, one alternating tree per exposed root.
    """
    mate = [0] * (graph.n + 1)
    for u, v in matching:
        if not graph.has_edge(u, v) or mate[u] or mate[v]:
            raise InputError(f"({u}, {v}) breaks the matching in this graph")
        mate[u], mate[v] = v, u
    for root in range(1, graph.n + 1):
        if mate[root] == 0 and graph.degree(root) > 0:
            path = _augment_from(graph, mate, root)
            if path is not None:
                return path
    return None


def _augment_from(graph: Pattern, mate: List[int], root: int) -> Optional[List[int]]:
    n = graph.n
    parent = [0] * (n + 1)
    base = list(range(n + 1))
    in_tree = [False] * (n + 1)
    in_tree[root] = True
    queue = deque([root])

    def common_base(a: int, b: int) -> int:
        seen = [False] * (n + 1)
        while True:
            a = base[a]
            seen[a] = True
            if mate[a] == 0:
                break
            a = parent[mate[a]]
        while True:
            b = base[b]
            if seen[b]:
                return b
            b = parent[mate[b]]

    def mark_blossom(v: int, b: int, child: int, blossom: List[bool]) -> None:
        while base[v] != b:
            blossom[base[v]] = blossom[base[mate[v]]] = True
            parent[v] = child
            child = mate[v]
            v = parent[mate[v]]

    while queue:
        v = queue.popleft()
        for to in sorted(graph.neighbors(v)):
            if base[v] == base[to] or mate[v] == to:
                continue
            if to == root or (mate[to] != 0 and parent[mate[to]] != 0):
                b = common_base(v, to)
                blossom = [False] * (n + 1)
                mark_blossom(v, b, to, blossom)
                mark_blossom(to, b, v, blossom)
                for i in range(1, n + 1):
                    if blossom[base[i]]:
                        base[i] = b
                        if not in_tree[i]:
                            in_tree[i] = True
                            queue.append(i)
            elif parent[to] == 0:
                parent[to] = v
                if mate[to] == 0:
                    path = []
                    w = to
                    while w:
                        path.append(w)
                        path.append(parent[w])
                        w = mate[parent[w]]
                    return path
                in_tree[mate[to]] = True
                queue.append(mate[to])
    return None


def greedy_maximal_matching(graph: Pattern) -> Matching:
    """Maximal matching taking edges in lexicographic order."""
    covered = set()
    chosen = []
    for u, v in graph.sorted_edges():
        if u not in covered and v not in covered:
            chosen.append((u, v))
            covered.update((u, v))
    return frozenset(chosen)


def extend_to_perfect(n: int, matching: Iterable[Edge]) -> Matching:
    """Pair the uncovered vertices in increasing order."""
    if n % 2:
        raise InputError(f"no perfect matching on an odd number ({n}) of vertices")
    pairs = set(matching)
    covered = {v for e in pairs for v in e}
    if len(covered) != 2 * len(pairs):
        raise InputError("pairs to extend are not disjoint")
    left = [v for v in range(1, n + 1) if v not in covered]
    pairs.update(zip(left[0::2], left[1::2]))
    return frozenset(pairs)


def erdos_gallai_threshold(n: int) -> Fraction:
    """Edge count (8n^2 - 14n + 3) / 25 separating the two branches."""
    return Fraction(8 * n * n - 14 * n + 3, 25)


def _check_size(n: int, m: int) -> None:
    if n < 1 or not 0 <= m <= pair_count(n):
        raise InputError(f"edge count m={m} outside 0..{pair_count(max(n, 0))} for n={n}")


def erdos_gallai_bound(n: int, m: int) -> float:
    """Lower bound on the matching number of any graph of order n and size m."""
    _check_size(n, m)
    if m <= erdos_gallai_threshold(n):
        return n - 0.5 - math.sqrt(n * n - 2 * m - n + 0.25)
    return (math.sqrt(8 * m + 1) - 1) / 4


def meets_erdos_gallai(nu: int, n: int, m: int) -> bool:
    """Exact test of nu >= erdos_gallai_bound(n, m) (squares both sides)."""
    _check_size(n, m)
    if m <= erdos_gallai_threshold(n):
        gap = Fraction(2 * n - 1, 2) - nu
        if gap <= 0:
            return True
        return Fraction(4 * n * n - 8 * m - 4 * n + 1, 4) >= gap * gap
    return (4 * nu + 1) ** 2 >= 8 * m + 1


@dataclass(frozen=True)
class MatchedPair:
    """Perfect matchings M_K of the host and M_G of the pattern's vertex set.

    ``m_g0`` is the part of ``m_g`` inside the pattern; ``p`` is the
    fraction of plus-edges in ``m_k``.
    """

    n: int
    m_k: Matching
    m_g: Matching
    m_g0: Matching
    p: Fraction

    @property
    def plus_pairs(self) -> int:
        return int(self.p * (self.n // 2))


def build_matched_pair(host: SignedCompleteGraph, pattern: Pattern) -> MatchedPair:
    if host.n != pattern.n:
        raise InputError(f"dimension mismatch: host n={host.n}, pattern n={pattern.n}")
    if host.n % 2:
        raise InputError(f"matched pairs need an even order, got n={host.n}; use the odd-n reduction")
    n = host.n
    m_k = extend_to_perfect(n, max_matching(plus_subgraph(host)))
    plus_pairs = sum(1 for u, v in m_k if host.is_plus(u, v))
    m_g0 = greedy_maximal_matching(pattern)
    m_g = extend_to_perfect(n, m_g0)
    return MatchedPair(n=n, m_k=m_k, m_g=m_g, m_g0=m_g0, p=Fraction(plus_pairs, n // 2))
