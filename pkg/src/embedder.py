"""Matched random embeddings: sampling, exact expectation, derandomization.

A member of the family maps every pair of ``m_g`` onto a pair of ``m_k``
(a bijection between the two matchings) with an orientation bit per pair,
so the family has (n/2)! * 2^(n/2) members.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations, product
from typing import Dict, Iterator, List, Sequence, Tuple

import numpy as np

from simple_logging import log_debug
from src.core import (
    Edge,
    Embedding,
    InputError,
    Pattern,
    SignedCompleteGraph,
    edge_key,
    score,
)
from src.matching import MatchedPair, build_matched_pair


@dataclass(frozen=True)
class RestrictedEmbeddingSpace:
    pair: MatchedPair
    g_pairs: Tuple[Edge, ...] = field(init=False, repr=False)
    k_pairs: Tuple[Edge, ...] = field(init=False, repr=False)

    def __post_init__(self):
        if self.pair.n % 2:
            raise InputError(f"matched embeddings need an even order, got n={self.pair.n}")
        object.__setattr__(self, "g_pairs", tuple(sorted(self.pair.m_g)))
        object.__setattr__(self, "k_pairs", tuple(sorted(self.pair.m_k)))

    @property
    def n(self) -> int:
        return self.pair.n

    @property
    def size(self) -> int:
        r = self.n // 2
        return math.factorial(r) * 2 ** r

    def build(self, order: Sequence[int], flips: Sequence[int]) -> Embedding:
        """g_pairs[i] goes to k_pairs[order[i]], reversed when flips[i] is set."""
        mapping: Dict[int, int] = {}
        for (u, v), target, flip in zip(self.g_pairs, order, flips):
            a, b = self.k_pairs[int(target)]
            if flip:
                a, b = b, a
            mapping[u], mapping[v] = a, b
        return Embedding.from_mapping(self.n, mapping)

    def enumerate(self) -> Iterator[Embedding]:
        """Every member of the family; only sensible for small n."""
        r = self.n // 2
        for order in permutations(range(r)):
            for flips in product((0, 1), repeat=r):
                yield self.build(order, flips)

    def image_distribution(self, u: int, v: int) -> Counter:
        """How often each host pair is the image of {u, v} over the family."""
        return Counter(edge_key(emb(u), emb(v)) for emb in self.enumerate())


def sample(space: RestrictedEmbeddingSpace, seed: int) -> Embedding:
    """Uniform member of the family, deterministic given ``seed``."""
    rng = np.random.default_rng(seed)
    r = space.n // 2
    order = rng.permutation(r)
    flips = rng.integers(0, 2, size=r)
    return space.build(order, flips)


def _check_dimensions(host: SignedCompleteGraph, pattern: Pattern, pair: MatchedPair) -> None:
    if not (host.n == pattern.n == pair.n):
        raise InputError(
            f"dimension mismatch: host n={host.n}, pattern n={pattern.n}, pairs n={pair.n}"
        )


def exact_expectation(host: SignedCompleteGraph, pattern: Pattern, pair: MatchedPair) -> Fraction:
    """E[m+(G_pi)] over the matched family, in closed form."""
    _check_dimensions(host, pattern, pair)
    n = host.n
    if n % 2:
        raise InputError(f"matched embeddings need an even order, got n={n}")
    within = sum(1 for e in pattern.edges if e in pair.m_g)
    crossing = pattern.m - within
    expectation = pair.p * within
    if crossing:
        per_edge = Fraction(2, n * (n - 2)) * (host.plus_count - pair.plus_pairs)
        expectation += crossing * per_edge
    return expectation


def enumeration_average(host: SignedCompleteGraph, pattern: Pattern, pair: MatchedPair) -> Fraction:
    """Average of m+(G_pi) over every member of the family."""
    _check_dimensions(host, pattern, pair)
    space = RestrictedEmbeddingSpace(pair)
    total = sum(score(host, pattern, emb).plus for emb in space.enumerate())
    return Fraction(total, space.size)


class _PartialAssignment:
    """Conditional expectation of m+ given the m_g pairs fixed so far."""

    def __init__(self, host: SignedCompleteGraph, pattern: Pattern, space: RestrictedEmbeddingSpace):
        self.host = host
        self.pattern = pattern
        self.space = space
        self.images: Dict[int, int] = {}
        self.free_pairs: List[Edge] = list(space.k_pairs)

    def expectation(self) -> Fraction:
        host = self.host
        free_vertices = [v for e in self.free_pairs for v in e]
        free_set = set(free_vertices)
        r = len(self.free_pairs)
        plus_free_pairs = sum(1 for a, b in self.free_pairs if host.is_plus(a, b))
        if free_vertices:
            block = host.sign_matrix[np.ix_(free_vertices, free_vertices)]
            plus_among_free = int(np.count_nonzero(block == 1)) // 2
        else:
            plus_among_free = 0

        total = Fraction(0)
        for u, v in self.pattern.edges:
            a, b = self.images.get(u), self.images.get(v)
            if a is not None and b is not None:
                total += host.is_plus(a, b)
            elif a is not None or b is not None:
                fixed = a if a is not None else b
                total += Fraction(len(host.plus_neighbors(fixed) & free_set), 2 * r)
            elif (u, v) in self.space.pair.m_g:
                total += Fraction(plus_free_pairs, r)
            else:
                total += Fraction(plus_among_free - plus_free_pairs, 2 * r * (r - 1))
        return total

    def assign(self, g_pair: Edge, k_pair: Edge, flip: int) -> None:
        (u, v), (a, b) = g_pair, k_pair
        if flip:
            a, b = b, a
        self.images[u], self.images[v] = a, b
        self.free_pairs.remove(k_pair)

    def release(self, g_pair: Edge, k_pair: Edge) -> None:
        u, v = g_pair
        del self.images[u], self.images[v]
        self.free_pairs.append(k_pair)
        self.free_pairs.sort()


def derandomize(host: SignedCompleteGraph, pattern: Pattern, pair: MatchedPair) -> Embedding:
    """Member of the family with m+ at least the expectation (conditional expectations)."""
    _check_dimensions(host, pattern, pair)
    space = RestrictedEmbeddingSpace(pair)
    state = _PartialAssignment(host, pattern, space)
    for g_pair in space.g_pairs:
        best = None
        for k_pair in list(state.free_pairs):
            for flip in (0, 1):
                state.assign(g_pair, k_pair, flip)
                value = state.expectation()
                state.release(g_pair, k_pair)
                if best is None or value > best[0]:
                    best = (value, k_pair, flip)
        value, k_pair, flip = best
        state.assign(g_pair, k_pair, flip)
        log_debug(f"fixed {g_pair} -> {k_pair} (flip={flip}), E = {value}")
    embedding = Embedding.from_mapping(host.n, state.images)
    expected = exact_expectation(host, pattern, pair)
    achieved = score(host, pattern, embedding).plus
    if achieved < expected:
        raise RuntimeError(f"derandomization lost expectation: {achieved} < {expected}")
    return embedding


def best_removal_vertex(host: SignedCompleteGraph) -> int:
    """Vertex x maximising m+(K - x); smallest index on ties."""
    return min(range(1, host.n + 1), key=lambda v: (host.plus_degree(v), v))


def embed_unbalanced(host: SignedCompleteGraph, pattern: Pattern) -> Embedding:
    """Embedding of ``pattern`` meeting the bounded-degree guarantee for any density."""
    if host.n != pattern.n:
        raise InputError(f"dimension mismatch: host n={host.n}, pattern n={pattern.n}")
    n = host.n
    if n < 4:
        raise InputError(f"the embedding pipeline needs n >= 4, got n={n}")
    if n % 2 == 0:
        return derandomize(host, pattern, build_matched_pair(host, pattern))

    x = best_removal_vertex(host)
    w = pattern.min_degree_vertex()
    tau = Embedding.transposition(n, w, x) if w != x else Embedding.identity(n)
    moved = pattern.relabel(tau)
    keep = [v for v in range(1, n + 1) if v != x]
    log_debug(f"odd order {n}: removing host vertex {x}, pattern vertex {w} moved there")

    reduced = embed_unbalanced(host.without_vertex(x), moved.without_vertex(x))
    lifted = {x: x}
    for i, v in enumerate(keep, start=1):
        lifted[v] = keep[reduced(i) - 1]
    return Embedding.from_mapping(n, lifted).compose(tau)
