"""Signed complete graphs, spanning patterns, embeddings and plus/minus scoring.

Vertices are the integers 1..n. Edge keys are stored canonically as
``(min, max)`` tuples. All types are immutable once built.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Sequence, Tuple

import numpy as np

Edge = Tuple[int, int]


class InputError(ValueError):
    """Rejected input (dimension mismatch, infeasible parameters, caps exceeded)."""


def edge_key(u: int, v: int) -> Edge:
    """Canonical key of the unordered pair {u, v}."""
    if u == v:
        raise InputError(f"loop at vertex {u} is not an edge")
    return (u, v) if u < v else (v, u)


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def all_pairs(n: int) -> Iterator[Edge]:
    """Every unordered pair of 1..n in lexicographic order."""
    return combinations(range(1, n + 1), 2)


def cycle_edges(cycle: Sequence[int]) -> List[Edge]:
    """Edges of the closed walk ``cycle[0] cycle[1] ... cycle[-1] cycle[0]``."""
    k = len(cycle)
    return [edge_key(cycle[i], cycle[(i + 1) % k]) for i in range(k)]


def _canonical_edges(n: int, edges: Iterable[Sequence[int]], what: str) -> FrozenSet[Edge]:
    keys = set()
    for pair in edges:
        if len(pair) != 2:
            raise InputError(f"{what}: {list(pair)} is not a vertex pair")
        u, v = int(pair[0]), int(pair[1])
        if not (1 <= u <= n and 1 <= v <= n):
            raise InputError(f"{what}: pair ({u}, {v}) leaves the vertex range 1..{n}")
        key = edge_key(u, v)
        if key in keys:
            raise InputError(f"{what}: duplicate pair {key}")
        keys.add(key)
    return frozenset(keys)


@dataclass(frozen=True)
class SignedCompleteGraph:
    """The pair (K, c): complete graph on 1..n with a +1/-1 label per pair.

    Only the plus-edges are stored; every other pair is a minus-edge.
    """

    n: int
    plus_edges: FrozenSet[Edge]
    _neighbors: Tuple[FrozenSet[int], ...] = field(init=False, repr=False, compare=False)
    _signs: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise InputError(f"vertex count must be at least 1, got {self.n}")
        neighbors: List[set] = [set() for _ in range(self.n + 1)]
        signs = -np.ones((self.n + 1, self.n + 1), dtype=np.int8)
        np.fill_diagonal(signs, 0)
        signs[0, :] = 0
        signs[:, 0] = 0
        for u, v in self.plus_edges:
            if not (1 <= u < v <= self.n):
                raise InputError(f"plus-edge ({u}, {v}) is not a canonical pair of 1..{self.n}")
            neighbors[u].add(v)
            neighbors[v].add(u)
            signs[u, v] = signs[v, u] = 1
        signs.setflags(write=False)
        object.__setattr__(self, "_neighbors", tuple(frozenset(s) for s in neighbors))
        object.__setattr__(self, "_signs", signs)

    @classmethod
    def from_plus_edges(cls, n: int, plus_edges: Iterable[Sequence[int]]) -> "SignedCompleteGraph":
        return cls(n, _canonical_edges(n, plus_edges, "plus_edges"))

    @classmethod
    def all_plus(cls, n: int) -> "SignedCompleteGraph":
        return cls(n, frozenset(all_pairs(n)))

    @classmethod
    def all_minus(cls, n: int) -> "SignedCompleteGraph":
        return cls(n, frozenset())

    # -- labels -----------------------------------------------------------

    def is_plus(self, u: int, v: int) -> bool:
        return v in self._neighbors[u]

    def sign(self, u: int, v: int) -> int:
        if u == v:
            raise InputError(f"loop at vertex {u} has no sign")
        return 1 if v in self._neighbors[u] else -1

    def plus_neighbors(self, u: int) -> FrozenSet[int]:
        return self._neighbors[u]

    def plus_degree(self, u: int) -> int:
        return len(self._neighbors[u])

    @property
    def sign_matrix(self) -> np.ndarray:
        """Read-only (n+1)x(n+1) int8 matrix; row and column 0 are unused."""
        return self._signs

    @property
    def total_pairs(self) -> int:
        return pair_count(self.n)

    @property
    def plus_count(self) -> int:
        return len(self.plus_edges)

    @property
    def minus_count(self) -> int:
        return self.total_pairs - self.plus_count

    def density(self) -> Fraction:
        """Plus-density d = m+(K) / C(n, 2)."""
        if self.total_pairs == 0:
            return Fraction(0)
        return Fraction(self.plus_count, self.total_pairs)

    def balanced(self) -> bool:
        return self.plus_count == self.minus_count

    def minus_edges(self) -> Iterator[Edge]:
        return (e for e in all_pairs(self.n) if e not in self.plus_edges)

    def sorted_plus_edges(self) -> List[Edge]:
        return sorted(self.plus_edges)

    # -- derived graphs ---------------------------------------------------

    def induced(self, keep: Sequence[int]) -> "SignedCompleteGraph":
        """Labeling restricted to ``keep``; ``keep[i]`` becomes vertex i + 1."""
        position = {v: i + 1 for i, v in enumerate(keep)}
        if len(position) != len(keep):
            raise InputError("induced subgraph vertices must be distinct")
        plus = set()
        for u, v in self.plus_edges:
            if u in position and v in position:
                plus.add(edge_key(position[u], position[v]))
        return SignedCompleteGraph(len(keep), frozenset(plus))

    def without_vertex(self, x: int) -> "SignedCompleteGraph":
        return self.induced([v for v in range(1, self.n + 1) if v != x])

    def relabel(self, rho: "Embedding") -> "SignedCompleteGraph":
        """The labeling c o rho, i.e. sign'({a, b}) = sign({rho(a), rho(b)})."""
        if rho.n != self.n:
            raise InputError(f"relabeling of size {rho.n} does not match host order {self.n}")
        inverse = rho.inverse()
        return SignedCompleteGraph(
            self.n, frozenset(edge_key(inverse(u), inverse(v)) for u, v in self.plus_edges)
        )

    def with_flipped(self, edges: Iterable[Edge]) -> "SignedCompleteGraph":
        """Copy with the labels of ``edges`` reversed."""
        plus = set(self.plus_edges)
        for u, v in edges:
            key = edge_key(u, v)
            if key in plus:
                plus.remove(key)
            else:
                plus.add(key)
        return SignedCompleteGraph(self.n, frozenset(plus))

    def negated(self) -> "SignedCompleteGraph":
        return SignedCompleteGraph(self.n, frozenset(self.minus_edges()))


@dataclass(frozen=True)
class Pattern:
    """Spanning subgraph G given by its edge set; isolated vertices allowed."""

    n: int
    edges: FrozenSet[Edge]
    max_degree: int = field(init=False)
    min_degree: int = field(init=False)
    m: int = field(init=False)
    _adjacency: Tuple[FrozenSet[int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise InputError(f"vertex count must be at least 1, got {self.n}")
        adjacency: List[set] = [set() for _ in range(self.n + 1)]
        for u, v in self.edges:
            if not (1 <= u < v <= self.n):
                raise InputError(f"edge ({u}, {v}) is not a canonical pair of 1..{self.n}")
            adjacency[u].add(v)
            adjacency[v].add(u)
        degrees = [len(adjacency[v]) for v in range(1, self.n + 1)]
        object.__setattr__(self, "_adjacency", tuple(frozenset(s) for s in adjacency))
        object.__setattr__(self, "max_degree", max(degrees))
        object.__setattr__(self, "min_degree", min(degrees))
        object.__setattr__(self, "m", len(self.edges))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Pattern":
        return cls(n, _canonical_edges(n, edges, "edges"))

    def neighbors(self, v: int) -> FrozenSet[int]:
        return self._adjacency[v]

    def degree(self, v: int) -> int:
        return len(self._adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adjacency[u]

    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)

    def min_degree_vertex(self) -> int:
        """Smallest vertex of minimum degree."""
        return min(range(1, self.n + 1), key=lambda v: (self.degree(v), v))

    def relabel(self, perm: "Embedding") -> "Pattern":
        """The copy with edge set {perm(u) perm(v) : uv in E}."""
        if perm.n != self.n:
            raise InputError(f"relabeling of size {perm.n} does not match pattern order {self.n}")
        return Pattern(self.n, frozenset(edge_key(perm(u), perm(v)) for u, v in self.edges))

    def induced(self, keep: Sequence[int]) -> "Pattern":
        position = {v: i + 1 for i, v in enumerate(keep)}
        return Pattern(
            len(keep),
            frozenset(
                edge_key(position[u], position[v])
                for u, v in self.edges
                if u in position and v in position
            ),
        )

    def without_vertex(self, x: int) -> "Pattern":
        return self.induced([v for v in range(1, self.n + 1) if v != x])


@dataclass(frozen=True)
class Embedding:
    """A permutation pi of 1..n; ``perm[u - 1] == pi(u)``."""

    perm: Tuple[int, ...]

    def __post_init__(self):
        perm = tuple(int(v) for v in self.perm)
        if sorted(perm) != list(range(1, len(perm) + 1)):
            raise InputError(f"{list(perm)} is not a bijection of 1..{len(perm)}")
        object.__setattr__(self, "perm", perm)

    @classmethod
    def identity(cls, n: int) -> "Embedding":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_mapping(cls, n: int, mapping: Mapping[int, int]) -> "Embedding":
        return cls(tuple(mapping[u] for u in range(1, n + 1)))

    @classmethod
    def transposition(cls, n: int, a: int, b: int) -> "Embedding":
        perm = list(range(1, n + 1))
        perm[a - 1], perm[b - 1] = b, a
        return cls(tuple(perm))

    @property
    def n(self) -> int:
        return len(self.perm)

    def __call__(self, u: int) -> int:
        return self.perm[u - 1]

    def inverse(self) -> "Embedding":
        inverse = [0] * self.n
        for u, image in enumerate(self.perm, start=1):
            inverse[image - 1] = u
        return Embedding(tuple(inverse))

    def compose(self, other: "Embedding") -> "Embedding":
        """self o other, i.e. u -> self(other(u))."""
        if other.n != self.n:
            raise InputError("cannot compose permutations of different sizes")
        return Embedding(tuple(self(other(u)) for u in range(1, self.n + 1)))

    def as_dict(self) -> Dict[int, int]:
        return {u: self(u) for u in range(1, self.n + 1)}


@dataclass(frozen=True)
class EmbeddingScore:
    plus: int
    minus: int
    signed_sum: int


def score(host: SignedCompleteGraph, pattern: Pattern, emb: Embedding) -> EmbeddingScore:
    """m+(G_pi), m-(G_pi) and c(G_pi) for the copy of ``pattern`` placed by ``emb``."""
    if not (host.n == pattern.n == emb.n):
        raise InputError(
            f"dimension mismatch: host n={host.n}, pattern n={pattern.n}, embedding n={emb.n}"
        )
    plus = sum(1 for u, v in pattern.edges if host.is_plus(emb(u), emb(v)))
    minus = pattern.m - plus
    return EmbeddingScore(plus=plus, minus=minus, signed_sum=plus - minus)


def plus_subgraph(host: SignedCompleteGraph) -> Pattern:
    """The spanning pattern formed by the plus-edges."""
    return Pattern(host.n, host.plus_edges)
