"""Instance and pattern generators: extremal constructions and seeded random ones."""
from __future__ import annotations

import math
from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.core import Edge, InputError, Pattern, SignedCompleteGraph, all_pairs, edge_key, pair_count

PatternKind = Literal["clique_factor", "matching", "hamiltonian", "path", "triangle_factor", "random"]
InstanceKind = Literal[
    "bipartite_minus_matching", "minus_clique", "random_density", "random_balanced", "planted"
]


def _require_balanceable(n: int) -> None:
    if n % 4 not in (0, 1):
        raise InputError(f"a balanced labeling needs n mod 4 in {{0, 1}}, got n={n}")


def bipartite_minus_matching(n: int) -> SignedCompleteGraph:
    """K_{n/2,n/2} with the pairs (i, i + n/2), i <= n/4, removed; balanced."""
    if n < 4 or n % 4:
        raise InputError(f"bipartite minus-matching needs n divisible by 4, got n={n}")
    half = n // 2
    removed = {(i, i + half) for i in range(1, n // 4 + 1)}
    plus = frozenset(
        (a, b)
        for a in range(1, half + 1)
        for b in range(half + 1, n + 1)
        if (a, b) not in removed
    )
    return SignedCompleteGraph(n, plus)


def minus_clique(n: int) -> SignedCompleteGraph:
    """Minus-edges: a clique on the floor(n / sqrt 2) top vertices, topped up to balance."""
    _require_balanceable(n)
    if n < 4:
        raise InputError(f"minus clique needs n >= 4, got n={n}")
    target = pair_count(n) // 2
    r = math.isqrt(n * n // 2)
    clique = range(n - r + 1, n + 1)
    minus = {edge_key(u, v) for u in clique for v in clique if u < v}
    for u in range(1, n - r + 1):
        for v in clique:
            if len(minus) >= target:
                break
            minus.add((u, v))
    return SignedCompleteGraph(n, frozenset(e for e in all_pairs(n) if e not in minus))


def random_labeling(
    n: int, d: Optional[float] = None, balanced: bool = False, seed: int = 0
) -> SignedCompleteGraph:
    """Exactly round(d C(n,2)) plus-edges (C(n,2)/2 when balanced), drawn without replacement."""
    total = pair_count(n)
    if balanced:
        _require_balanceable(n)
        count = total // 2
    else:
        if d is None or not 0 <= d <= 1:
            raise InputError(f"density must lie in [0, 1], got d={d}")
        count = round(d * total)
    pairs = list(all_pairs(n))
    rng = np.random.default_rng(seed)
    chosen = rng.choice(total, size=count, replace=False) if count else []
    return SignedCompleteGraph(n, frozenset(pairs[int(i)] for i in chosen))


def planted_factor(n: int, size: int = 3, seed: Optional[int] = None) -> SignedCompleteGraph:
    """Plus-edges forming n/size disjoint cliques; vertex blocks shuffled when seeded."""
    if size < 2 or n % size:
        raise InputError(f"cannot split n={n} into cliques of order {size}")
    order = list(range(1, n + 1))
    if seed is not None:
        order = [int(v) for v in np.random.default_rng(seed).permutation(order)]
    plus = set()
    for start in range(0, n, size):
        block = order[start:start + size]
        plus.update(edge_key(u, v) for i, u in enumerate(block) for v in block[i + 1:])
    return SignedCompleteGraph(n, frozenset(plus))


def _blocks(n: int, size: int) -> List[Edge]:
    edges = []
    for start in range(1, n + 1, size):
        block = range(start, start + size)
        edges.extend((u, v) for u in block for v in block if u < v)
    return edges


def pattern_factory(kind: str, n: int, delta: Optional[int] = None, seed: int = 0) -> Pattern:
    if kind == "clique_factor":
        if delta is None or delta < 1 or n % (delta + 1):
            raise InputError(f"clique factor needs n divisible by delta+1 (n={n}, delta={delta})")
        return Pattern(n, frozenset(_blocks(n, delta + 1)))
    if kind == "matching":
        if n % 2:
            raise InputError(f"perfect matching needs an even n, got n={n}")
        return Pattern(n, frozenset(_blocks(n, 2)))
    if kind == "triangle_factor":
        if n % 3:
            raise InputError(f"triangle factor needs n divisible by 3, got n={n}")
        return Pattern(n, frozenset(_blocks(n, 3)))
    if kind == "hamiltonian":
        if n < 3:
            raise InputError(f"Hamiltonian cycle pattern needs n >= 3, got n={n}")
        return Pattern(n, frozenset(edge_key(v, v % n + 1) for v in range(1, n + 1)))
    if kind == "path":
        if n < 2:
            raise InputError(f"path pattern needs n >= 2, got n={n}")
        return Pattern(n, frozenset((v, v + 1) for v in range(1, n)))
    if kind == "random":
        if delta is None or delta < 0:
            raise InputError(f"random pattern needs a degree bound, got delta={delta}")
        pairs = list(all_pairs(n))
        degree = [0] * (n + 1)
        edges = []
        for i in np.random.default_rng(seed).permutation(len(pairs)):
            u, v = pairs[int(i)]
            if degree[u] < delta and degree[v] < delta:
                edges.append((u, v))
                degree[u] += 1
                degree[v] += 1
        return Pattern(n, frozenset(edges))
    raise InputError(f"unknown pattern kind {kind!r}")


class GeneratorSpec(BaseModel):
    """Parameters of one generated instance, checked for feasibility on construction."""

    model_config = ConfigDict(extra="forbid")

    kind: InstanceKind
    n: int = Field(ge=1)
    d: Optional[float] = Field(default=None, ge=0, le=1)
    seed: int = 0
    r: int = Field(default=3, ge=2)

    @model_validator(mode="after")
    def check_feasible(self):
        if self.kind == "bipartite_minus_matching" and (self.n < 4 or self.n % 4):
            raise ValueError(f"n must be a positive multiple of 4 for {self.kind}, got {self.n}")
        if self.kind in ("minus_clique", "random_balanced") and self.n % 4 not in (0, 1):
            raise ValueError(f"n mod 4 must be 0 or 1 for {self.kind}, got n={self.n}")
        if self.kind == "minus_clique" and self.n < 4:
            raise ValueError(f"n must be at least 4 for {self.kind}, got n={self.n}")
        if self.kind == "random_density" and self.d is None:
            raise ValueError("d is required for random_density")
        if self.kind == "planted" and self.n % self.r:
            raise ValueError(f"n={self.n} is not a multiple of the clique order r={self.r}")
        return self

    def build(self) -> SignedCompleteGraph:
        if self.kind == "bipartite_minus_matching":
            return bipartite_minus_matching(self.n)
        if self.kind == "minus_clique":
            return minus_clique(self.n)
        if self.kind == "random_density":
            return random_labeling(self.n, d=self.d, seed=self.seed)
        if self.kind == "random_balanced":
            return random_labeling(self.n, balanced=True, seed=self.seed)
        return planted_factor(self.n, self.r, seed=self.seed)
