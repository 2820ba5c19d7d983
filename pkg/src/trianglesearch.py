"""Triangle-factor local search with the pairwise plus-edge cap certificate."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from simple_logging import log_move
from src.bounds import TRIANGLE_PAIR_CAPS
from src.core import InputError, SignedCompleteGraph

Triangle = Tuple[int, int, int]


@dataclass(frozen=True)
class TriangleFactor:
    triangles: Tuple[Triangle, ...]
    host_n: int

    def __post_init__(self):
        if self.host_n % 3:
            raise InputError(f"triangle factors need n divisible by 3, got n={self.host_n}")
        triangles = tuple(tuple(sorted(int(v) for v in t)) for t in self.triangles)
        if any(len(t) != 3 for t in triangles):
            raise InputError("every part of a triangle factor must have three vertices")
        if sorted(v for t in triangles for v in t) != list(range(1, self.host_n + 1)):
            raise InputError(f"triangles do not partition 1..{self.host_n}")
        object.__setattr__(self, "triangles", triangles)

    @classmethod
    def consecutive(cls, n: int) -> "TriangleFactor":
        return cls(tuple((v, v + 1, v + 2) for v in range(1, n + 1, 3)), n)

    @classmethod
    def shuffled(cls, n: int, seed: int) -> "TriangleFactor":
        if n % 3:
            raise InputError(f"triangle factors need n divisible by 3, got n={n}")
        order = [int(v) for v in np.random.default_rng(seed).permutation(np.arange(1, n + 1))]
        return cls(tuple(tuple(order[i:i + 3]) for i in range(0, n, 3)), n)

    def as_lists(self) -> List[List[int]]:
        return [list(t) for t in self.triangles]


def triangle_plus(host: SignedCompleteGraph, triangle: Sequence[int]) -> int:
    a, b, c = triangle
    return host.is_plus(a, b) + host.is_plus(a, c) + host.is_plus(b, c)


def plus_between(host: SignedCompleteGraph, first: Sequence[int], second: Sequence[int]) -> int:
    return sum(host.is_plus(u, v) for u in first for v in second)


@dataclass(frozen=True)
class TriangleProfile:
    """Triangle counts by number of plus-edges, and t_j = counts_j / n."""

    counts: Tuple[int, int, int, int]
    n: int

    @property
    def t(self) -> Tuple[Fraction, ...]:
        return tuple(Fraction(c, self.n) for c in self.counts)

    @property
    def plus(self) -> int:
        return self.counts[1] + 2 * self.counts[2] + 3 * self.counts[3]


def profile(host: SignedCompleteGraph, factor: TriangleFactor) -> TriangleProfile:
    if factor.host_n != host.n:
        raise InputError(f"factor on {factor.host_n} vertices does not fit host n={host.n}")
    counts = [0, 0, 0, 0]
    for triangle in factor.triangles:
        counts[triangle_plus(host, triangle)] += 1
    return TriangleProfile(tuple(counts), host.n)


def repartitions(six: Sequence[int]) -> Iterator[Tuple[Triangle, Triangle]]:
    """The 10 splits of six vertices into two triples, the smallest vertex always first."""
    ordered = sorted(six)
    head, rest = ordered[0], ordered[1:]
    for pair in combinations(rest, 2):
        first = (head,) + pair
        second = tuple(v for v in rest if v not in pair)
        yield first, second


def _objective(plus_counts: Sequence[int]) -> Tuple[int, int]:
    return sum(plus_counts), sum(1 for c in plus_counts if c == 2)


def _improving_swap(host, triangles, plus) -> Optional[Tuple[int, int, Triangle, Triangle]]:
    for i, j in combinations(range(len(triangles)), 2):
        before = _objective((plus[i], plus[j]))
        for first, second in repartitions(triangles[i] + triangles[j]):
            after = _objective((triangle_plus(host, first), triangle_plus(host, second)))
            if after > before:
                return i, j, first, second
    return None


def triangle_local_search(
    host: SignedCompleteGraph, start: Optional[TriangleFactor] = None, seed: Optional[int] = None
) -> TriangleFactor:
    """Pairwise-stable factor; accepts a repartition iff (m+(F), #2-plus triangles) increases."""
    n = host.n
    if n % 3:
        raise InputError(f"triangle factors need n divisible by 3, got n={n}")
    if start is None:
        start = TriangleFactor.shuffled(n, seed) if seed is not None else TriangleFactor.consecutive(n)
    if start.host_n != n:
        raise InputError(f"start factor on {start.host_n} vertices does not fit host n={n}")

    triangles = list(start.triangles)
    plus = [triangle_plus(host, t) for t in triangles]
    while True:
        swap = _improving_swap(host, triangles, plus)
        if swap is None:
            break
        i, j, first, second = swap
        triangles[i], triangles[j] = first, second
        plus[i], plus[j] = triangle_plus(host, first), triangle_plus(host, second)
        log_move("triangles", f"repartition({i},{j})", _objective(plus))
    return TriangleFactor(tuple(triangles), n)


@dataclass
class TriangleCertificate:
    passed: bool
    pairs_checked: int
    plus_total: int
    plus_ceiling: int
    first_violation: Optional[Dict[str, int]] = None
    profile_counts: List[int] = field(default_factory=list)

    def as_dict(self) -> Dict[str, object]:
        return {
            "passed": self.passed,
            "pairs_checked": self.pairs_checked,
            "plus_total": self.plus_total,
            "plus_ceiling": self.plus_ceiling,
            "first_violation": self.first_violation,
            "profile_counts": self.profile_counts,
        }


def certify_fixed_point(host: SignedCompleteGraph, factor: TriangleFactor) -> TriangleCertificate:
    """Check every pair against the cap table, then the global counting inequality."""
    stats = profile(host, factor)
    plus = [triangle_plus(host, t) for t in factor.triangles]
    ceiling = sum(plus)
    violation = None
    pairs = 0
    for i, j in combinations(range(len(factor.triangles)), 2):
        pairs += 1
        cap = TRIANGLE_PAIR_CAPS[plus[i]][plus[j]]
        ceiling += cap
        between = plus_between(host, factor.triangles[i], factor.triangles[j])
        if between > cap and violation is None:
            violation = {"i": i, "j": j, "plus_between": between, "cap": cap}
    return TriangleCertificate(
        passed=violation is None and host.plus_count <= ceiling,
        pairs_checked=pairs,
        plus_total=host.plus_count,
        plus_ceiling=ceiling,
        first_violation=violation,
        profile_counts=list(stats.counts),
    )
