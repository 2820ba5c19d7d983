"""Exhaustive ground truth at small n.

Enumeration is vectorised with numpy over chunks of permutations and
split into blocks by one fixed position; with PLUSKIT_WORKERS > 1 the
blocks run in a process pool and are merged in block order.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, islice, permutations
from math import factorial
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from simple_logging import log_debug
from src.config import Config
from src.core import InputError, Pattern, SignedCompleteGraph
from src.trianglesearch import TriangleFactor, triangle_plus

CHUNK = 50_000


def _chunks(iterator: Iterable[Tuple[int, ...]]) -> Iterable[np.ndarray]:
    iterator = iter(iterator)
    while True:
        block = list(islice(iterator, CHUNK))
        if not block:
            return
        yield np.asarray(block, dtype=np.intp)


def _run_blocks(worker: Callable, jobs: List[tuple], workers: Optional[int]) -> list:
    workers = workers or Config.WORKERS
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(worker, *zip(*jobs)))
    return [worker(*job) for job in jobs]


# -- spectrum -----------------------------------------------------------------


@dataclass(frozen=True)
class SpectrumResult:
    multiplicities: Dict[int, int]
    total: int

    @property
    def values(self) -> Tuple[int, ...]:
        return tuple(sorted(self.multiplicities))

    @property
    def mean(self) -> Fraction:
        return Fraction(sum(v * c for v, c in self.multiplicities.items()), self.total)

    def gaps(self) -> List[int]:
        values = self.values
        return [b - a for a, b in zip(values, values[1:])]

    def max_gap(self) -> int:
        return max(self.gaps(), default=0)

    def closest_to_mean(self) -> int:
        """Achievable value nearest the mean; the smaller one on ties."""
        mean = self.mean
        return min(self.values, key=lambda v: (abs(v - mean), v))

    def as_dict(self) -> Dict[str, object]:
        return {
            "values": list(self.values),
            "multiplicities": {str(v): c for v, c in sorted(self.multiplicities.items())},
            "mean": str(self.mean),
            "total": self.total,
            "max_gap": self.max_gap(),
        }


def _spectrum_block(signs: np.ndarray, us: np.ndarray, vs: np.ndarray, n: int, first: int) -> np.ndarray:
    rest = [v for v in range(1, n + 1) if v != first]
    counts = np.zeros(len(us) + 1, dtype=np.int64)
    for chunk in _chunks((first,) + p for p in permutations(rest)):
        plus = (signs[chunk[:, us], chunk[:, vs]] == 1).sum(axis=1)
        counts += np.bincount(plus, minlength=len(us) + 1)
    return counts


def spectrum(
    host: SignedCompleteGraph,
    pattern: Pattern,
    cap: Optional[int] = None,
    workers: Optional[int] = None,
) -> SpectrumResult:
    """Multiset of m+(G_pi) over all n! permutations."""
    if host.n != pattern.n:
        raise InputError(f"dimension mismatch: host n={host.n}, pattern n={pattern.n}")
    n = host.n
    cap = cap or Config.SPECTRUM_CAP
    if n > cap:
        raise InputError(f"spectrum enumerates n! permutations; n={n} exceeds the cap {cap}, sample instead")
    edges = pattern.sorted_edges()
    us = np.array([u - 1 for u, _ in edges], dtype=np.intp)
    vs = np.array([v - 1 for _, v in edges], dtype=np.intp)
    jobs = [(host.sign_matrix, us, vs, n, first) for first in range(1, n + 1)]
    counts = sum(_run_blocks(_spectrum_block, jobs, workers))
    log_debug(f"spectrum over {factorial(n)} permutations done")
    return SpectrumResult({int(v): int(c) for v, c in enumerate(counts) if c}, factorial(n))


# -- Hamiltonian cycles ----------------------------------------------------------


@dataclass(frozen=True)
class HamiltonianOptimum:
    cycle: Tuple[int, ...]
    plus: int
    min_plus: int
    max_abs_signed_sum: int
    cycles: int


def _hamiltonian_block(signs: np.ndarray, n: int, second: int) -> Tuple[int, Tuple[int, ...], int, int]:
    rest = [v for v in range(2, n + 1) if v != second]
    best, best_cycle, worst, seen = -1, (), n + 1, 0
    tours = ((1, second) + p for p in permutations(rest) if second < p[-1])
    for chunk in _chunks(tours):
        following = np.roll(chunk, -1, axis=1)
        plus = (signs[chunk, following] == 1).sum(axis=1)
        seen += len(plus)
        top = int(np.argmax(plus))
        if plus[top] > best:
            best, best_cycle = int(plus[top]), tuple(int(v) for v in chunk[top])
        worst = min(worst, int(plus.min()))
    return best, best_cycle, worst, seen


def best_hamiltonian(
    host: SignedCompleteGraph, cap: Optional[int] = None, workers: Optional[int] = None
) -> HamiltonianOptimum:
    """Exhaustive over the (n-1)!/2 Hamiltonian cycles: max and min m+, max |c(C)|."""
    n = host.n
    cap = cap or Config.HAMILTONIAN_CAP
    if n < 3:
        raise InputError(f"Hamiltonian cycles need n >= 3, got n={n}")
    if n > cap:
        raise InputError(f"n={n} exceeds the Hamiltonian oracle cap {cap}")
    if n == 3:
        plus = host.plus_count
        return HamiltonianOptimum((1, 2, 3), plus, plus, abs(2 * plus - 3), 1)

    jobs = [(host.sign_matrix, n, second) for second in range(2, n + 1)]
    best, best_cycle, worst, seen = -1, (), n + 1, 0
    for plus, cycle, low, count in _run_blocks(_hamiltonian_block, jobs, workers):
        if count == 0:
            continue
        if plus > best:
            best, best_cycle = plus, cycle
        worst = min(worst, low)
        seen += count
    return HamiltonianOptimum(
        cycle=best_cycle,
        plus=best,
        min_plus=worst,
        max_abs_signed_sum=max(abs(2 * best - n), abs(2 * worst - n)),
        cycles=seen,
    )


# -- triangle factors ------------------------------------------------------------


def all_triangle_factors(vertices: Sequence[int]) -> Iterable[List[Tuple[int, int, int]]]:
    """Every partition of ``vertices`` into triples; the smallest vertex leads each step."""
    if not vertices:
        yield []
        return
    head, rest = vertices[0], vertices[1:]
    for pair in combinations(rest, 2):
        remaining = [v for v in rest if v not in pair]
        for tail in all_triangle_factors(remaining):
            yield [(head,) + pair] + tail


@dataclass(frozen=True)
class TriangleOptimum:
    factor: TriangleFactor
    plus: int
    factors: int


def best_triangle_factor(host: SignedCompleteGraph, cap: Optional[int] = None) -> TriangleOptimum:
    n = host.n
    cap = cap or Config.TRIANGLE_CAP
    if n % 3:
        raise InputError(f"triangle factors need n divisible by 3, got n={n}")
    if n > cap:
        raise InputError(f"n={n} exceeds the triangle-factor oracle cap {cap}")
    best, best_factor, seen = -1, None, 0
    for factor in all_triangle_factors(list(range(1, n + 1))):
        seen += 1
        plus = sum(triangle_plus(host, t) for t in factor)
        if plus > best:
            best, best_factor = plus, factor
    return TriangleOptimum(TriangleFactor(tuple(best_factor), n), best, seen)
