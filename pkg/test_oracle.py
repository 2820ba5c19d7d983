from math import factorial

import pytest

from src.core import InputError, Pattern, SignedCompleteGraph
from src.generators import pattern_factory, planted_factor, random_labeling
from src.oracle import all_triangle_factors, best_hamiltonian, best_triangle_factor, spectrum


@pytest.fixture
def small_host():
    return SignedCompleteGraph.from_plus_edges(4, [[1, 2], [3, 4], [1, 3]])


def test_matching_spectrum_on_small_host(small_host):
    result = spectrum(small_host, pattern_factory("matching", 4))
    assert result.values == (0, 1, 2)
    assert result.multiplicities == {0: 8, 1: 8, 2: 8}
    assert result.total == 24
    assert result.mean == 1
    assert result.closest_to_mean() == 1


def test_star_host_spectrum_is_constant():
    # every perfect matching of K4 uses exactly one edge at vertex 1
    star = SignedCompleteGraph.from_plus_edges(4, [[1, 2], [1, 3], [1, 4]])
    result = spectrum(star, pattern_factory("matching", 4))
    assert result.values == (1,)
    assert result.mean == 1
    assert result.max_gap() == 0


def test_star_pattern_follows_plus_degrees(small_host):
    star = Pattern.from_edges(4, [[1, 2], [1, 3], [1, 4]])
    result = spectrum(small_host, star)
    assert result.values == (1, 2)
    assert result.mean == small_host.density() * 3


def test_all_plus_spectrum():
    pattern = pattern_factory("hamiltonian", 6)
    result = spectrum(SignedCompleteGraph.all_plus(6), pattern)
    assert result.values == (6,)
    assert result.total == factorial(6)


def test_spectrum_caps_and_dimensions(small_host):
    with pytest.raises(InputError):
        spectrum(SignedCompleteGraph.all_plus(8), pattern_factory("matching", 8), cap=7)
    with pytest.raises(InputError):
        spectrum(small_host, pattern_factory("matching", 6))


@pytest.mark.parametrize("n", [4, 5, 6, 7, 8])
@pytest.mark.parametrize("seed", range(3))
@pytest.mark.parametrize("kind", ["path", "hamiltonian", "matching", "triangle_factor"])
def test_mean_identity_and_gaps(n, seed, kind):
    if (kind == "matching" and n % 2) or (kind == "triangle_factor" and n % 3):
        pytest.skip("pattern does not exist at this order")
    host = random_labeling(n, d=0.25 + 0.25 * seed, seed=seed)
    pattern = pattern_factory(kind, n)
    result = spectrum(host, pattern)
    assert result.mean == host.density() * pattern.m
    assert result.max_gap() <= pattern.max_degree + pattern.min_degree
    assert abs(result.closest_to_mean() - result.mean) <= pattern.max_degree


def test_parallel_blocks_agree():
    host = random_labeling(7, d=0.5, seed=3)
    pattern = pattern_factory("path", 7)
    assert spectrum(host, pattern, workers=2) == spectrum(host, pattern, workers=1)


def test_best_hamiltonian_small_host(small_host):
    best = best_hamiltonian(small_host)
    assert best.plus == 3
    assert best.cycle == (1, 2, 4, 3)
    assert best.min_plus == 1
    assert best.max_abs_signed_sum == 2
    assert best.cycles == 3


def test_best_hamiltonian_extremes():
    all_minus = best_hamiltonian(SignedCompleteGraph.all_minus(5))
    assert (all_minus.plus, all_minus.max_abs_signed_sum, all_minus.cycles) == (0, 5, 12)
    triangle = best_hamiltonian(SignedCompleteGraph.from_plus_edges(3, [[1, 2]]))
    assert (triangle.plus, triangle.cycles) == (1, 1)
    with pytest.raises(InputError):
        best_hamiltonian(SignedCompleteGraph.all_plus(9), cap=8)


def test_triangle_factor_counts():
    assert sum(1 for _ in all_triangle_factors(list(range(1, 7)))) == 10
    assert sum(1 for _ in all_triangle_factors(list(range(1, 10)))) == 280


def test_best_triangle_factor():
    assert best_triangle_factor(SignedCompleteGraph.all_plus(9)).plus == 9
    planted = best_triangle_factor(planted_factor(9, 3, seed=2))
    assert planted.plus == 9 and planted.factors == 280
    assert best_triangle_factor(SignedCompleteGraph.all_minus(6)).plus == 0
    with pytest.raises(InputError):
        best_triangle_factor(SignedCompleteGraph.all_plus(7))
