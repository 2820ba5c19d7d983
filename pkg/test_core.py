from fractions import Fraction

import numpy as np
import pytest
from pydantic import ValidationError

from src.core import (
    Embedding,
    InputError,
    Pattern,
    SignedCompleteGraph,
    cycle_edges,
    edge_key,
    score,
)
from src.generators import pattern_factory, random_labeling
from src.models import InstanceFile, PatternFile, load_instance, save_instance


@pytest.fixture
def small_host():
    return SignedCompleteGraph.from_plus_edges(4, [[1, 2], [3, 4], [1, 3]])


def test_edge_key_is_canonical():
    assert edge_key(3, 1) == (1, 3)
    with pytest.raises(InputError):
        edge_key(2, 2)


def test_counts_and_density(small_host):
    assert small_host.plus_count == 3
    assert small_host.minus_count == 3
    assert small_host.balanced()
    assert small_host.density() == Fraction(1, 2)
    assert sorted(small_host.minus_edges()) == [(1, 4), (2, 3), (2, 4)]


def test_rejects_bad_pairs():
    with pytest.raises(InputError):
        SignedCompleteGraph.from_plus_edges(3, [[1, 4]])
    with pytest.raises(InputError):
        SignedCompleteGraph.from_plus_edges(3, [[1, 2], [2, 1]])
    with pytest.raises(InputError):
        Pattern.from_edges(3, [[1, 1]])


def test_sign_matrix_matches_labels(small_host):
    signs = small_host.sign_matrix
    assert np.array_equal(signs, signs.T)
    assert all(signs[v, v] == 0 for v in range(1, 5))
    assert signs[1, 3] == 1 and signs[2, 4] == -1
    assert small_host.sign(2, 4) == -1
    with pytest.raises(ValueError):
        signs[1, 2] = 0


def test_score_of_path(small_host):
    path = Pattern.from_edges(4, [[1, 2], [2, 3], [3, 4]])
    result = score(small_host, path, Embedding.identity(4))
    assert (result.plus, result.minus, result.signed_sum) == (2, 1, 1)


def test_score_rejects_dimension_mismatch(small_host):
    with pytest.raises(InputError):
        score(small_host, pattern_factory("matching", 6), Embedding.identity(4))


def test_score_invariant_under_relabeling():
    host = random_labeling(8, balanced=True, seed=4)
    pattern = pattern_factory("hamiltonian", 8)
    pi = Embedding((3, 1, 4, 8, 5, 2, 7, 6))
    rho = Embedding((2, 3, 1, 5, 4, 7, 8, 6))
    moved = host.relabel(rho)
    assert score(moved, pattern, rho.inverse().compose(pi)) == score(host, pattern, pi)


def test_embedding_algebra():
    pi = Embedding((2, 3, 1))
    assert pi.compose(pi.inverse()) == Embedding.identity(3)
    assert Embedding.transposition(4, 1, 3).perm == (3, 2, 1, 4)
    assert pi.as_dict() == {1: 2, 2: 3, 3: 1}
    with pytest.raises(InputError):
        Embedding((1, 1, 2))


def test_derived_graphs(small_host):
    assert small_host.negated().plus_count == 3
    assert small_host.with_flipped([(1, 2)]).plus_count == 2
    reduced = small_host.without_vertex(1)
    assert reduced.n == 3 and reduced.sorted_plus_edges() == [(2, 3)]


def test_pattern_degrees():
    pattern = pattern_factory("clique_factor", 8, 3)
    assert pattern.max_degree == pattern.min_degree == 3
    assert pattern.m == 12
    assert pattern.min_degree_vertex() == 1


def test_cycle_edges_closes_the_walk():
    assert cycle_edges([2, 1, 3, 4]) == [(1, 2), (1, 3), (3, 4), (2, 4)]


def test_instance_file_validation_names_the_field():
    with pytest.raises(ValidationError) as info:
        InstanceFile.model_validate({"n": 4, "plus_edges": [[1, 2], [3, 3]]})
    assert "plus_edges[1]" in str(info.value)
    with pytest.raises(ValidationError):
        InstanceFile.model_validate({"n": 4, "plus_edges": [], "extra": 1})
    with pytest.raises(ValidationError):
        PatternFile.model_validate({"n": 3, "edges": [[1, 2], [1, 2]]})


def test_instance_file_on_disk(tmp_path, small_host):
    path = tmp_path / "inst.json"
    save_instance(small_host, path)
    assert load_instance(path) == small_host
