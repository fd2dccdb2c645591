from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from src.errors import InvalidInputError, ResourceLimitError
from src.matchings import (
    MatchingFamily,
    PerfectMatching,
    canonical_family,
    canonical_mask,
    edge_intersection,
    enumerate_matchings,
    random_matching,
    setwise_t_intersecting_by_shape,
    setwise_t_intersecting_oracle,
    union_shape,
)
from src.partitions import double_factorial

from .conftest import P


def M(*edges) -> PerfectMatching:
    return PerfectMatching.from_edges(edges)


seeds = st.integers(0, 2 ** 32 - 1)


def test_enumeration_counts():
    for k in range(1, 7):
        family = enumerate_matchings(k)
        assert len(family) == double_factorial(2 * k - 1)
        assert len(set(family.members)) == len(family)


@pytest.mark.slow
def test_enumeration_count_k7():
    assert len(enumerate_matchings(7)) == 135135


def test_enumeration_order_k2():
    assert enumerate_matchings(2).members == [M((1, 2), (3, 4)), M((1, 3), (2, 4)), M((1, 4), (2, 3))]
    assert enumerate_matchings(1).members == [M((1, 2))]


def test_enumeration_guard():
    with pytest.raises(ResourceLimitError):
        enumerate_matchings(9)


def test_matching_validation():
    with pytest.raises(InvalidInputError):
        PerfectMatching(((2, 1), (3, 4)))
    with pytest.raises(InvalidInputError):
        M((1, 2), (2, 3))
    assert M((4, 3), (2, 1)).edges == ((1, 2), (3, 4))
    assert str(M((1, 3), (2, 4))) == "{1-3,2-4}"


def test_union_shape_examples():
    p = M((1, 2), (3, 4), (5, 6), (7, 8))
    assert union_shape(p, p) == P(2, 2, 2, 2)
    assert union_shape(M((1, 2), (3, 4)), M((1, 3), (2, 4))) == P(4)
    assert union_shape(p, M((1, 3), (2, 4), (5, 7), (6, 8))) == P(4, 4)
    with pytest.raises(InvalidInputError):
        union_shape(p, M((1, 2), (3, 4)))


def test_union_shape_symmetry_and_shared_edges():
    members = enumerate_matchings(4).members
    for p in members[::7]:
        for q in members:
            shape = union_shape(p, q)
            assert shape == union_shape(q, p)
            assert shape.parts.count(2) == len(edge_intersection(p, q))
            assert shape.n == 8


def test_setwise_examples():
    p = M((1, 2), (3, 4), (5, 6), (7, 8))
    assert setwise_t_intersecting_by_shape(p, M((1, 3), (2, 4), (5, 6), (7, 8)), 2)
    four_four = M((1, 3), (2, 4), (5, 7), (6, 8))
    assert setwise_t_intersecting_by_shape(p, four_four, 2)
    assert setwise_t_intersecting_oracle(p, four_four, 2)
    eight = M((1, 8), (2, 3), (4, 5), (6, 7))
    assert union_shape(p, eight) == P(8)
    assert not setwise_t_intersecting_by_shape(p, eight, 2)
    assert not setwise_t_intersecting_oracle(p, eight, 2)


def test_t_out_of_range():
    p = M((1, 2), (3, 4), (5, 6), (7, 8))
    with pytest.raises(InvalidInputError):
        setwise_t_intersecting_by_shape(p, p, 3)
    with pytest.raises(InvalidInputError):
        canonical_family(4, 3)


def test_shape_criterion_matches_oracle_exhaustively_k4():
    members = enumerate_matchings(4).members
    mismatches = [
        (p, q) for p in members for q in members
        if setwise_t_intersecting_by_shape(p, q, 2) != setwise_t_intersecting_oracle(p, q, 2)
    ]
    assert mismatches == []


def test_shape_criterion_matches_oracle_on_random_pairs_k6():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        p, q = random_matching(6, rng), random_matching(6, rng)
        for t in (2, 3):
            assert setwise_t_intersecting_by_shape(p, q, t) == setwise_t_intersecting_oracle(p, q, t)


def test_t_intersecting_pairs_are_setwise():
    members = enumerate_matchings(4).members
    for p in members:
        for q in members:
            if len(edge_intersection(p, q)) >= 2:
                assert setwise_t_intersecting_by_shape(p, q, 2)


def test_canonical_family_sizes():
    assert len(canonical_family(4, 2)) == 9
    assert len(canonical_family(6, 3)) == 225
    assert canonical_family(2, 1).members == [M((1, 2), (3, 4))]
    assert canonical_mask(4, 2).sum() == 9


@pytest.mark.parametrize("k,t", [(4, 2), (5, 2), (6, 3)])
def test_canonical_family_is_setwise_intersecting(k, t):
    members = canonical_family(k, t).members
    for p, q in combinations(members[:60], 2):
        assert setwise_t_intersecting_by_shape(p, q, t)


def test_family_json_and_dedup():
    a, b = M((1, 2), (3, 4)), M((1, 3), (2, 4))
    family = MatchingFamily.from_members(2, [a, b, a])
    assert len(family) == 2
    assert family.index_of(b) == 1
    data = family.to_json()
    assert data == {"k": 2, "members": [[[1, 2], [3, 4]], [[1, 3], [2, 4]]]}
    assert MatchingFamily.from_json(data).members == [a, b]
    with pytest.raises(InvalidInputError):
        MatchingFamily.from_json({"k": 2})


@given(seeds)
def test_random_matching_is_valid(seed):
    m = random_matching(5, np.random.default_rng(seed))
    assert m.k == 5
    assert sorted(v for e in m.edges for v in e) == list(range(1, 11))
    assert PerfectMatching.from_partners(m.partners()) == m
