import math
from itertools import product

import pytest
from hypothesis import given, strategies as st

from src.errors import InvalidInputError
from src.partitions import (
    F_bound,
    IntPartition,
    audit_f_growth,
    audit_two_row_bound,
    conjugate,
    dominance_geq,
    double_factorial,
    even_partition,
    even_partitions,
    has_subpartition_sum,
    hook_dimension,
    is_primary,
    partitions,
    two_row_bound_holds,
    two_row_multiplicity,
)

from .conftest import P

partition_st = st.lists(st.integers(1, 6), min_size=1, max_size=6).map(IntPartition.from_parts)


# ── Construction ──


def test_even_partitions_of_8_in_reverse_lex_order():
    assert even_partitions(8) == [P(8), P(6, 2), P(4, 4), P(4, 2, 2), P(2, 2, 2, 2)]


def test_even_partitions_rejects_odd():
    with pytest.raises(InvalidInputError):
        even_partitions(7)


def test_partition_counts():
    assert [len(partitions(n)) for n in range(1, 11)] == [1, 2, 3, 5, 7, 11, 15, 22, 30, 42]


def test_parse_and_str():
    lam = IntPartition.parse("[4, 2, 2]")
    assert lam == P(4, 2, 2)
    assert str(lam) == "[4,2,2]"
    assert lam.to_json() == [4, 2, 2]


def test_rejects_non_increasing_parts():
    with pytest.raises(InvalidInputError):
        IntPartition((2, 4))


def test_from_parts_sorts_and_drops_zeros():
    assert IntPartition.from_parts([2, 0, 4]) == P(4, 2)


def test_even_partition_rejects_odd_part():
    with pytest.raises(InvalidInputError):
        even_partition([3, 1])


def test_double_factorial():
    assert double_factorial(-1) == 1
    assert double_factorial(0) == 1
    assert double_factorial(7) == 105
    assert double_factorial(8) == 384
    with pytest.raises(InvalidInputError):
        double_factorial(-3)


# ── Dominance and conjugates ──


def test_dominance_examples():
    assert dominance_geq(P(4, 2), P(2, 2, 2))
    assert not dominance_geq(P(2, 2, 2), P(4, 2))
    assert not dominance_geq(P(3, 3), P(4, 1, 1))
    assert not dominance_geq(P(4, 1, 1), P(3, 3))
    with pytest.raises(InvalidInputError):
        dominance_geq(P(4), P(2, 2, 2))


def test_dominance_is_a_partial_order():
    parts = partitions(10)
    for a in parts:
        assert dominance_geq(a, a)
    for a, b in product(parts, repeat=2):
        if a != b and dominance_geq(a, b):
            assert not dominance_geq(b, a)
    for a, b, c in product(parts[::3], repeat=3):
        if dominance_geq(a, b) and dominance_geq(b, c):
            assert dominance_geq(a, c)


def test_conjugate():
    assert conjugate(P(4, 2, 2)) == P(3, 3, 1, 1)
    for n in range(1, 13):
        for lam in partitions(n):
            assert conjugate(conjugate(lam)) == lam


def test_is_primary():
    assert is_primary(P(4, 2, 2))
    assert is_primary(P(8))
    assert not is_primary(P(2, 2, 2, 2))


# ── Dimensions ──


def test_hook_dimension_examples():
    assert hook_dimension(P(8)) == 1
    assert hook_dimension(P(6, 2)) == 20
    assert hook_dimension(P(4, 4)) == 14
    assert hook_dimension(P(4, 2, 2)) == 56
    assert hook_dimension(P(2, 2, 2, 2)) == 14


def test_dimension_squares_sum_to_factorial():
    for n in range(1, 10):
        assert sum(hook_dimension(lam) ** 2 for lam in partitions(n)) == math.factorial(n)


def test_even_module_dimensions_sum_to_matching_count():
    for k in range(1, 7):
        assert sum(hook_dimension(lam) for lam in even_partitions(2 * k)) == double_factorial(2 * k - 1)


def test_dimension_is_conjugation_invariant():
    for n in range(1, 11):
        for lam in partitions(n):
            assert hook_dimension(lam) == hook_dimension(conjugate(lam))


def test_two_row_multiplicity():
    assert two_row_multiplicity(8, 2) == 20
    assert two_row_multiplicity(8, 4) == 14
    assert two_row_multiplicity(8, 0) == 1
    for k in range(1, 9):
        for ell in range(k + 1):
            assert two_row_multiplicity(2 * k, ell) == hook_dimension(IntPartition.from_parts((2 * k - ell, ell)))
    with pytest.raises(InvalidInputError):
        two_row_multiplicity(8, 5)


def test_two_row_bound_has_no_violations():
    for n in (8, 10, 12):
        assert audit_two_row_bound(n) == []
    with pytest.raises(InvalidInputError):
        two_row_bound_holds(P(3, 3, 2))


def test_F_bound_values():
    assert F_bound(0) == 2
    assert F_bound(4) == 144
    assert F_bound(8) == 403200


def test_f_growth_audit_flags_odd_n():
    rows = audit_f_growth(12)
    assert [r.n for r in rows] == list(range(8, 13))
    assert [r.n for r in rows if not r.ok] == [9, 11]
    assert all(r.lower_ok for r in rows)


# ── Sub-partition sums ──


def test_has_subpartition_sum():
    lam = P(4, 2, 2)
    assert [s for s in range(9) if has_subpartition_sum(lam, s)] == [0, 2, 4, 6, 8]
    assert not has_subpartition_sum(P(8), 4)
    assert not has_subpartition_sum(lam, 9)


@given(partition_st, st.integers(0, 36))
def test_subpartition_sum_complement_symmetry(lam, s):
    assert has_subpartition_sum(lam, s) == has_subpartition_sum(lam, lam.n - s)


@given(partition_st)
def test_parse_inverts_str(lam):
    assert IntPartition.parse(str(lam)) == lam
