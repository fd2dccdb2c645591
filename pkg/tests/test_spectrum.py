from fractions import Fraction

import numpy as np
import pytest
from scipy.sparse.linalg import aslinearoperator

from src.errors import ResourceLimitError
from src.spectrum import (
    class_weight_vector,
    cluster_eigenvalues,
    dense_class_spectrum,
    largest_eigenvalue,
    least_eigenvalue,
    power_iteration_least,
    round_rational,
    spectral_radius_bound,
    weighted_operator,
)

from .conftest import P

B2_K4 = {P(8): Fraction(1, 6), P(6, 2): Fraction(1, 12)}


def test_round_rational():
    assert round_rational(0.5) == Fraction(1, 2)
    assert round_rational(1 / 3 + 1e-9) == Fraction(1, 3)
    assert round_rational(-8.0000001) == -8
    assert round_rational(0.2) is None


def test_cluster_eigenvalues():
    groups = cluster_eigenvalues([2.0, 1.0, 1.0 + 1e-9])
    assert [len(idx) for _, idx in groups] == [2, 1]
    assert groups[0][0] == pytest.approx(1.0)
    assert cluster_eigenvalues([]) == []


def test_dense_spectrum_of_class_8():
    spectrum = {c.exact: c.multiplicity for c in dense_class_spectrum(P(8), 4)}
    assert spectrum == {48: 1, -8: 20, -2: 14, 4: 56, -6: 14}


def test_dense_spectrum_guard():
    with pytest.raises(ResourceLimitError):
        dense_class_spectrum(P(14), 7)


def test_class_weight_vector():
    w = class_weight_vector(B2_K4, 4)
    assert w.tolist() == pytest.approx([1 / 6, 1 / 12, 0, 0, 0])


def test_spectral_radius_bound():
    assert spectral_radius_bound(B2_K4, 4) == pytest.approx(32 / 3)


def test_extreme_eigenvalues_of_b2_k4():
    op = weighted_operator(B2_K4, 4)
    radius = spectral_radius_bound(B2_K4, 4)
    least = least_eigenvalue(op, radius)
    assert least.value == pytest.approx(-1.0, abs=1e-8)
    assert least.converged
    assert largest_eigenvalue(op, radius).value == pytest.approx(32 / 3, abs=1e-8)


def test_weighted_operator_matches_dense_sum():
    op = weighted_operator(B2_K4, 4)
    x = np.random.default_rng(3).normal(size=105)
    from src.scheme import class_index_matrix

    index = class_index_matrix(4)
    dense = (index == 0) / 6 + (index == 1) / 12
    assert np.allclose(op.matvec(x), dense @ x)


def test_power_iteration_least():
    op = aslinearoperator(np.diag([3.0, 1.0, -2.0]))
    result = power_iteration_least(op, radius=4.0)
    assert result.converged
    assert result.value == pytest.approx(-2.0, abs=1e-6)


def test_weighted_operator_guard():
    with pytest.raises(ResourceLimitError):
        weighted_operator({P(14): 1}, 7)
