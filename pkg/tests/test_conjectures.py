from fractions import Fraction

import pytest

from src.chartable import assemble_full_table
from src.conjectures import (
    column_prediction,
    conjecture_degree_patterns,
    conjecture_t3_spectrum_check,
    two_row_prediction,
)
from src.errors import InvalidInputError

from .conftest import P


def test_predictions():
    assert two_row_prediction(4, 1) == -8
    assert two_row_prediction(4, 2) == -2
    assert column_prediction(4, 1) == -8
    assert column_prediction(4, 2) == 4
    assert column_prediction(4, 3) == -6


def test_degree_patterns_k4(table4):
    report = conjecture_degree_patterns(4, table4)
    assert report.ok
    assert [(r.pattern, r.module) for r in report.rows] == [
        ("two-row", P(6, 2)),
        ("column", P(6, 2)),
        ("two-row", P(4, 4)),
        ("column", P(4, 2, 2)),
        ("column", P(2, 2, 2, 2)),
    ]


def test_degree_patterns_k3():
    assert conjecture_degree_patterns(3, assemble_full_table(3)).ok


@pytest.mark.slow
def test_degree_patterns_k5():
    assert conjecture_degree_patterns(5).ok


def test_patterns_need_k2():
    with pytest.raises(InvalidInputError):
        conjecture_degree_patterns(1)


def test_t3_needs_k6():
    with pytest.raises(InvalidInputError):
        conjecture_t3_spectrum_check(5)


@pytest.mark.slow
def test_t3_spectrum_k6():
    report = conjecture_t3_spectrum_check(6)
    assert report.pinned_ok
    assert report.certificate.certificate_residual == 0
    assert report.certificate.bound == 225
    assert not report.certificate.verdict
    assert not report.interval_ok
    assert not report.ok
    assert report.module_eigenvalues[P(2, 2, 2, 2, 2, 2)] == Fraction(-13, 10)
    below = [mu for mu, v in report.module_eigenvalues.items() if v < -1]
    assert below == [P(2, 2, 2, 2, 2, 2)]
    assert "modules below -1: [2,2,2,2,2,2] = -13/10" in report.notes
    assert report.d == Fraction(226, 5)
    assert report.module_eigenvalues[P(8, 2, 2)] == Fraction(3, 4)
    assert all(report.module_eigenvalues[mu] == -1 for mu in (P(10, 2), P(8, 4), P(6, 6)))
