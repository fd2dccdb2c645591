from fractions import Fraction

import pytest

from src.ekr import (
    audit_printed_t3_system,
    b_squared_trace_check,
    hoffman_certificate_check,
    printed_weights,
    solve_weights,
    target_degree,
)
from src.errors import InvalidInputError

from .conftest import P

F = Fraction


def test_target_degree():
    assert target_degree(2, 4) == F(32, 3)
    assert target_degree(2, 5) == 20
    assert target_degree(3, 6) == F(226, 5)


def test_weights_k4_and_k5():
    w = solve_weights(2, 4)
    assert w.weights == {P(8): F(1, 6), P(6, 2): F(1, 12)}
    assert w.d == F(32, 3)
    assert solve_weights(2, 5).weights == {P(10): F(5, 144), P(8, 2): F(1, 36)}


@pytest.mark.parametrize("k", range(4, 11))
def test_solved_weights_match_printed(k):
    w = solve_weights(2, k)
    assert w.printed_agrees
    assert w.degree_agrees
    assert w.weights == printed_weights(2, k)


def test_t3_weights_k6():
    w = solve_weights(3, 6)
    assert w.weights == {P(12): F(1, 120), P(10, 2): F(1, 320), P(8, 2, 2): F(1, 120)}
    assert w.d == F(226, 5)
    assert w.printed_agrees and w.degree_agrees


def test_weight_system_ranges():
    with pytest.raises(InvalidInputError):
        solve_weights(3, 5)
    with pytest.raises(InvalidInputError):
        solve_weights(4, 8)
    with pytest.raises(InvalidInputError):
        solve_weights(2, 3)


def test_certificate_k4(table4):
    report = hoffman_certificate_check(solve_weights(2, 4), table=table4)
    assert report.certificate_residual == 0
    assert report.orthogonal
    assert report.row_sums_ok
    assert report.bound == 9
    assert report.family_size == 9
    assert report.psd_margin == pytest.approx(0.0, abs=1e-8)
    assert report.verdict
    assert report.module_eigenvalues == {
        P(8): F(32, 3), P(6, 2): -1, P(4, 4): -1, P(4, 2, 2): F(1, 2), P(2, 2, 2, 2): F(-1, 3),
    }


def test_certificate_without_psd():
    report = hoffman_certificate_check(solve_weights(2, 4), psd=False)
    assert report.psd_margin is None
    assert report.verdict


def test_certificate_rejects_wrong_weights():
    w = solve_weights(2, 4)
    w.weights = {P(8): F(1, 6), P(6, 2): F(1, 6)}
    report = hoffman_certificate_check(w, psd=False)
    assert report.certificate_residual != 0
    assert report.witness_row is not None
    assert not report.verdict


@pytest.mark.slow
@pytest.mark.parametrize("k,bound", [(5, 45), (6, 315)])
def test_certificate_larger(k, bound):
    report = hoffman_certificate_check(solve_weights(2, k))
    assert report.bound == bound
    assert report.verdict


@pytest.mark.slow
def test_t3_certificate_k6_fails_only_on_least_eigenvalue():
    report = hoffman_certificate_check(solve_weights(3, 6))
    assert report.certificate_residual == 0
    assert report.orthogonal
    assert report.row_sums_ok
    assert report.bound == report.family_size == 225
    assert report.psd_margin == pytest.approx(-0.3, abs=1e-4)
    assert not report.verdict


def test_b_squared_trace():
    first = b_squared_trace_check(4)
    assert first.computed == F(14, 9)
    assert first.ok
    assert all(b_squared_trace_check(k).ok for k in range(4, 21))
    with pytest.raises(InvalidInputError):
        b_squared_trace_check(6, solve_weights(3, 6))


def test_printed_t3_system_audit():
    audit = audit_printed_t3_system(6)
    assert audit.table_consistent
    assert audit.printed_residuals["[2k-6,6]"] == F(7, 5)
    assert audit.printed_residuals["[2k-2,2]"] == 0
    assert audit.printed_residuals["[2k-4,4]"] == 0
    deviations = audit.deviations
    assert len(deviations) == 2
    assert {(c.module, c.klass) for c in deviations} == {("[2k-6,6]", "[2k-2,2]"), ("[2k-6,6]", "[2k-4,2,2]")}
    by_class = {c.klass: c for c in deviations}
    assert (by_class["[2k-2,2]"].printed, by_class["[2k-2,2]"].table) == (-16, -48)
    assert (by_class["[2k-4,2,2]"].printed, by_class["[2k-4,2,2]"].table) == (78, -78)
