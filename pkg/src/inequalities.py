"""Exact checks of the inequalities bounding the B_2 eigenvalues away from -1."""

import logging
from dataclasses import dataclass
from fractions import Fraction

from .closed_forms import closed_form_entry, resolve_shape
from .ekr import printed_weights
from .errors import InvalidInputError
from .partitions import (
    F_bound,
    IntPartition,
    conjugate,
    double_factorial as df,
    hook_dimension,
    is_primary,
    two_row_bound_holds,
    two_row_multiplicity,
)
from .scheme import class_labels

logger = logging.getLogger(__name__)

CASE_REGIME_K = 12
_F8 = F_bound(8)

# Coefficients (k^5 ... k^1) of 18 * the Case 2 polynomial, as printed and as
# obtained by replacing (2k-4)!! with (2k-5)!! in the left-hand side.
PRINTED_CASE2_POLY = (48, -348, 928, -965, 921)
DERIVED_CASE2_POLY = (48, -348, 928, -965, 291)


def lhs(k: int) -> Fraction:
    """k(6k^2-26k+36)(2k-1)!!/(9(2k-4)!!) - k(11k-25)(2k-1)(2k-3)/18."""
    first = Fraction(k * (6 * k * k - 26 * k + 36) * df(2 * k - 1), 9 * df(2 * k - 4))
    second = Fraction(k * (11 * k - 25) * (2 * k - 1) * (2 * k - 3), 18)
    return first - second


def case2_poly(k: int, coeffs=DERIVED_CASE2_POLY) -> Fraction:
    return Fraction(sum(c * k ** (5 - i) for i, c in enumerate(coeffs)), 18)


def case2_rhs(k: int) -> int:
    return _F8 * 3 ** (k - 4)


def theta_2k42(k: int) -> Fraction:
    """Eigenvalue of B_2 on the [2k-4,2,2] module from the grid."""
    weights = printed_weights(2, k)
    module = resolve_shape("[2k-4,2,2]", k)
    return sum((a * closed_form_entry(module, lam, k) for lam, a in weights.items()), Fraction(0))


@dataclass
class InequalityRow:
    k: int
    check: str
    lhs: Fraction
    rhs: Fraction
    passed: bool


@dataclass
class InequalityReport:
    k_range: tuple[int, int]
    rows: list[InequalityRow]
    printed_poly: tuple[int, ...] = PRINTED_CASE2_POLY
    derived_poly: tuple[int, ...] = DERIVED_CASE2_POLY

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.rows)

    def failures(self) -> list[InequalityRow]:
        return [r for r in self.rows if not r.passed]


def gap_inequalities(k_range: tuple[int, int]) -> InequalityReport:
    """theta([2k-4,2,2]) = 1/(k-2) from k = 4, and the Case 1 / Case 2 bounds from k = 12."""
    lo, hi = k_range
    if lo < 4 or hi < lo:
        raise InvalidInputError(f"need 4 <= lo <= hi, got {lo}..{hi}")
    rows = []
    for k in range(lo, hi + 1):
        theta = theta_2k42(k)
        rows.append(InequalityRow(k, "theta", theta, Fraction(1, k - 2), theta == Fraction(1, k - 2)))
        if k < CASE_REGIME_K:
            continue
        left = lhs(k)
        m6 = two_row_multiplicity(2 * k, 6)
        rhs2 = case2_rhs(k)
        rows += [
            InequalityRow(k, "case-1", left, Fraction(m6), left < m6),
            InequalityRow(k, "case-2", left, Fraction(rhs2), left < rhs2),
            InequalityRow(k, "case-2-poly-bounds-lhs", left, case2_poly(k), left < case2_poly(k)),
            InequalityRow(k, "case-2-derived-poly", case2_poly(k), Fraction(rhs2), case2_poly(k) < rhs2),
            InequalityRow(
                k, "case-2-printed-poly", case2_poly(k, PRINTED_CASE2_POLY), Fraction(rhs2),
                case2_poly(k, PRINTED_CASE2_POLY) < rhs2,
            ),
            InequalityRow(k, "case-2-leading-term", Fraction(48 * k ** 5, 18), Fraction(rhs2),
                          Fraction(48 * k ** 5, 18) < rhs2),
        ]
    report = InequalityReport((lo, hi), rows)
    logger.info("inequalities k=%d..%d: %d rows, %d failures", lo, hi, len(rows), len(report.failures()))
    return report


# ── Per-module scan ──

_EXCLUDED = ("[2k]", "[2k-2,2]", "[2k-4,4]", "[2k-4,2,2]")


@dataclass
class ModuleScanRow:
    module: IntPartition
    case: str
    multiplicity: int
    below: bool
    case_bound: int
    case_bound_holds: bool
    note: str = ""


@dataclass
class ModuleScan:
    k: int
    lhs: Fraction
    rows: list[ModuleScanRow]

    @property
    def ok(self) -> bool:
        return all(r.below for r in self.rows)


def _classify(lam: IntPartition, k: int) -> tuple[str, int, bool, str]:
    if lam.parts[0] >= k:
        bound = two_row_multiplicity(2 * k, 6) if k >= 6 else 0
        holds = two_row_bound_holds(lam) and hook_dimension(lam) >= bound
        return "case-1", bound, holds, ""
    if is_primary(lam):
        bound = case2_rhs(k)
        return "case-2", bound, hook_dimension(lam) >= bound, ""
    dual = conjugate(lam)
    note = f"dual {dual} ({'primary' if is_primary(dual) else 'not primary'})"
    same = hook_dimension(dual) == hook_dimension(lam)
    return "dual-primary", hook_dimension(dual), same, note


def gap_module_scan(k: int) -> ModuleScan:
    """LHS(k) < m(lam) for every even module other than the four pinned by the weights."""
    if k < 4:
        raise InvalidInputError(f"the scan needs k >= 4, got {k}")
    excluded = {resolve_shape(name, k) for name in _EXCLUDED}
    left = lhs(k)
    rows = []
    for lam in class_labels(k):
        if lam in excluded:
            continue
        case, bound, holds, note = _classify(lam, k)
        m = hook_dimension(lam)
        rows.append(ModuleScanRow(lam, case, m, left < m, bound, holds, note))
    scan = ModuleScan(k, left, rows)
    logger.info("module scan k=%d: %d modules, all below: %s", k, len(rows), scan.ok)
    return scan
