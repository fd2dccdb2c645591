"""The open conjectures as reports: the t = 3 weighted matrix and the [2k] eigenvalue patterns."""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .chartable import CharacterTable, assemble_full_table, assemble_table_from_quotients
from .closed_forms import resolve_shape
from .config import EIGEN_TOL, MAX_ASSEMBLY_K, MAX_DENSE_K
from .ekr import CertificateReport, b_module_eigenvalues, hoffman_certificate_check, solve_weights
from .errors import InvalidInputError
from .partitions import IntPartition, double_factorial as df
from .spectrum import largest_eigenvalue, spectral_radius_bound, weighted_operator

logger = logging.getLogger(__name__)

_PINNED_T3 = ("[2k-2,2]", "[2k-4,4]", "[2k-6,6]")
_OPEN_T3 = ("[2k-6,4,2]", "[2k-6,2,2,2]")


def _table_for(k: int, workers: int) -> CharacterTable:
    return assemble_full_table(k, workers) if k <= MAX_ASSEMBLY_K else assemble_table_from_quotients(k, workers)


@dataclass
class T3Report:
    k: int
    weights: dict[IntPartition, Fraction]
    d: Fraction
    certificate: CertificateReport
    module_eigenvalues: dict[IntPartition, Fraction]
    open_modules: dict[IntPartition, Fraction]
    pinned_ok: bool
    interval_ok: bool
    numeric_max: float | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        numeric = self.numeric_max is None or self.numeric_max <= float(self.d) + EIGEN_TOL * float(self.d)
        return self.certificate.verdict and self.pinned_ok and self.interval_ok and numeric


def conjecture_t3_spectrum_check(k: int = 6, workers: int = 1, psd: bool = True,
                                 table: CharacterTable | None = None) -> T3Report:
    """B_3 at k: exact certificate, numeric extreme eigenvalues and the exact value on every module."""
    if k < 6:
        raise InvalidInputError(f"the t = 3 conjecture starts at k = 6, got k={k}")
    weights = solve_weights(3, k)
    certificate = hoffman_certificate_check(weights, k, workers, psd=psd)
    table = table or _table_for(k, workers)
    values = b_module_eigenvalues(weights, table)

    d = weights.d
    pinned = {resolve_shape(name, k) for name in _PINNED_T3}
    pinned_ok = all(values[mu] == -1 for mu in pinned)
    interval_ok = all(-1 <= v <= d for v in values.values())
    open_modules = {resolve_shape(name, k): values[resolve_shape(name, k)] for name in _OPEN_T3}
    at_minus_one = sorted((mu for mu, v in values.items() if v == -1), reverse=True)
    notes = [f"modules at -1: {', '.join(str(mu) for mu in at_minus_one)}"]
    below = sorted((mu for mu, v in values.items() if v < -1), reverse=True)
    if below:
        notes.append("modules below -1: " + ", ".join(f"{mu} = {values[mu]}" for mu in below))
        logger.warning("k=%d: B_3 drops below -1 on %s", k, ", ".join(str(mu) for mu in below))

    numeric_max = None
    if psd and k <= MAX_DENSE_K:
        op = weighted_operator(weights.weights, k, workers)
        numeric_max = largest_eigenvalue(op, spectral_radius_bound(weights.weights, k)).value
    report = T3Report(k, weights.weights, d, certificate, values, open_modules,
                      pinned_ok, interval_ok, numeric_max, notes)
    for mu, v in open_modules.items():
        logger.info("k=%d: B_3 eigenvalue on %s is %s", k, mu, v)
    return report


# ── Eigenvalues of A_[2k] ──


@dataclass
class PatternRow:
    k: int
    i: int
    pattern: str
    module: IntPartition
    predicted: int
    observed: Fraction | float | None
    passed: bool


@dataclass
class PatternReport:
    k: int
    rows: list[PatternRow]

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.rows)


def two_row_prediction(k: int, i: int) -> int:
    """-(2i-3)!! (2k-2i-2)!! on the module [2k-2i, 2i]."""
    return -df(2 * i - 3) * df(2 * k - 2 * i - 2)


def column_prediction(k: int, i: int) -> int:
    """(-1)^i i! (2k-2i-2)!! on the module [2k-2i, 2, ..., 2]."""
    return (-1) ** i * math.factorial(i) * df(2 * k - 2 * i - 2)


def conjecture_degree_patterns(k: int, table: CharacterTable | None = None,
                               workers: int = 1) -> PatternReport:
    """Compare both patterns with the [2k] column for every i where the module exists."""
    if k < 2:
        raise InvalidInputError(f"the patterns need k >= 2, got k={k}")
    table = table or _table_for(k, workers)
    klass = IntPartition((2 * k,))
    rows = []
    for i in range(1, k):
        if 2 * k - 2 * i >= 2 * i:
            mu = IntPartition((2 * k - 2 * i, 2 * i))
            observed = table.entry(mu, klass)
            predicted = two_row_prediction(k, i)
            rows.append(PatternRow(k, i, "two-row", mu, predicted, observed, observed == predicted))
        mu = IntPartition((2 * k - 2 * i,) + (2,) * i)
        observed = table.entry(mu, klass)
        predicted = column_prediction(k, i)
        rows.append(PatternRow(k, i, "column", mu, predicted, observed, observed == predicted))
    report = PatternReport(k, rows)
    logger.info("degree patterns k=%d: %d rows, ok=%s", k, len(rows), report.ok)
    return report
