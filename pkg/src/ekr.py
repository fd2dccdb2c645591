"""Weighted ratio-bound certificates for set-wise t-intersecting families of matchings."""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial

import numpy as np
import sympy

from .closed_forms import closed_form_entry, resolve_shape
from .config import EIGEN_TOL, MAX_DENSE_K
from .errors import ConsistencyError, InvalidInputError
from .matchings import canonical_mask, check_enumerable, check_t, partner_table
from .partitions import IntPartition, double_factorial as df, has_subpartition_sum
from .quotients import young_orbits
from .scheme import class_degree, class_index_row, class_indices, class_labels
from .spectrum import least_eigenvalue, spectral_radius_bound, weighted_operator
from .workers import map_row_ranges

logger = logging.getLogger(__name__)

# Weighted classes and the modules whose eigenvalue is pinned to -1.
_SYSTEMS = {
    2: (("[2k]", "[2k-2,2]"), ("[2k-2,2]", "[2k-4,4]")),
    3: (("[2k]", "[2k-2,2]", "[2k-4,2,2]"), ("[2k-2,2]", "[2k-4,4]", "[2k-6,6]")),
}
_MIN_K = {2: 4, 3: 6}

_PRINTED_WEIGHTS = {
    2: {
        "[2k]": lambda k: Fraction(k, 3 * df(2 * k - 4)),
        "[2k-2,2]": lambda k: Fraction(2 * k - 6, 3 * df(2 * k - 4)),
    },
    3: {
        "[2k]": lambda k: Fraction((k - 3) * (7 * k - 10), 30 * df(2 * k - 4)),
        "[2k-2,2]": lambda k: Fraction(-2 * (k * k - 10 * k + 15), 15 * df(2 * k - 4)),
        "[2k-4,2,2]": lambda k: Fraction(2 * (k - 5), 5 * df(2 * k - 6)),
    },
}


def target_degree(t: int, k: int) -> Fraction:
    """(2k-1)(2k-3)...(2k-2t+1) / (2t-1)!! - 1, the row sum that makes the bound tight."""
    return Fraction(df(2 * k - 1), df(2 * k - 2 * t - 1) * df(2 * t - 1)) - 1


@dataclass
class WeightVector:
    k: int
    t: int
    weights: dict[IntPartition, Fraction]
    printed_agrees: bool = True
    degree_agrees: bool = True

    @property
    def d(self) -> Fraction:
        return sum((a * class_degree(lam, self.k) for lam, a in self.weights.items()), Fraction(0))

    def module_eigenvalue(self, row: dict[IntPartition, Fraction]) -> Fraction:
        """sum_c a_c chi(c) for one character-table row given as class -> value."""
        return sum((a * row[lam] for lam, a in self.weights.items()), Fraction(0))


def _check_system_k(t: int, k: int) -> None:
    if t not in _SYSTEMS:
        raise InvalidInputError(f"weight systems exist for t = 2 and t = 3, got t={t}")
    if k < _MIN_K[t]:
        raise InvalidInputError(f"the t={t} system needs k >= {_MIN_K[t]}, got k={k}")


def printed_weights(t: int, k: int) -> dict[IntPartition, Fraction]:
    _check_system_k(t, k)
    return {resolve_shape(name, k): f(k) for name, f in _PRINTED_WEIGHTS[t].items()}


def solve_weights(t: int, k: int) -> WeightVector:
    """Solve for the weights putting eigenvalue -1 on the pinned modules, in exact arithmetic."""
    _check_system_k(t, k)
    class_names, module_names = _SYSTEMS[t]
    rows = []
    for m in module_names:
        row = []
        for c in class_names:
            value = closed_form_entry(m, c, k)
            if value is None:
                raise InvalidInputError(f"closed form {m} x {c} is out of range at k={k}")
            row.append(sympy.Rational(value.numerator, value.denominator))
        rows.append(row)
    matrix = sympy.Matrix(rows)
    if matrix.det() == 0:
        raise ConsistencyError(f"t={t} weight system is singular at k={k}")
    solution = matrix.LUsolve(sympy.Matrix([-1] * len(module_names)))
    weights = {
        resolve_shape(c, k): Fraction(int(sympy.Rational(x).p), int(sympy.Rational(x).q))
        for c, x in zip(class_names, solution)
    }
    for lam in weights:
        if has_subpartition_sum(lam, 2 * t):
            raise ConsistencyError(f"class {lam} is not an N_{t} adjacency class")

    wv = WeightVector(k, t, weights)
    wv.printed_agrees = weights == printed_weights(t, k)
    wv.degree_agrees = wv.d == target_degree(t, k)
    if not wv.printed_agrees:
        logger.warning("t=%d k=%d: solved weights differ from the printed ones", t, k)
    logger.info("t=%d k=%d weights %s, d=%s", t, k, {str(a): str(b) for a, b in weights.items()}, wv.d)
    return wv


# ── Certificate ──


@dataclass
class CertificateReport:
    k: int
    t: int
    d: Fraction
    tau_claim: int
    certificate_residual: Fraction
    witness_row: int | None
    orthogonal: bool
    row_sums_ok: bool
    rows_checked: int
    psd_margin: float | None
    psd_method: str | None
    bound: Fraction
    family_size: int
    verdict: bool = False
    module_eigenvalues: dict[IntPartition, Fraction] = field(default_factory=dict)


def _family_counts_block(k: int, members: np.ndarray, start: int, stop: int) -> np.ndarray:
    table = partner_table(k)
    n_classes = len(class_labels(k))
    counts = np.zeros((len(table), n_classes), dtype=np.int64)
    rows = np.arange(len(table))
    for p in members[start:stop]:
        counts[rows, class_indices(p, table, k)] += 1
    return counts[None]


def family_class_counts(k: int, mask: np.ndarray, workers: int = 1) -> np.ndarray:
    """counts[i, c] = number of family members at class c from matching i."""
    members = partner_table(k)[mask]
    blocks = map_row_ranges(partial(_family_counts_block, k, members), len(members), workers)
    return blocks.sum(axis=0)


def _sample_rows(k: int, t: int, rng: np.random.Generator, extra: int) -> list[int]:
    orbit = young_orbits(k, (2 * t, 2 * k - 2 * t))
    first, last = orbit.representatives()
    n = len(orbit.cell_of)
    picked = set(first.tolist()) | set(last.tolist())
    picked |= set(rng.choice(n, size=min(extra, n), replace=False).tolist())
    return sorted(picked)


def hoffman_certificate_check(weights: WeightVector, k: int | None = None, workers: int = 1,
                              psd: bool = True, seed: int = 0, table=None) -> CertificateReport:
    """Check that nu_S - |S|/N is a (-1)-eigenvector of B and that the ratio bound equals |S|."""
    k = weights.k if k is None else k
    t = weights.t
    check_t(k, t)
    check_enumerable(k)
    n = df(2 * k - 1)
    mask = canonical_mask(k, t)
    size = int(mask.sum())
    d = weights.d

    labels = class_labels(k)
    a = [weights.weights.get(lam, Fraction(0)) for lam in labels]
    counts = family_class_counts(k, mask, workers)
    patterns, inverse = np.unique(np.column_stack([counts, mask]), axis=0, return_inverse=True)
    inverse = np.asarray(inverse).reshape(-1)
    ratio = Fraction(size, n)
    worst, worst_pattern = Fraction(0), None
    for j, pattern in enumerate(patterns):
        b_nu = sum((a[c] * int(pattern[c]) for c in range(len(labels))), Fraction(0))
        nu = int(pattern[-1])
        residual = b_nu - ratio * d + nu - ratio
        if abs(residual) > worst:
            worst, worst_pattern = abs(residual), j
    witness = None if worst_pattern is None else int(np.flatnonzero(inverse == worst_pattern)[0])
    orthogonal = size - n * ratio == 0

    rng = np.random.default_rng(seed)
    degrees = np.array([class_degree(lam, k) for lam in labels])
    rows = _sample_rows(k, t, rng, extra=16)
    row_sums_ok = all(
        np.array_equal(np.bincount(class_index_row(k, i), minlength=len(labels)), degrees)
        for i in rows
    )

    psd_margin, psd_method = None, None
    if psd and k <= MAX_DENSE_K:
        op = weighted_operator(weights.weights, k, workers)
        least = least_eigenvalue(op, spectral_radius_bound(weights.weights, k))
        psd_margin, psd_method = least.value + 1.0, least.method
        logger.info("t=%d k=%d least eigenvalue of B: %.9f (%s)", t, k, least.value, least.method)
    elif psd:
        logger.warning("t=%d k=%d: skipping the numeric least eigenvalue above k=%d", t, k, MAX_DENSE_K)

    bound = Fraction(n) / (1 + d)
    report = CertificateReport(
        k, t, d, -1, worst, witness, orthogonal, row_sums_ok, len(rows),
        psd_margin, psd_method, bound, size,
    )
    if table is not None:
        report.module_eigenvalues = b_module_eigenvalues(weights, table)
    report.verdict = (
        worst == 0
        and orthogonal
        and row_sums_ok
        and (psd_margin is None or psd_margin >= -EIGEN_TOL)
        and bound == size
    )
    logger.info("t=%d k=%d bound %s vs |S| = %d: verdict %s", t, k, bound, size, report.verdict)
    return report


def b_module_eigenvalues(weights: WeightVector, table) -> dict[IntPartition, Fraction]:
    """Eigenvalue of B on every module of a character table."""
    return {
        mu: weights.module_eigenvalue({lam: table.entry(mu, lam) for lam in weights.weights})
        for mu in table.modules
    }


# ── Trace of B^2 ──


@dataclass
class BSquaredCheck:
    k: int
    computed: Fraction
    printed: Fraction

    @property
    def ok(self) -> bool:
        return self.computed == self.printed


def b_squared_trace_check(k: int, weights: WeightVector | None = None) -> BSquaredCheck:
    """Diagonal of B^2 for t = 2 against k(6k^2 - 26k + 36) / (9 (2k-4)!!)."""
    weights = weights or solve_weights(2, k)
    if weights.t != 2:
        raise InvalidInputError("the B^2 identity is stated for t = 2 weights")
    computed = sum((a * a * class_degree(lam, k) for lam, a in weights.weights.items()), Fraction(0))
    printed = Fraction(k * (6 * k * k - 26 * k + 36), 9 * df(2 * k - 4))
    return BSquaredCheck(k, computed, printed)


# ── The t = 3 system as printed ──

_PRINTED_T3_SYSTEM = {
    "[2k-2,2]": (
        lambda k: Fraction(-df(2 * k - 4)),
        lambda k: Fraction(df(2 * k - 4), 2),
        lambda k: Fraction((3 * k - 2) * df(2 * k - 6), 4),
    ),
    "[2k-4,4]": (
        lambda k: Fraction(-df(2 * k - 6)),
        lambda k: Fraction(-(5 * k - 12) * df(2 * k - 8)),
        lambda k: Fraction(-(k + 3) * df(2 * k - 8), 4),
    ),
    "[2k-6,6]": (
        lambda k: Fraction(-3 * df(2 * k - 8)),
        lambda k: Fraction(-(3 * k - 10) * df(2 * k - 10)),
        lambda k: Fraction(3 * (13 * k * k - 101 * k + 190) * df(2 * k - 12), 2),
    ),
}


@dataclass
class SystemCoefficient:
    module: str
    klass: str
    printed: Fraction
    table: Fraction

    @property
    def delta(self) -> Fraction:
        return self.printed - self.table


@dataclass
class PrintedSystemAudit:
    k: int
    coefficients: list[SystemCoefficient]
    printed_residuals: dict[str, Fraction]
    table_residuals: dict[str, Fraction]

    @property
    def deviations(self) -> list[SystemCoefficient]:
        return [c for c in self.coefficients if c.delta != 0]

    @property
    def table_consistent(self) -> bool:
        return all(r == 0 for r in self.table_residuals.values())


def audit_printed_t3_system(k: int) -> PrintedSystemAudit:
    """Compare the printed t = 3 equations with the grid and test the printed weights in both."""
    _check_system_k(3, k)
    class_names, _ = _SYSTEMS[3]
    weights = _PRINTED_WEIGHTS[3]
    coefficients, printed_res, table_res = [], {}, {}
    for module, formulas in _PRINTED_T3_SYSTEM.items():
        p_sum, t_sum = Fraction(0), Fraction(0)
        for klass, f in zip(class_names, formulas):
            printed = f(k)
            table = closed_form_entry(module, klass, k)
            coefficients.append(SystemCoefficient(module, klass, printed, table))
            w = weights[klass](k)
            p_sum += w * printed
            t_sum += w * table
        printed_res[module] = p_sum + 1
        table_res[module] = t_sum + 1
    return PrintedSystemAudit(k, coefficients, printed_res, table_res)
