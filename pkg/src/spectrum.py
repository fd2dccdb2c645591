"""Numeric spectra: eigenvalue clustering, rational rounding and least eigenvalues of weighted class sums."""

import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.sparse.linalg import ArpackError, ArpackNoConvergence, LinearOperator, eigsh

from .config import EIGEN_TOL, MAX_DENSE_K, MAX_SPECTRUM_K
from .errors import ResourceLimitError
from .scheme import check_label, class_degree, class_index_matrix, class_labels

logger = logging.getLogger(__name__)

_ROW_BLOCK = 512


@dataclass
class SpectrumCluster:
    value: float
    multiplicity: int
    exact: Fraction | None = None


def round_rational(x: float, max_den: int = 4, tol: float = EIGEN_TOL) -> Fraction | None:
    """Nearest fraction with denominator <= max_den, or None when nothing is within tol."""
    r = Fraction(float(x)).limit_denominator(max_den)
    if abs(float(r) - x) <= tol * max(1.0, abs(x)):
        return r
    return None


def cluster_eigenvalues(values, tol: float = EIGEN_TOL) -> list[tuple[float, np.ndarray]]:
    """Group sorted eigenvalues whose neighbours differ by less than tol (relative to the spread)."""
    values = np.asarray(values, dtype=float)
    if len(values) == 0:
        return []
    order = np.argsort(values, kind="stable")
    scale = max(1.0, float(np.abs(values).max()))
    groups, current = [], [order[0]]
    for a, b in zip(order, order[1:]):
        if values[b] - values[a] > tol * scale:
            groups.append(np.array(current))
            current = []
        current.append(b)
    groups.append(np.array(current))
    return [(float(values[g].mean()), g) for g in groups]


def dense_class_spectrum(lam, k: int, workers: int = 1, max_den: int = 4) -> list[SpectrumCluster]:
    """Clustered spectrum of the dense A_lambda, ascending."""
    lam = check_label(lam, k)
    if k > MAX_SPECTRUM_K:
        raise ResourceLimitError(f"dense spectra support k <= {MAX_SPECTRUM_K}, got k={k}")
    index = class_labels(k).index(lam)
    matrix = (class_index_matrix(k, workers) == index).astype(np.float64)
    values = np.linalg.eigvalsh(matrix)
    logger.info("spectrum of A_%s at k=%d: %d eigenvalues", lam, k, len(values))
    return [
        SpectrumCluster(v, len(idx), round_rational(v, max_den))
        for v, idx in cluster_eigenvalues(values)
    ]


# ── Weighted sums B = sum_c a_c A_c ──


def class_weight_vector(weights: dict, k: int) -> np.ndarray:
    """Per-class weights in class_labels(k) order; unlisted classes weigh zero."""
    labels = class_labels(k)
    out = np.zeros(len(labels))
    for lam, a in weights.items():
        out[labels.index(check_label(lam, k))] = float(a)
    return out


def weighted_operator(weights: dict, k: int, workers: int = 1) -> LinearOperator:
    """Matrix-free B as a LinearOperator over the dense class-index matrix."""
    if k > MAX_DENSE_K:
        raise ResourceLimitError(f"weighted operators support k <= {MAX_DENSE_K}, got k={k}")
    w = class_weight_vector(weights, k)
    index = class_index_matrix(k, workers)
    n = len(index)

    def matvec(x):
        x = np.asarray(x, dtype=float).reshape(-1)
        y = np.empty(n)
        for start in range(0, n, _ROW_BLOCK):
            stop = min(start + _ROW_BLOCK, n)
            y[start:stop] = w[index[start:stop]] @ x
        return y

    return LinearOperator((n, n), matvec=matvec, rmatvec=matvec, dtype=np.float64)


@dataclass
class LeastEigenvalue:
    value: float
    method: str
    converged: bool
    iterations: int = 0


def power_iteration_least(op: LinearOperator, radius: float, max_iter: int = 2000,
                          tol: float = 1e-9, seed: int = 0) -> LeastEigenvalue:
    """Least eigenvalue of symmetric op via power iteration on radius*I - op."""
    n = op.shape[0]
    rng = np.random.default_rng(seed)
    x = rng.normal(size=n)
    x /= np.linalg.norm(x)
    lam = 0.0
    for it in range(1, max_iter + 1):
        y = radius * x - op.matvec(x)
        norm = np.linalg.norm(y)
        if norm == 0:
            x = rng.normal(size=n)
            x /= np.linalg.norm(x)
            continue
        lam = float(x @ y)
        x_new = y / norm
        res = np.linalg.norm(radius * x_new - op.matvec(x_new) - lam * x_new)
        x = x_new
        if res < tol * max(1.0, abs(lam)):
            return LeastEigenvalue(radius - lam, "power", True, it)
    return LeastEigenvalue(radius - lam, "power", False, max_iter)


def least_eigenvalue(op: LinearOperator, radius: float, tol: float = 1e-10) -> LeastEigenvalue:
    """Smallest algebraic eigenvalue via Lanczos, falling back to power iteration."""
    try:
        values = eigsh(op, k=1, which="SA", tol=tol, return_eigenvectors=False)
        return LeastEigenvalue(float(values[0]), "lanczos", True)
    except (ArpackNoConvergence, ArpackError) as e:
        logger.warning("Lanczos failed (%s); falling back to power iteration", e)
        return power_iteration_least(op, radius)


def spectral_radius_bound(weights: dict, k: int) -> float:
    """sum_c |a_c| deg_c, an upper bound on |eigenvalue| of B."""
    return float(sum(abs(Fraction(a)) * class_degree(lam, k) for lam, a in weights.items()))


def largest_eigenvalue(op: LinearOperator, radius: float, tol: float = 1e-10) -> LeastEigenvalue:
    """Largest algebraic eigenvalue, as minus the least eigenvalue of -op."""
    low = least_eigenvalue(-op, radius, tol)
    return LeastEigenvalue(-low.value, low.method, low.converged, low.iterations)
