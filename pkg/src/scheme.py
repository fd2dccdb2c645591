"""Scheme classes A_lambda, class degrees, the graph N_t(2k) and axiom checks."""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache, partial

import numpy as np

from .config import MAX_COMMUTATIVITY_K, MAX_DENSE_K
from .errors import ConsistencyError, InvalidInputError, ResourceLimitError
from .matchings import (
    MatchingFamily,
    PerfectMatching,
    check_enumerable,
    check_t,
    partner_table,
    setwise_t_intersecting_by_shape,
    union_shape,
)
from .partitions import IntPartition, double_factorial, even_partition, even_partitions, has_subpartition_sum
from .workers import map_row_ranges

logger = logging.getLogger(__name__)


def class_labels(k: int) -> list[IntPartition]:
    """Scheme classes of K_2k in reverse-lex order; the last one is the identity class."""
    return even_partitions(2 * k)


def check_label(lam, k: int) -> IntPartition:
    lam = even_partition(lam)
    if lam.n != 2 * k:
        raise InvalidInputError(f"{lam} is not a partition of {2 * k}")
    return lam


def class_degree(lam, k: int) -> int:
    """Number of matchings whose union with a fixed matching has shape lam.

    Choose which P-edges go into each cycle, then close each group of m edges
    into one 2m-cycle in 2^(m-1) (m-1)! ways.
    """
    lam = check_label(lam, k)
    num, den = math.factorial(k), 1
    for part in lam:
        m = part // 2
        num *= 2 ** (m - 1) * math.factorial(m - 1)
        den *= math.factorial(m)
    for mult in lam.multiplicities().values():
        den *= math.factorial(mult)
    return num // den


def degree_table(k: int) -> list[tuple[IntPartition, int]]:
    return [(lam, class_degree(lam, k)) for lam in class_labels(k)]


# ── Vectorized union shapes ──


def _label_key(lam: IntPartition, k: int) -> int:
    base = k + 1
    return sum(mult * base ** (part // 2 - 1) for part, mult in lam.multiplicities().items())


@lru_cache(maxsize=None)
def _key_lookup(k: int) -> tuple[np.ndarray, np.ndarray]:
    keys = np.array([_label_key(lam, k) for lam in class_labels(k)], dtype=np.int64)
    order = np.argsort(keys)
    return keys[order], order


def shape_keys(p, table: np.ndarray) -> np.ndarray:
    """Mixed-radix key (base k+1, digit m = number of 2m-cycles) of P + Q for every row Q.

    With sigma = P o Q, every 2m-cycle of the union splits into two sigma-cycles
    of length m, so it contributes 2m vertices of sigma-order m.
    """
    n = table.shape[1]
    k = n // 2
    sigma = np.asarray(p, dtype=np.intp)[table.astype(np.intp)]
    identity = np.arange(n)
    lengths = np.zeros(sigma.shape, dtype=np.int64)
    cur = sigma
    for step in range(1, k + 1):
        lengths[(cur == identity) & (lengths == 0)] = step
        if step < k:
            cur = np.take_along_axis(sigma, cur, axis=1)
    keys = np.zeros(len(table), dtype=np.int64)
    base = k + 1
    for m in range(1, k + 1):
        keys += ((lengths == m).sum(axis=1) // (2 * m)) * base ** (m - 1)
    return keys


def class_indices(p, table: np.ndarray, k: int) -> np.ndarray:
    """Class index (position in class_labels(k)) of P + Q for every row Q of table."""
    keys = shape_keys(p, table)
    sorted_keys, order = _key_lookup(k)
    pos = np.clip(np.searchsorted(sorted_keys, keys), 0, len(sorted_keys) - 1)
    if not np.array_equal(sorted_keys[pos], keys):
        raise ConsistencyError(f"union shape outside the class list at k={k}")
    return order[pos].astype(np.int8)


def class_index_row(k: int, i: int) -> np.ndarray:
    """Row i of the class-index matrix: entry j is the class of (matching i, matching j)."""
    check_enumerable(k)
    table = partner_table(k)
    return class_indices(table[i], table, k)


def _class_index_block(k: int, start: int, stop: int) -> np.ndarray:
    table = partner_table(k)
    return np.stack([class_indices(table[i], table, k) for i in range(start, stop)])


_dense_cache: dict[int, np.ndarray] = {}


def class_index_matrix(k: int, workers: int = 1) -> np.ndarray:
    """Dense N x N int8 matrix of class indices; A_lambda is (M == index)."""
    if k > MAX_DENSE_K:
        raise ResourceLimitError(f"dense matrices support k <= {MAX_DENSE_K}, got k={k}")
    check_enumerable(k)
    if k not in _dense_cache:
        n = len(partner_table(k))
        logger.info("building dense %dx%d class-index matrix", n, n)
        matrix = map_row_ranges(partial(_class_index_block, k), n, workers)
        matrix.setflags(write=False)
        _dense_cache[k] = matrix
    return _dense_cache[k]


@dataclass
class ClassMatrix:
    k: int
    class_label: IntPartition
    index: int
    mode: str = "implicit"
    matrix: np.ndarray | None = field(default=None, repr=False)

    @property
    def degree(self) -> int:
        return class_degree(self.class_label, self.k)

    @property
    def size(self) -> int:
        return len(partner_table(self.k))

    def row(self, i: int) -> np.ndarray:
        """Boolean neighbor mask of matching i."""
        if self.matrix is not None:
            return self.matrix[i].astype(bool)
        return class_index_row(self.k, i) == self.index

    def adjacent(self, P: PerfectMatching, Q: PerfectMatching) -> bool:
        return union_shape(P, Q) == self.class_label

    def dense(self, workers: int = 1) -> np.ndarray:
        if self.matrix is None:
            self.matrix = (class_index_matrix(self.k, workers) == self.index).astype(np.uint8)
        return self.matrix


def build_class_matrix(lam, k: int, mode: str = "implicit", workers: int = 1) -> ClassMatrix:
    lam = check_label(lam, k)
    if mode not in ("dense", "implicit"):
        raise InvalidInputError(f"unknown mode {mode!r}")
    check_enumerable(k)
    cm = ClassMatrix(k, lam, class_labels(k).index(lam), mode)
    if mode == "dense":
        cm.dense(workers)
    return cm


# ── Axioms ──


@dataclass
class AxiomCheck:
    name: str
    passed: bool
    witness: tuple[int, int] | None = None
    detail: str = ""
    skipped: bool = False


@dataclass
class SchemeReport:
    k: int
    classes: list[IntPartition]
    checks: list[AxiomCheck]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks if not c.skipped)


def _first_mismatch(a: np.ndarray, b: np.ndarray) -> tuple[int, int] | None:
    bad = np.argwhere(a != b)
    if len(bad) == 0:
        return None
    i, j = bad[0]
    return int(i), int(j)


def verify_scheme_axioms(k: int, workers: int = 1) -> SchemeReport:
    """Sum-to-J, identity class, symmetry, constant row sums and (k <= 4) commutativity."""
    labels = class_labels(k)
    matrix = class_index_matrix(k, workers)
    n = len(matrix)
    checks = []

    total = np.zeros((n, n), dtype=np.int16)
    for c in range(len(labels)):
        total += matrix == c
    w = _first_mismatch(total, np.ones_like(total))
    checks.append(AxiomCheck("sum-to-J", w is None, w))

    identity = (matrix == len(labels) - 1).astype(np.uint8)
    w = _first_mismatch(identity, np.eye(n, dtype=np.uint8))
    checks.append(AxiomCheck("identity-class", w is None, w, f"class {labels[-1]}"))

    w = _first_mismatch(matrix, matrix.T)
    checks.append(AxiomCheck("symmetry", w is None, w))

    row_ok, row_witness, row_detail = True, None, ""
    for c, lam in enumerate(labels):
        sums = (matrix == c).sum(axis=1)
        bad = np.flatnonzero(sums != class_degree(lam, k))
        if len(bad):
            row_ok, row_witness = False, (int(bad[0]), c)
            row_detail = f"class {lam}: row sum {int(sums[bad[0]])} != {class_degree(lam, k)}"
            break
    checks.append(AxiomCheck("row-sums", row_ok, row_witness, row_detail))

    if k <= MAX_COMMUTATIVITY_K:
        mats = [(matrix == c).astype(np.int32) for c in range(len(labels))]
        comm_ok, comm_witness, comm_detail = True, None, ""
        for a in range(len(mats)):
            for b in range(a + 1, len(mats)):
                w = _first_mismatch(mats[a] @ mats[b], mats[b] @ mats[a])
                if w is not None:
                    comm_ok, comm_witness = False, w
                    comm_detail = f"{labels[a]} x {labels[b]}"
                    break
            if not comm_ok:
                break
        checks.append(AxiomCheck("commutativity", comm_ok, comm_witness, comm_detail))
    else:
        checks.append(AxiomCheck(
            "commutativity", True, skipped=True,
            detail=f"only checked for k <= {MAX_COMMUTATIVITY_K}",
        ))

    for c in checks:
        logger.info("k=%d axiom %s: %s", k, c.name, "skipped" if c.skipped else c.passed)
    return SchemeReport(k, labels, checks)


# ── N_t(2k) ──


@dataclass
class IntersectionGraph:
    """Matchings adjacent when they are not set-wise t-intersecting."""

    k: int
    t: int
    class_list: list[IntPartition]
    class_ids: tuple[int, ...]

    @property
    def n_vertices(self) -> int:
        return double_factorial(2 * self.k - 1)

    @property
    def degree(self) -> int:
        return sum(class_degree(lam, self.k) for lam in self.class_list)

    def adjacency_row(self, i: int) -> np.ndarray:
        return np.isin(class_index_row(self.k, i), self.class_ids)

    def adjacent(self, P: PerfectMatching, Q: PerfectMatching) -> bool:
        return not setwise_t_intersecting_by_shape(P, Q, self.t)

    def dense_adjacency(self, workers: int = 1) -> np.ndarray:
        return np.isin(class_index_matrix(self.k, workers), self.class_ids)


def build_intersection_graph(k: int, t: int) -> IntersectionGraph:
    check_t(k, t)
    labels = class_labels(k)
    ids = tuple(i for i, lam in enumerate(labels) if not has_subpartition_sum(lam, 2 * t))
    graph = IntersectionGraph(k, t, [labels[i] for i in ids], ids)
    logger.info(
        "N_%d(%d): classes %s, degree %d",
        t, 2 * k, ", ".join(str(lam) for lam in graph.class_list), graph.degree,
    )
    return graph


def is_coclique(family: MatchingFamily, graph: IntersectionGraph) -> bool:
    if family.k != graph.k:
        raise InvalidInputError(f"family lives on {2 * family.k} vertices, graph on {2 * graph.k}")
    rows = family.partners
    for i in range(len(rows) - 1):
        if np.isin(class_indices(rows[i], rows[i + 1:], graph.k), graph.class_ids).any():
            return False
    return True
