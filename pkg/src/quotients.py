"""Young-subgroup orbit partitions, quotient matrices and module eigenvalue extraction."""

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial

import numpy as np
import sympy
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .closed_forms import DIAGONAL_TABLES, SHAPES
from .config import (
    EIGEN_TOL,
    MAX_EXACT_QUOTIENT_DIM,
    MAX_ORBIT_BFS_K,
    MAX_QUOTIENT_CELLS,
    MAX_QUOTIENT_K,
    QUOTIENT_TOL,
)
from .errors import ConsistencyError, ExtractionError, InvalidInputError, ResourceLimitError
from .matchings import check_enumerable, partner_table
from .partitions import IntPartition, dominance_geq
from .scheme import ClassMatrix, check_label, class_degree, class_indices, class_labels
from .spectrum import cluster_eigenvalues, round_rational
from .workers import map_row_ranges

logger = logging.getLogger(__name__)

_X = sympy.Symbol("x")
_GENERIC_SEED = 20240229


def _blocks(shape, k: int) -> tuple[int, ...]:
    parts = tuple(int(p) for p in (shape.parts if isinstance(shape, IntPartition) else shape))
    if not parts or any(p < 1 for p in parts):
        raise InvalidInputError(f"block sizes must be positive: {list(parts)}")
    if sum(parts) != 2 * k:
        raise InvalidInputError(f"blocks {list(parts)} do not cover {2 * k} vertices")
    return parts


def _check_quotient_k(k: int) -> None:
    if k > MAX_QUOTIENT_K:
        raise ResourceLimitError(f"quotient work supports k <= {MAX_QUOTIENT_K}, got k={k}")
    check_enumerable(k)


def _label(blocks) -> str:
    return "[" + ",".join(str(b) for b in blocks) + "]"


# ── Orbit partitions ──


@dataclass
class OrbitPartition:
    """Orbits of Sym(b_1) x Sym(b_2) x ... on matchings, vertex blocks taken consecutively."""

    k: int
    blocks: tuple[int, ...]
    cell_of: np.ndarray = field(repr=False)
    signatures: list[tuple[tuple[int, int], ...]]

    @property
    def n_cells(self) -> int:
        return len(self.signatures)

    @property
    def sizes(self) -> np.ndarray:
        return np.bincount(self.cell_of, minlength=self.n_cells)

    def cells(self) -> list[np.ndarray]:
        return [np.flatnonzero(self.cell_of == c) for c in range(self.n_cells)]

    def representatives(self) -> tuple[np.ndarray, np.ndarray]:
        """First and last member of every cell in enumeration order."""
        n = len(self.cell_of)
        _, first = np.unique(self.cell_of, return_index=True)
        _, rev = np.unique(self.cell_of[::-1], return_index=True)
        return first, n - 1 - rev


def _block_of_vertex(blocks) -> np.ndarray:
    return np.repeat(np.arange(len(blocks)), blocks)


def signature_counts(table: np.ndarray, blocks) -> np.ndarray:
    """Per matching, the number of edges between each (lower, upper) block pair."""
    nb = len(blocks)
    bv = _block_of_vertex(blocks)
    tbl = table.astype(np.intp)
    rows = np.arange(len(tbl))
    counts = np.zeros((len(tbl), nb * nb), dtype=np.int16)
    for v in range(tbl.shape[1]):
        w = tbl[:, v]
        upper = w > v
        lo = np.minimum(bv[v], bv[w])
        hi = np.maximum(bv[v], bv[w])
        counts[rows[upper], (lo * nb + hi)[upper]] += 1
    return counts


def _signature(row, nb: int) -> tuple[tuple[int, int], ...]:
    return tuple(
        (code // nb, code % nb)
        for code, c in enumerate(row.tolist())
        for _ in range(c)
    )


_orbit_cache: dict[tuple[int, tuple[int, ...]], OrbitPartition] = {}


def young_orbits(k: int, shape) -> OrbitPartition:
    """Orbit partition keyed by the multiset of block pairs over edges.

    Cells are ordered by ascending signature, so the cell with the most edges
    inside the later blocks comes first.
    """
    _check_quotient_k(k)
    blocks = _blocks(shape, k)
    key = (k, blocks)
    if key not in _orbit_cache:
        nb = len(blocks)
        counts = signature_counts(partner_table(k), blocks)
        uniq, inverse = np.unique(counts, axis=0, return_inverse=True)
        inverse = np.asarray(inverse).reshape(-1)
        sigs = [_signature(row, nb) for row in uniq]
        order = sorted(range(len(uniq)), key=lambda i: sigs[i])
        rank = np.empty(len(uniq), dtype=np.intp)
        rank[order] = np.arange(len(uniq))
        orbit = OrbitPartition(k, blocks, rank[inverse], [sigs[i] for i in order])
        logger.info("Sym%s orbits at k=%d: %d cells", _label(blocks), k, orbit.n_cells)
        _orbit_cache[key] = orbit
    return _orbit_cache[key]


def _row_keys(table: np.ndarray) -> np.ndarray:
    n = table.shape[1]
    weights = n ** np.arange(n, dtype=np.int64)
    return table.astype(np.int64) @ weights


def orbits_by_generators(k: int, shape) -> np.ndarray:
    """Orbit labels from connected components under adjacent transpositions inside blocks."""
    if k > MAX_ORBIT_BFS_K:
        raise ResourceLimitError(f"generator orbits support k <= {MAX_ORBIT_BFS_K}, got k={k}")
    check_enumerable(k)
    blocks = _blocks(shape, k)
    table = partner_table(k)
    n_rows, n = table.shape
    keys = _row_keys(table)
    order = np.argsort(keys)
    sorted_keys = keys[order]

    src, dst = [np.arange(n_rows)], [np.arange(n_rows)]
    start = 0
    for size in blocks:
        for v in range(start, start + size - 1):
            s = np.arange(n)
            s[v], s[v + 1] = v + 1, v
            image = s[table[:, s]]
            dst.append(order[np.searchsorted(sorted_keys, _row_keys(image))])
            src.append(np.arange(n_rows))
        start += size
    rows, cols = np.concatenate(src), np.concatenate(dst)
    graph = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n_rows, n_rows))
    _, labels = connected_components(graph, directed=False)
    _, first = np.unique(labels, return_index=True)
    relabel = np.argsort(np.argsort(first))
    return relabel[labels]


def same_partition(a, b) -> bool:
    """True when two label arrays describe the same set partition."""
    a, b = np.asarray(a), np.asarray(b)
    pairs = np.unique(np.stack([a, b], axis=1), axis=0)
    return len(pairs) == len(np.unique(a)) == len(np.unique(b))


def is_equitable(partition, matrix: ClassMatrix) -> bool:
    """Neighbour counts into every cell are constant on each cell."""
    labels = partition.cell_of if isinstance(partition, OrbitPartition) else np.asarray(partition)
    if len(labels) != matrix.size:
        raise InvalidInputError(f"partition has {len(labels)} entries, graph has {matrix.size} vertices")
    _, labels = np.unique(labels, return_inverse=True)
    labels = labels.reshape(-1)
    n_cells = int(labels.max()) + 1
    if matrix.matrix is not None or matrix.k <= 5:
        onehot = np.zeros((len(labels), n_cells), dtype=np.int32)
        onehot[np.arange(len(labels)), labels] = 1
        counts = matrix.dense().astype(np.int32) @ onehot
    else:
        counts = np.stack([
            np.bincount(labels[matrix.row(i)], minlength=n_cells) for i in range(len(labels))
        ])
    _, first = np.unique(labels, return_index=True)
    return bool((counts == counts[first[labels]]).all())


# ── Quotient matrices ──


@dataclass
class QuotientMatrix:
    k: int
    class_label: IntPartition
    subgroup: tuple[int, ...]
    entries: np.ndarray
    cell_sizes: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.entries)

    @property
    def trace(self) -> int:
        return int(np.trace(self.entries))

    @property
    def row_sums(self) -> np.ndarray:
        return self.entries.sum(axis=1)

    @property
    def source(self) -> str:
        return f"X_{self.class_label}/{_label(self.subgroup)}"


def _stack_rows(k: int, blocks: tuple[int, ...], start: int, stop: int) -> np.ndarray:
    orbit = young_orbits(k, blocks)
    table = partner_table(k)
    n_classes, c = len(class_labels(k)), orbit.n_cells
    first, last = orbit.representatives()
    out = np.zeros((stop - start, n_classes, c), dtype=np.int32)
    for i, cell in enumerate(range(start, stop)):
        for rep in (first[cell], last[cell]):
            row = class_indices(table[rep], table, k).astype(np.intp)
            counts = np.bincount(row * c + orbit.cell_of, minlength=n_classes * c).reshape(n_classes, c)
            if rep == first[cell]:
                out[i] = counts
            elif not np.array_equal(out[i], counts):
                raise ConsistencyError(
                    f"Sym{_label(blocks)} cell {cell} is not equitable at k={k}"
                )
    return out


_stack_cache: dict[tuple[int, tuple[int, ...]], np.ndarray] = {}


def quotient_stack(k: int, shape, workers: int = 1) -> np.ndarray:
    """Quotients of every class at once: stack[c] is the quotient of class_labels(k)[c]."""
    _check_quotient_k(k)
    blocks = _blocks(shape, k)
    key = (k, blocks)
    if key not in _stack_cache:
        orbit = young_orbits(k, blocks)
        if orbit.n_cells > MAX_QUOTIENT_CELLS:
            raise ResourceLimitError(
                f"Sym{_label(blocks)} has {orbit.n_cells} orbits at k={k} "
                f"(limit {MAX_QUOTIENT_CELLS})"
            )
        rows = map_row_ranges(partial(_stack_rows, k, blocks), orbit.n_cells, workers)
        stack = np.ascontiguousarray(np.transpose(rows, (1, 0, 2)))
        stack.setflags(write=False)
        _stack_cache[key] = stack
    return _stack_cache[key]


def quotient_matrix(class_label, shape, k: int, workers: int = 1) -> QuotientMatrix:
    lam = check_label(class_label, k)
    blocks = _blocks(shape, k)
    stack = quotient_stack(k, blocks, workers)
    entries = np.array(stack[class_labels(k).index(lam)])
    q = QuotientMatrix(k, lam, blocks, entries, young_orbits(k, blocks).sizes)
    degree = class_degree(lam, k)
    if not (q.row_sums == degree).all() or (entries < 0).any():
        raise ConsistencyError(f"{q.source}: rows {q.row_sums.tolist()} do not sum to {degree}")
    logger.debug("%s = %s", q.source, entries.tolist())
    return q


# ── Exact eigenvalues ──


@dataclass
class UnresolvedFactor:
    factor: str
    degree: int
    multiplicity: int
    brackets: list[tuple[Fraction, Fraction]]


@dataclass
class ExactSpectrum:
    charpoly: str
    roots: list[Fraction]
    unresolved: list[UnresolvedFactor]

    @property
    def resolved(self) -> bool:
        return not self.unresolved


def _fraction(r) -> Fraction:
    r = sympy.Rational(r)
    return Fraction(int(r.p), int(r.q))


def exact_eigenvalues(matrix) -> ExactSpectrum:
    """Roots of the characteristic polynomial: rational roots exactly, the rest bracketed."""
    entries = matrix.entries if isinstance(matrix, QuotientMatrix) else matrix
    rows = [[sympy.Rational(str(v)) for v in row] for row in np.asarray(entries, dtype=object).tolist()]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise InvalidInputError("quotient matrix must be square")
    if n > MAX_EXACT_QUOTIENT_DIM:
        raise ResourceLimitError(
            f"exact eigenvalues support dimension <= {MAX_EXACT_QUOTIENT_DIM}, got {n}"
        )
    poly = sympy.Matrix(rows).charpoly(_X)
    _, factors = poly.factor_list()
    roots, unresolved = [], []
    for f, mult in factors:
        f = sympy.Poly(f.as_expr(), _X)
        if f.degree() == 1:
            a, b = f.all_coeffs()
            roots.extend([_fraction(-b / a)] * mult)
            continue
        intervals = f.intervals()
        if sum(m for _, m in intervals) != f.degree():
            raise ConsistencyError(f"characteristic factor {f.as_expr()} has non-real roots")
        unresolved.append(UnresolvedFactor(
            str(f.as_expr()), f.degree(), mult,
            [(_fraction(lo), _fraction(hi)) for (lo, hi), _ in intervals],
        ))
    roots.sort(reverse=True)
    return ExactSpectrum(str(poly.as_expr()), roots, unresolved)


# ── Joint eigenspaces ──


@dataclass(frozen=True)
class JointEigenspace:
    """A common eigenspace of all class quotients: one character-table row, seen dim times."""

    dim: int
    row: tuple[Fraction, ...]


_joint_cache: dict[tuple[int, tuple[int, ...]], list[JointEigenspace]] = {}


def joint_eigenspaces(k: int, shape, workers: int = 1) -> list[JointEigenspace]:
    """Common eigenspaces of every class quotient under one Young subgroup.

    Quotients are symmetrized with the cell sizes, a generic combination is
    diagonalized, and each eigenspace is read back class by class.
    """
    blocks = _blocks(shape, k)
    key = (k, blocks)
    if key in _joint_cache:
        return _joint_cache[key]

    stack = quotient_stack(k, blocks, workers)
    sq = np.sqrt(young_orbits(k, blocks).sizes.astype(float))
    scale = sq[:, None] / sq[None, :]

    def symmetrized(c: int) -> np.ndarray:
        return stack[c] * scale

    rng = np.random.default_rng(_GENERIC_SEED)
    generic = np.zeros(scale.shape)
    for c, coeff in enumerate(rng.standard_normal(len(stack))):
        s = symmetrized(c)
        if not np.allclose(s, s.T, atol=QUOTIENT_TOL * max(1.0, s.max())):
            raise ConsistencyError(f"Sym{_label(blocks)} quotients are not size-symmetric")
        generic += coeff * s
    w, vectors = np.linalg.eigh(generic)

    clusters = [idx for _, idx in cluster_eigenvalues(w, QUOTIENT_TOL)]
    values = np.zeros((len(clusters), len(stack)))
    residuals = np.zeros((len(clusters), len(stack)))
    for c in range(len(stack)):
        s = symmetrized(c)
        for j, idx in enumerate(clusters):
            v = vectors[:, idx]
            sv = s @ v
            values[j, c] = np.einsum("ia,ia->", v, sv) / len(idx)
            residuals[j, c] = np.linalg.norm(sv - values[j, c] * v)

    spaces = []
    for j, idx in enumerate(clusters):
        if residuals[j].max() > EIGEN_TOL * max(1.0, np.abs(values[j]).max()) * 10:
            raise ConsistencyError(f"Sym{_label(blocks)}: generic combination merged eigenspaces")
        row = []
        for x in values[j]:
            r = round_rational(x)
            if r is None:
                raise ConsistencyError(f"Sym{_label(blocks)}: eigenvalue {x} is not a small rational")
            row.append(r)
        spaces.append(JointEigenspace(len(idx), tuple(row)))
    spaces.sort(key=lambda s: s.row, reverse=True)

    for c in range(len(stack)):
        q = stack[c].astype(np.int64)
        p1 = sum(s.dim * s.row[c] for s in spaces)
        p2 = sum(s.dim * s.row[c] ** 2 for s in spaces)
        if p1 != int(np.trace(q)) or p2 != int((q * q.T).sum()):
            raise ConsistencyError(
                f"Sym{_label(blocks)}: eigenvalues of class {class_labels(k)[c]} fail the trace check"
            )

    logger.info("Sym%s at k=%d: %d joint eigenspaces", _label(blocks), k, len(spaces))
    _joint_cache[key] = spaces
    return spaces


# ── Module assignment ──


def default_ladder(k: int) -> list[IntPartition]:
    """[2k], [2k-2,2], [2k-4,4], [2k-4,2,2], [2k-6,6], keeping those that are partitions at k."""
    out = []
    for shape in SHAPES:
        lam = shape.at(k)
        if lam is not None and lam not in out:
            out.append(lam)
    return out


@dataclass
class ModuleValue:
    module: IntPartition
    value: Fraction
    source: str
    shortcut_agrees: bool | None = None


@dataclass
class EigenExtraction:
    k: int
    class_label: IntPartition
    values: list[ModuleValue]

    def as_dict(self) -> dict[IntPartition, Fraction]:
        return {mv.module: mv.value for mv in self.values}


def _new_row(spaces, known: dict, source: str) -> tuple[Fraction, ...]:
    known_rows = set(known.values())
    unknown = {s.row for s in spaces} - known_rows
    if len(unknown) != 1:
        raise ExtractionError(f"{len(unknown)} unexplained eigenvalue rows", source)
    return unknown.pop()


def extract_module_eigenvalues(class_label, k: int, ladder=None, workers: int = 1) -> EigenExtraction:
    """Walk the subgroup ladder; each quotient contributes the eigenvalue of exactly one new module."""
    lam = check_label(class_label, k)
    ci = class_labels(k).index(lam)
    ladder = default_ladder(k) if ladder is None else [check_label(mu, k) for mu in ladder]

    known: dict[IntPartition, tuple[Fraction, ...]] = {}
    values = []
    for mu in ladder:
        q = quotient_matrix(lam, mu, k, workers)
        spaces = joint_eigenspaces(k, mu.parts, workers)
        row = _new_row(spaces, known, q.source)
        for module, known_row in known.items():
            if any(s.row == known_row for s in spaces) and not dominance_geq(module, mu):
                raise ConsistencyError(f"{q.source}: module {module} does not dominate {mu}")
        known[mu] = row
        value = row[ci]

        if q.dim <= MAX_EXACT_QUOTIENT_DIM:
            exact = exact_eigenvalues(q)
            expected = Counter(v for s in spaces for v in [s.row[ci]] * s.dim)
            if not exact.resolved or Counter(exact.roots) != expected:
                raise ConsistencyError(f"{q.source}: exact roots {exact.roots} disagree with eigenspaces")

        new_dim = sum(s.dim for s in spaces if s.row == row)
        shortcut = None
        if new_dim == 1:
            rest = sum(s.dim * s.row[ci] for s in spaces if s.row != row)
            shortcut = q.trace - rest == value
        values.append(ModuleValue(mu, value, q.source, shortcut))
        logger.debug("%s: module %s -> %s", q.source, mu, value)
    return EigenExtraction(k, lam, values)


def module_rows_from_quotients(k: int, modules=None, workers: int = 1) -> dict[IntPartition, tuple[Fraction, ...]]:
    """Full character-table rows (indexed like class_labels(k)) for the requested modules.

    Modules are processed in reverse-lex order, a linear extension of dominance,
    so every module met in a Sym(mu) quotient other than mu is already known.
    """
    _check_quotient_k(k)
    labels = class_labels(k)
    targets = labels if modules is None else [check_label(m, k) for m in modules]
    needed = [mu for mu in labels if any(dominance_geq(mu, t) for t in targets)]
    rows: dict[IntPartition, tuple[Fraction, ...]] = {}
    for mu in needed:
        spaces = joint_eigenspaces(k, mu.parts, workers)
        rows[mu] = _new_row(spaces, rows, f"Sym{mu}")
        logger.info("k=%d module %s resolved from %d eigenspaces", k, mu, len(spaces))
    return {m: rows[m] for m in targets}


# ── Printed diagonal audit ──


@dataclass
class DiagonalEntry:
    table: str
    position: int
    printed: Fraction | None
    computed: int
    status: str
    note: str = ""


@dataclass
class DiagonalReport:
    k: int
    degree: int
    entries: list[DiagonalEntry]
    row_sums_ok: dict[str, bool]
    matrices: dict[str, list[list[int]]]

    @property
    def ok(self) -> bool:
        return all(self.row_sums_ok.values())


def verify_printed_diagonals(k: int, workers: int = 1) -> DiagonalReport:
    """Compare the printed diagonals of X_[2k-4,2,2] quotients with computed ones."""
    if k > 6:
        raise ResourceLimitError(f"the diagonal audit supports k <= 6, got k={k}")
    if k < 3:
        raise InvalidInputError(f"[2k-4,2,2] needs k >= 3, got k={k}")
    klass = IntPartition((2 * k - 4, 2, 2))
    degree = class_degree(klass, k)
    entries, row_sums_ok, matrices = [], {}, {}
    for table in DIAGONAL_TABLES:
        small = table.subgroup.offset
        if 2 * k - small < 1:
            continue
        q = quotient_matrix(klass, (2 * k - small, small), k, workers)
        row_sums_ok[table.name] = bool((q.row_sums == degree).all())
        matrices[table.name] = q.entries.tolist()
        for pos, formula in enumerate(table.diagonal[: q.dim]):
            computed = int(q.entries[pos, pos])
            if k < table.floor:
                entries.append(DiagonalEntry(table.name, pos, None, computed, "not-applicable"))
                continue
            printed = formula(k)
            notes = []
            if printed > degree or printed < 0:
                notes.append("cannot be a diagonal entry")
            if printed != computed and printed == q.trace:
                notes.append("equals the quotient trace")
            status = "match" if printed == computed else "mismatch"
            entries.append(DiagonalEntry(table.name, pos, printed, computed, status, "; ".join(notes)))
    return DiagonalReport(k, degree, entries, row_sums_ok, matrices)
