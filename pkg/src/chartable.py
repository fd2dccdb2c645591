"""Character tables of the matching scheme: assembly, verification and the on-disk cache."""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .closed_forms import SHAPES, closed_form_cell
from .config import EIGEN_TOL, MAX_ASSEMBLY_K, MAX_QUOTIENT_K, MAX_SPECTRUM_K
from .errors import ConsistencyError, ExtractionError, InvalidInputError, ResourceLimitError, TableParseError
from .partitions import IntPartition, dominance_geq, double_factorial, hook_dimension
from .quotients import extract_module_eigenvalues, module_rows_from_quotients, young_orbits
from .scheme import check_label, class_degree, class_index_matrix, class_labels
from .serialize import fraction_from_str, fraction_to_str, read_table_file, write_table_file
from .spectrum import cluster_eigenvalues, dense_class_spectrum, round_rational

logger = logging.getLogger(__name__)

PROVENANCES = ("closed-form", "quotient-extracted", "spectrum-matched", "numeric")
_ASSEMBLY_SEED = 7


@dataclass
class TableCheck:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class CharacterTable:
    """entries[(module, class)] is the eigenvalue of A_class on the module."""

    k: int
    modules: list[IntPartition]
    classes: list[IntPartition]
    entries: dict[tuple[IntPartition, IntPartition], Fraction | float]
    multiplicities: dict[IntPartition, int]
    provenance: dict[tuple[IntPartition, IntPartition], str] = field(default_factory=dict)

    def entry(self, module, klass) -> Fraction | float | None:
        return self.entries.get((check_label(module, self.k), check_label(klass, self.k)))

    def row(self, module) -> list[Fraction | float | None]:
        return [self.entry(module, c) for c in self.classes]

    def column(self, klass) -> list[Fraction | float | None]:
        return [self.entry(m, klass) for m in self.modules]

    @property
    def exact(self) -> bool:
        return all(isinstance(v, Fraction) for v in self.entries.values())

    @property
    def complete(self) -> bool:
        return len(self.entries) == len(self.modules) * len(self.classes)

    def check_invariants(self) -> list[TableCheck]:
        """Trace identity per class, identity column, degree row and multiplicities."""
        k, n = self.k, double_factorial(2 * self.k - 1)
        identity = IntPartition((2,) * k)
        trivial = IntPartition((2 * k,))
        checks = []

        def close(a, b) -> bool:
            if isinstance(a, Fraction) and isinstance(b, (int, Fraction)):
                return a == b
            return abs(float(a) - float(b)) <= EIGEN_TOL * max(1.0, abs(float(b)))

        for klass in self.classes:
            col = self.column(klass)
            if any(v is None for v in col):
                continue
            total = sum(self.multiplicities[m] * v for m, v in zip(self.modules, col))
            want = n if klass == identity else 0
            checks.append(TableCheck(f"trace {klass}", close(total, want), f"sum {total}, want {want}"))

        if identity in self.classes:
            bad = [str(m) for m in self.modules if self.entry(m, identity) not in (None, 1)]
            checks.append(TableCheck("identity column", not bad, ", ".join(bad)))

        if trivial in self.modules:
            bad = [
                str(c) for c in self.classes
                if self.entry(trivial, c) is not None and not close(self.entry(trivial, c), class_degree(c, k))
            ]
            checks.append(TableCheck("degree row", not bad, ", ".join(bad)))

        bad = [str(m) for m in self.modules if self.multiplicities[m] != hook_dimension(m)]
        checks.append(TableCheck("multiplicities", not bad, ", ".join(bad)))
        if set(self.modules) == set(class_labels(k)):
            total = sum(self.multiplicities.values())
            checks.append(TableCheck("multiplicity sum", total == n, f"{total} vs {n}"))
        return checks


# ── Dense assembly ──


def _orbit_weight(k: int, mu: IntPartition, vectors: np.ndarray) -> float:
    """Squared norm of the projection of vectors onto the Sym(mu)-invariant subspace."""
    orbit = young_orbits(k, mu.parts)
    scale = 1.0 / np.sqrt(orbit.sizes.astype(float))
    onehot = np.zeros((len(orbit.cell_of), orbit.n_cells))
    onehot[np.arange(len(orbit.cell_of)), orbit.cell_of] = scale[orbit.cell_of]
    return float(((onehot.T @ vectors) ** 2).sum())


def _exact_row(row) -> list[Fraction] | None:
    out = []
    for x in row:
        r = round_rational(x)
        if r is None:
            return None
        out.append(r)
    return out


def _certify_row(k: int, row: list[Fraction], index: np.ndarray) -> bool:
    """Check A_c v = row[c] v on the integer column v of the module's idempotent."""
    labels = class_labels(k)
    degrees = [class_degree(lam, k) for lam in labels]
    lcm_deg = math.lcm(*degrees)
    lcm_den = math.lcm(*(r.denominator for r in row))
    coef = [row[c] * lcm_den * lcm_deg / degrees[c] for c in range(len(labels))]
    if any(x.denominator != 1 for x in coef):
        return False
    v = np.array([int(x) for x in coef], dtype=np.int64)[index[:, 0]]
    for c, theta in enumerate(row):
        av = (index == c).astype(np.int64) @ v
        if not np.array_equal(theta.denominator * av, theta.numerator * v):
            return False
    return True


def assemble_full_table(k: int, workers: int = 1, seed: int = _ASSEMBLY_SEED) -> CharacterTable:
    """The whole table from a shared eigenbasis of the dense class matrices.

    A generic combination of the A_c is diagonalized; each eigenspace is a
    module, named by walking modules in dominance order and asking which
    new eigenspace has Sym(mu)-invariant vectors.
    """
    if k > MAX_ASSEMBLY_K:
        raise ResourceLimitError(f"dense assembly supports k <= {MAX_ASSEMBLY_K}, got k={k}")
    labels = class_labels(k)
    index = class_index_matrix(k, workers)
    mats = [(index == c).astype(np.float64) for c in range(len(labels))]

    rng = np.random.default_rng(seed)
    generic = sum(a * m for a, m in zip(rng.standard_normal(len(mats)), mats))
    w, vectors = np.linalg.eigh(generic)
    clusters = cluster_eigenvalues(w)
    if len(clusters) != len(labels):
        raise ConsistencyError(f"k={k}: {len(clusters)} eigenspaces for {len(labels)} modules")

    rayleigh = np.stack([(vectors * (m @ vectors)).sum(axis=0) for m in mats])
    values = [rayleigh[:, idx].mean(axis=1) for _, idx in clusters]
    logger.info("k=%d: %d eigenspaces, dimensions %s", k, len(clusters), [len(i) for _, i in clusters])

    owner: dict[IntPartition, int] = {}
    for mu in labels:
        present = [
            j for j, (_, idx) in enumerate(clusters)
            if _orbit_weight(k, mu, vectors[:, idx]) > 0.5
        ]
        for other, j in owner.items():
            if j in present and not dominance_geq(other, mu):
                raise ConsistencyError(f"module {other} has Sym{mu}-invariants but does not dominate {mu}")
        fresh = [j for j in present if j not in owner.values()]
        if len(fresh) != 1:
            raise ExtractionError(f"{len(fresh)} new eigenspaces with Sym{mu}-invariants", f"k={k}")
        owner[mu] = fresh[0]
        dim = len(clusters[fresh[0]][1])
        if dim != hook_dimension(mu):
            raise ConsistencyError(f"module {mu}: eigenspace of dimension {dim}, expected {hook_dimension(mu)}")

    entries, provenance = {}, {}
    for mu in labels:
        row = values[owner[mu]]
        exact = _exact_row(row)
        if exact is not None and not _certify_row(k, exact, index):
            logger.warning("k=%d module %s: rounded row fails the eigenvector check", k, mu)
            exact = None
        for c, lam in enumerate(labels):
            if exact is None:
                entries[(mu, lam)], provenance[(mu, lam)] = float(row[c]), "numeric"
            else:
                entries[(mu, lam)], provenance[(mu, lam)] = exact[c], "spectrum-matched"
    table = CharacterTable(k, list(labels), list(labels), entries,
                           {mu: hook_dimension(mu) for mu in labels}, provenance)
    _log_checks(table)
    return table


def assemble_table_from_quotients(k: int, workers: int = 1) -> CharacterTable:
    """Exact rows for every module from Young-subgroup quotients."""
    if k > MAX_QUOTIENT_K:
        raise ResourceLimitError(f"quotient assembly supports k <= {MAX_QUOTIENT_K}, got k={k}")
    labels = class_labels(k)
    rows = module_rows_from_quotients(k, workers=workers)
    entries = {(mu, lam): rows[mu][c] for mu in labels for c, lam in enumerate(labels)}
    table = CharacterTable(
        k, list(labels), list(labels), entries,
        {mu: hook_dimension(mu) for mu in labels},
        {key: "quotient-extracted" for key in entries},
    )
    _log_checks(table)
    return table


def closed_form_table(k: int) -> CharacterTable:
    """The printed grid at k; out-of-range cells are left out."""
    shapes = []
    for s in SHAPES:
        lam = s.at(k)
        if lam is not None and lam not in shapes:
            shapes.append(lam)
    entries, provenance = {}, {}
    for mu in shapes:
        for lam in shapes:
            cell = closed_form_cell(mu, lam, k)
            if cell is not None and cell.in_range:
                entries[(mu, lam)] = cell.value
                provenance[(mu, lam)] = "closed-form"
    return CharacterTable(k, shapes, shapes, entries, {mu: hook_dimension(mu) for mu in shapes}, provenance)


def _log_checks(table: CharacterTable) -> None:
    for check in table.check_invariants():
        if not check.passed:
            logger.warning("k=%d table check %s failed: %s", table.k, check.name, check.detail)


@dataclass
class MultiplicityClass:
    value: Fraction | float
    modules: list[IntPartition]
    multiplicity: int


def multiplicity_classes(table: CharacterTable, klass) -> list[MultiplicityClass]:
    """Modules grouped by their eigenvalue on one class, largest value first."""
    klass = check_label(klass, table.k)
    groups: dict = {}
    for mu in table.modules:
        v = table.entry(mu, klass)
        if v is not None:
            groups.setdefault(v, []).append(mu)
    return [
        MultiplicityClass(v, mods, sum(table.multiplicities[m] for m in mods))
        for v, mods in sorted(groups.items(), key=lambda kv: kv[0], reverse=True)
    ]


# ── Verification against the printed grid ──


@dataclass
class CellCheck:
    module: str
    klass: str
    method: str
    printed: Fraction | None
    computed: Fraction | float | None
    status: str
    note: str = ""


@dataclass
class TableVerification:
    k: int
    method: str
    cells: list[CellCheck]

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.cells)

    def counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for c in self.cells:
            out[c.status] = out.get(c.status, 0) + 1
        return out


def _grid_shapes(k: int) -> list[tuple[str, IntPartition | None]]:
    return [(s.name, s.at(k)) for s in SHAPES]


def _status(cell, computed) -> str:
    if not cell.in_range:
        return "out-of-range"
    return "pass" if computed is not None and computed == cell.value else "fail"


def _verify_by_quotients(k: int, workers: int) -> list[CellCheck]:
    out = []
    for cname, lam in _grid_shapes(k):
        extracted = extract_module_eigenvalues(lam, k, workers=workers).as_dict() if lam else {}
        for mname, mu in _grid_shapes(k):
            cell = closed_form_cell(mname, cname, k) if lam and mu else None
            if cell is None:
                out.append(CellCheck(mname, cname, "quotient", None, None, "not-applicable"))
                continue
            computed = extracted.get(mu)
            out.append(CellCheck(mname, cname, "quotient", cell.value, computed, _status(cell, computed)))
    return out


def _verify_by_spectrum(k: int, workers: int) -> list[CellCheck]:
    out = []
    for cname, lam in _grid_shapes(k):
        clusters = dense_class_spectrum(lam, k, workers) if lam else []
        for mname, mu in _grid_shapes(k):
            cell = closed_form_cell(mname, cname, k) if lam and mu else None
            if cell is None:
                out.append(CellCheck(mname, cname, "spectrum", None, None, "not-applicable"))
                continue
            if not cell.in_range:
                out.append(CellCheck(mname, cname, "spectrum", None, None, "out-of-range"))
                continue
            target = float(cell.value)
            hit = next(
                (c for c in clusters if abs(c.value - target) <= EIGEN_TOL * max(1.0, abs(target))),
                None,
            )
            if hit is None:
                out.append(CellCheck(mname, cname, "spectrum", cell.value, None, "fail", "not an eigenvalue"))
                continue
            need = hook_dimension(mu)
            status = "pass" if hit.multiplicity >= need else "fail"
            note = "" if hit.multiplicity == need else f"multiplicity {hit.multiplicity}, module needs {need}"
            computed = hit.exact if hit.exact is not None else hit.value
            out.append(CellCheck(mname, cname, "spectrum", cell.value, computed, status, note))
    return out


def verify_table(k: int, method: str = "quotient", workers: int = 1) -> TableVerification:
    """Check every printed grid cell at k by quotient extraction, dense spectra, or both."""
    if method not in ("quotient", "spectrum", "both"):
        raise InvalidInputError(f"unknown method {method!r}")
    if method in ("quotient", "both") and k > MAX_QUOTIENT_K:
        raise ResourceLimitError(f"quotient verification supports k <= {MAX_QUOTIENT_K}, got k={k}")
    if method in ("spectrum", "both") and k > MAX_SPECTRUM_K:
        raise ResourceLimitError(f"spectrum verification supports k <= {MAX_SPECTRUM_K}, got k={k}")
    cells = []
    if method in ("quotient", "both"):
        cells += _verify_by_quotients(k, workers)
    if method in ("spectrum", "both"):
        cells += _verify_by_spectrum(k, workers)
    report = TableVerification(k, method, cells)
    logger.info("k=%d %s verification: %s", k, method, report.counts())
    return report


# ── Persistence ──


def _value_to_str(value) -> str:
    return repr(float(value)) if isinstance(value, float) else fraction_to_str(value)


def table_payload(table: CharacterTable) -> dict:
    return {
        "k": table.k,
        "modules": [m.to_json() for m in table.modules],
        "classes": [c.to_json() for c in table.classes],
        "multiplicities": {str(m): table.multiplicities[m] for m in table.modules},
        "entries": [
            {
                "module": mu.to_json(),
                "class": lam.to_json(),
                "value": _value_to_str(value),
                "provenance": table.provenance.get((mu, lam), "numeric"),
            }
            for (mu, lam), value in sorted(table.entries.items())
        ],
    }


def table_from_payload(payload: dict) -> CharacterTable:
    try:
        k = int(payload["k"])
        modules = [check_label(m, k) for m in payload["modules"]]
        classes = [check_label(c, k) for c in payload["classes"]]
        mults = {m: int(payload["multiplicities"][str(m)]) for m in modules}
        entries, provenance = {}, {}
        for e in payload["entries"]:
            key = (check_label(e["module"], k), check_label(e["class"], k))
            tag = e["provenance"]
            if tag not in PROVENANCES:
                raise TableParseError(f"unknown provenance {tag!r}")
            entries[key] = float(e["value"]) if tag == "numeric" else fraction_from_str(e["value"])
            provenance[key] = tag
    except (KeyError, TypeError, ValueError) as e:
        raise TableParseError(f"malformed table payload: {e}") from e
    return CharacterTable(k, modules, classes, entries, mults, provenance)


def save_table(path: Path, table: CharacterTable) -> None:
    write_table_file(Path(path), table_payload(table))


def load_table(path: Path) -> CharacterTable:
    return table_from_payload(read_table_file(Path(path)))


def table_path(cache_dir: Path, k: int) -> Path:
    return Path(cache_dir) / "chartable" / f"k{k}.json"


def cached_table(k: int, cache_dir: Path, workers: int = 1) -> CharacterTable:
    """Load the k table from the cache, or build it (dense for small k, quotients above) and save."""
    path = table_path(cache_dir, k)
    if path.exists():
        table = load_table(path)
        if table.k != k:
            raise TableParseError(f"{path} holds k={table.k}")
        logger.info("loaded k=%d table from %s", k, path)
        return table
    table = assemble_full_table(k, workers) if k <= MAX_ASSEMBLY_K else assemble_table_from_quotients(k, workers)
    save_table(path, table)
    return table
