"""Printed closed forms: the 5x5 character-table grid, quotient diagonals and symbolic shapes."""

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidInputError
from .partitions import IntPartition
from .partitions import double_factorial as df
from .scheme import class_degree


@dataclass(frozen=True)
class SymbolicShape:
    """A partition [2k - offset, *tail] written in terms of k."""

    name: str
    offset: int
    tail: tuple[int, ...]

    def at(self, k: int) -> IntPartition | None:
        """The concrete partition at k, or None when the shape degenerates."""
        first = 2 * k - self.offset
        if first < 1 or (self.tail and first < self.tail[0]):
            return None
        return IntPartition((first,) + self.tail)


SHAPES = (
    SymbolicShape("[2k]", 0, ()),
    SymbolicShape("[2k-2,2]", 2, (2,)),
    SymbolicShape("[2k-4,4]", 4, (4,)),
    SymbolicShape("[2k-4,2,2]", 4, (2, 2)),
    SymbolicShape("[2k-6,6]", 6, (6,)),
)

_BY_NAME = {s.name: s for s in SHAPES}


def resolve_shape(text: str, k: int) -> IntPartition:
    """Parse "2k-4,2,2" (or plain "4,2,2") into a partition of 2k."""
    parts = []
    for token in text.strip().strip("[]").split(","):
        token = token.replace(" ", "")
        m = re.fullmatch(r"2k(?:-(\d+))?", token)
        if m:
            parts.append(2 * k - int(m.group(1) or 0))
        elif token.isdigit():
            parts.append(int(token))
        else:
            raise InvalidInputError(f"cannot read shape {text!r}")
    if any(p <= 0 for p in parts):
        raise InvalidInputError(f"{text!r} degenerates at k={k}")
    lam = IntPartition.from_parts(parts)
    if lam.n != 2 * k:
        raise InvalidInputError(f"{text!r} does not sum to {2 * k} at k={k}")
    return lam


# ── Character-table grid (rows: modules, columns: classes) ──


def _f(x) -> Fraction:
    return Fraction(x)


_GRID = {
    ("[2k]", "[2k]"): lambda k: _f(df(2 * k)) / (2 * k),
    ("[2k]", "[2k-2,2]"): lambda k: _f(df(2 * k)) / (2 * (2 * k - 2)),
    ("[2k]", "[2k-4,4]"): lambda k: _f(df(2 * k)) / (4 * (2 * k - 4)),
    ("[2k]", "[2k-4,2,2]"): lambda k: _f(df(2 * k)) / (8 * (2 * k - 4)),
    ("[2k]", "[2k-6,6]"): lambda k: _f(df(2 * k)) / (6 * (2 * k - 6)),

    ("[2k-2,2]", "[2k]"): lambda k: _f(-df(2 * k - 4)),
    ("[2k-2,2]", "[2k-2,2]"): lambda k: _f(df(2 * k - 4)) / 2,
    ("[2k-2,2]", "[2k-4,4]"): lambda k: _f(-2 * k * df(2 * k - 6)) / 4,
    ("[2k-2,2]", "[2k-4,2,2]"): lambda k: _f((3 * k - 2) * df(2 * k - 6)) / 4,
    ("[2k-2,2]", "[2k-6,6]"): lambda k: _f(-2 * k * df(2 * k - 4)) / (6 * (2 * k - 6)),

    ("[2k-4,4]", "[2k]"): lambda k: _f(-df(2 * k - 6)),
    ("[2k-4,4]", "[2k-2,2]"): lambda k: _f(-(5 * k - 12) * df(2 * k - 8)),
    ("[2k-4,4]", "[2k-4,4]"): lambda k: _f((7 * k - 15) * df(2 * k - 8)) / 2,
    ("[2k-4,4]", "[2k-4,2,2]"): lambda k: _f(-(k + 3) * df(2 * k - 8)) / 4,
    ("[2k-4,4]", "[2k-6,6]"): lambda k: _f(-2 * k * df(2 * k - 6)) / (6 * (2 * k - 6)),

    ("[2k-4,2,2]", "[2k]"): lambda k: _f(2 * df(2 * k - 6)),
    ("[2k-4,2,2]", "[2k-2,2]"): lambda k: _f(-df(2 * k - 6)),
    ("[2k-4,2,2]", "[2k-4,4]"): lambda k: _f(-df(2 * k - 6)) / 2,
    ("[2k-4,2,2]", "[2k-4,2,2]"): lambda k: _f((k * k - 7 * k + 12) * df(2 * k - 10)),
    ("[2k-4,2,2]", "[2k-6,6]"): lambda k: _f(4 * k * df(2 * k - 6)) / (6 * (2 * k - 6)),

    ("[2k-6,6]", "[2k]"): lambda k: _f(-3 * df(2 * k - 8)),
    ("[2k-6,6]", "[2k-2,2]"): lambda k: _f(-3 * (3 * k - 10) * df(2 * k - 10)),
    ("[2k-6,6]", "[2k-4,4]"): lambda k: _f(-3 * (9 * k * k - 71 * k + 140) * df(2 * k - 12)),
    ("[2k-6,6]", "[2k-4,2,2]"): lambda k: Fraction(-3, 2) * (13 * k * k - 101 * k + 190) * df(2 * k - 12),
    ("[2k-6,6]", "[2k-6,6]"): lambda k: _f(6 * (5 * k * k - 38 * k + 70) * df(2 * k - 12)),
}

# Smallest k at which a row / column formula is valid. A class column is only
# valid once its parts are distinct enough for the printed symmetry factor.
_MODULE_FLOOR = {"[2k]": 1, "[2k-2,2]": 2, "[2k-4,4]": 4, "[2k-4,2,2]": 4, "[2k-6,6]": 6}
_CLASS_FLOOR = {"[2k]": 1, "[2k-2,2]": 3, "[2k-4,4]": 5, "[2k-4,2,2]": 4, "[2k-6,6]": 7}
_CELL_FLOOR = {
    ("[2k-4,4]", "[2k-4,2,2]"): 5,
    ("[2k-4,2,2]", "[2k-4,2,2]"): 5,
    ("[2k-6,6]", "[2k-4,4]"): 6,
    ("[2k-6,6]", "[2k-4,2,2]"): 6,
    ("[2k-6,6]", "[2k-6,6]"): 6,
}


def validity_floor(module: str, klass: str) -> int:
    return max(
        _MODULE_FLOOR[module],
        _CLASS_FLOOR[klass],
        _CELL_FLOOR.get((module, klass), 1),
    )


@dataclass(frozen=True)
class ClosedFormCell:
    module: str
    klass: str
    k: int
    value: Fraction | None
    floor: int

    @property
    def in_range(self) -> bool:
        return self.value is not None


def _name_for(lam, k: int) -> str | None:
    if isinstance(lam, str):
        return lam if lam in _BY_NAME else None
    lam = lam if isinstance(lam, IntPartition) else IntPartition.from_parts(lam)
    for shape in SHAPES:
        if shape.at(k) == lam:
            return shape.name
    return None


def closed_form_entry(module, klass, k: int) -> Fraction | None:
    """The printed value of (module, class) at k; None means unknown or out of range.

    module and klass may be concrete partitions or symbolic names like "[2k-2,2]".
    """
    cell = closed_form_cell(module, klass, k)
    return cell.value if cell else None


def closed_form_cell(module, klass, k: int) -> ClosedFormCell | None:
    m, c = _name_for(module, k), _name_for(klass, k)
    if m is None or c is None:
        return None
    floor = validity_floor(m, c)
    value = _GRID[(m, c)](k) if k >= floor else None
    return ClosedFormCell(m, c, k, value, floor)


def closed_form_grid(k: int) -> list[ClosedFormCell]:
    return [closed_form_cell(m.name, c.name, k) for m in SHAPES for c in SHAPES]


# ── Degree row against the combinatorial count ──


@dataclass
class DegreeAuditRow:
    klass: str
    partition: IntPartition | None
    printed: Fraction | None
    computed: int | None
    status: str


def audit_degree_row(k: int) -> list[DegreeAuditRow]:
    """Compare the printed degree formulas with class_degree; out-of-range forms are flagged."""
    rows = []
    for shape in SHAPES:
        lam = shape.at(k)
        if lam is None:
            rows.append(DegreeAuditRow(shape.name, None, None, None, "not-applicable"))
            continue
        computed = class_degree(lam, k)
        printed = _GRID[("[2k]", shape.name)](k)
        if k < _CLASS_FLOOR[shape.name]:
            status = "out-of-range"
        else:
            status = "match" if printed == computed else "mismatch"
        rows.append(DegreeAuditRow(shape.name, lam, printed, computed, status))
    return rows


# ── Printed diagonals of X_[2k-4,2,2] quotients ──


@dataclass(frozen=True)
class DiagonalTable:
    name: str
    subgroup: SymbolicShape
    floor: int
    diagonal: tuple


DIAGONAL_TABLES = (
    DiagonalTable("[2k-4,2,2]/[2k-2,2]", _BY_NAME["[2k-2,2]"], 3, (
        lambda k: _f((k - 1) * df(2 * k - 6)),
        lambda k: Fraction(2 * k * k + k - 2, 4) * df(2 * k - 6),
    )),
    DiagonalTable("[2k-4,2,2]/[2k-4,4]", _BY_NAME["[2k-4,4]"], 4, (
        lambda k: _f(df(2 * k - 6)),
        lambda k: Fraction(9 * k - 20, 4) * df(2 * k - 6),
        lambda k: (k ** 3 - 7 * k * k + Fraction(75, 4) * k - Fraction(87, 4)) * df(2 * k - 8),
    )),
    DiagonalTable("[2k-4,2,2]/[2k-6,6]", _BY_NAME["[2k-6,6]"], 6, (
        lambda k: Fraction(0),
        lambda k: _f((20 * k - 78) * df(2 * k - 8)),
        lambda k: _f((18 * k ** 3 - 221 * k * k + 953 * k - 1455) * df(2 * k - 10)),
        lambda k: Fraction(
            (2 * k - 11) * (4 * k ** 4 - 60 * k ** 3 + 371 * k * k - 1155 * k + 1530), 2
        ) * df(2 * k - 12),
    )),
)
