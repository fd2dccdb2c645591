"""Integer partitions: even partitions, dominance, conjugates, hook lengths and dimension bounds."""

import math
import re
from dataclasses import dataclass
from functools import lru_cache

from .errors import InvalidInputError


@dataclass(frozen=True, order=True)
class IntPartition:
    """A partition kept in canonical non-increasing form.

    Ordering compares the part tuples lexicographically, so sorting with
    ``reverse=True`` yields the reverse-lexicographic order used everywhere
    output has to be deterministic.
    """

    parts: tuple[int, ...]

    def __post_init__(self) -> None:
        parts = tuple(self.parts)
        object.__setattr__(self, "parts", parts)
        if any(not isinstance(p, int) or p < 1 for p in parts):
            raise InvalidInputError(f"parts must be positive integers: {list(parts)}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise InvalidInputError(f"parts must be non-increasing: {list(parts)}")

    @classmethod
    def from_parts(cls, parts) -> "IntPartition":
        """Build from any iterable of non-negative ints, sorting and dropping zeros."""
        values = [int(p) for p in parts]
        if any(p < 0 for p in values):
            raise InvalidInputError(f"negative part in {values}")
        return cls(tuple(sorted((p for p in values if p), reverse=True)))

    @classmethod
    def parse(cls, text: str) -> "IntPartition":
        """Parse ``"4,2,2"`` or ``"[4, 2, 2]"``."""
        cleaned = text.strip().strip("[]()")
        if not cleaned or not re.fullmatch(r"\s*\d+(\s*,\s*\d+)*\s*", cleaned):
            raise InvalidInputError(f"cannot parse partition {text!r}")
        return cls.from_parts(int(p) for p in cleaned.split(","))

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def is_even(self) -> bool:
        return all(p % 2 == 0 for p in self.parts)

    def multiplicities(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for p in self.parts:
            counts[p] = counts.get(p, 0) + 1
        return counts

    def to_json(self) -> list[int]:
        return list(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, i: int) -> int:
        return self.parts[i]

    def __str__(self) -> str:
        return "[" + ",".join(str(p) for p in self.parts) + "]"


# Even partitions double as scheme class labels and module labels.
EvenPartition = IntPartition


def even_partition(parts) -> IntPartition:
    """Build a partition and insist every part is even."""
    lam = parts if isinstance(parts, IntPartition) else IntPartition.from_parts(parts)
    if not lam.is_even:
        raise InvalidInputError(f"{lam} is not an even partition")
    return lam


def double_factorial(n: int) -> int:
    """n(n-2)(n-4)...; both (-1)!! and 0!! are 1."""
    if n < -1:
        raise InvalidInputError(f"double factorial undefined for {n}")
    return math.prod(range(n, 0, -2))


@lru_cache(maxsize=None)
def _partitions(n: int, largest: int) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    out: list[tuple[int, ...]] = []
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def partitions(n: int) -> list[IntPartition]:
    """All partitions of n in reverse-lexicographic order."""
    if n < 0:
        raise InvalidInputError(f"cannot partition {n}")
    return [IntPartition(p) for p in _partitions(n, n)]


def even_partitions(two_k: int) -> list[IntPartition]:
    """Even partitions of 2k, reverse-lexicographic, via doubling partitions of k."""
    if two_k < 2 or two_k % 2:
        raise InvalidInputError(f"expected a positive even integer, got {two_k}")
    return [IntPartition(tuple(2 * p for p in parts)) for parts in _partitions(two_k // 2, two_k // 2)]


def _prefix_sums(parts, length: int) -> list[int]:
    out, total = [], 0
    for i in range(length):
        total += parts[i] if i < len(parts) else 0
        out.append(total)
    return out


def dominance_geq(mu: IntPartition, lam: IntPartition) -> bool:
    """True iff every prefix sum of mu is at least the matching prefix sum of lam."""
    if mu.n != lam.n:
        raise InvalidInputError(f"{mu} and {lam} partition different integers")
    length = max(len(mu), len(lam))
    return all(a >= b for a, b in zip(_prefix_sums(mu.parts, length), _prefix_sums(lam.parts, length)))


def conjugate(lam: IntPartition) -> IntPartition:
    """Column lengths of the Young diagram."""
    if not lam.parts:
        return lam
    return IntPartition(tuple(sum(1 for p in lam.parts if p > i) for i in range(lam.parts[0])))


def is_primary(lam: IntPartition) -> bool:
    return dominance_geq(lam, conjugate(lam))


def has_subpartition_sum(lam: IntPartition, s: int) -> bool:
    """Subset-sum over the parts of lam."""
    if s < 0 or s > lam.n:
        return False
    reachable = 1
    for p in lam.parts:
        reachable |= reachable << p
    return bool((reachable >> s) & 1)


def hook_lengths(lam: IntPartition) -> list[int]:
    cols = conjugate(lam).parts
    return [
        row - j + cols[j] - i - 1
        for i, row in enumerate(lam.parts)
        for j in range(row)
    ]


@lru_cache(maxsize=4096)
def hook_dimension(lam: IntPartition) -> int:
    """Dimension of the Specht module of lam (hook-length formula)."""
    return math.factorial(lam.n) // math.prod(hook_lengths(lam))


def two_row_multiplicity(two_k: int, ell: int) -> int:
    """C(2k, l) - C(2k, l-1), the dimension of the [2k-l, l] module."""
    if ell < 0 or 2 * ell > two_k:
        raise InvalidInputError(f"need 0 <= l <= {two_k // 2}, got {ell}")
    below = math.comb(two_k, ell - 1) if ell >= 1 else 0
    return math.comb(two_k, ell) - below


def F_bound(n: int) -> int:
    """The recursive module-dimension lower bound, implemented as printed.

    F(0) = 2, F(n) = 2 F(n-1) for even n, and F(n) = n F(n-1) (m+2) for
    odd n = 2m+1.
    """
    if n < 0:
        raise InvalidInputError(f"F is defined for n >= 0, got {n}")
    value = 2
    for i in range(1, n + 1):
        if i % 2:
            value = i * value * ((i - 1) // 2 + 2)
        else:
            value = 2 * value
    return value


@dataclass(frozen=True)
class GrowthCheck:
    n: int
    previous: int
    value: int
    lower_ok: bool
    upper_ok: bool

    @property
    def ok(self) -> bool:
        return self.lower_ok and self.upper_ok


def audit_f_growth(n_max: int, n_min: int = 8) -> list[GrowthCheck]:
    """Check 3/2 F(n-1) <= F(n) <= 2 F(n-1) for n_min <= n <= n_max."""
    rows = []
    for n in range(max(n_min, 1), n_max + 1):
        prev, cur = F_bound(n - 1), F_bound(n)
        rows.append(GrowthCheck(n, prev, cur, 2 * cur >= 3 * prev, cur <= 2 * prev))
    return rows


def two_row_bound_holds(lam: IntPartition) -> bool:
    """For lam_1 >= n/2, the two-row module [lam_1, n - lam_1] is no larger than lam."""
    first = lam.parts[0]
    if 2 * first < lam.n:
        raise InvalidInputError(f"{lam} has first part below n/2")
    two_row = IntPartition.from_parts((first, lam.n - first))
    return hook_dimension(two_row) <= hook_dimension(lam)


def audit_two_row_bound(n: int) -> list[IntPartition]:
    """Partitions of n with lam_1 >= n/2 that violate the two-row bound (expected empty)."""
    return [
        lam for lam in partitions(n)
        if 2 * lam.parts[0] >= n and not two_row_bound_holds(lam)
    ]
