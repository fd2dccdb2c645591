"""Perfect matchings of K_2k: enumeration, union shapes, set-wise t-intersection."""

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .config import MAX_ENUMERATION_K
from .errors import ConsistencyError, InvalidInputError, ResourceLimitError
from .partitions import IntPartition, double_factorial, has_subpartition_sum

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PerfectMatching:
    """k disjoint pairs covering {1..2k}; canonical (a < b, pairs ascending by a)."""

    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        edges = tuple(tuple(int(v) for v in e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        if any(len(e) != 2 for e in edges):
            raise InvalidInputError(f"edges must be pairs: {edges}")
        if any(a >= b for a, b in edges) or list(edges) != sorted(edges):
            raise InvalidInputError(f"matching is not in canonical form: {edges}")
        covered = sorted(v for e in edges for v in e)
        if covered != list(range(1, 2 * len(edges) + 1)):
            raise InvalidInputError(
                f"edges must cover 1..{2 * len(edges)} exactly once: {edges}"
            )

    @classmethod
    def from_edges(cls, edges) -> "PerfectMatching":
        return cls(tuple(sorted(tuple(sorted((int(a), int(b)))) for a, b in edges)))

    @classmethod
    def from_partners(cls, partners) -> "PerfectMatching":
        """From a 0-based partner list (partners[v] is the mate of v)."""
        edges = [(v + 1, int(w) + 1) for v, w in enumerate(partners) if v < int(w)]
        if 2 * len(edges) != len(partners):
            raise InvalidInputError(f"not an involution without fixed points: {list(partners)}")
        return cls.from_edges(edges)

    @property
    def k(self) -> int:
        return len(self.edges)

    def partners(self) -> tuple[int, ...]:
        out = [0] * (2 * self.k)
        for a, b in self.edges:
            out[a - 1], out[b - 1] = b - 1, a - 1
        return tuple(out)

    def to_json(self) -> list[list[int]]:
        return [list(e) for e in self.edges]

    def __str__(self) -> str:
        return "{" + ",".join(f"{a}-{b}" for a, b in self.edges) + "}"


class MatchingFamily:
    """A deduplicated list of matchings on the same 2k vertices.

    Backed by an (N, 2k) array of 0-based partners; row i is member i.
    """

    def __init__(self, k: int, partners: np.ndarray) -> None:
        partners = np.asarray(partners, dtype=np.int8).reshape(-1, 2 * k)
        self.k = k
        self.partners = partners
        self._members: list[PerfectMatching] | None = None
        self._index: dict[PerfectMatching, int] | None = None

    @classmethod
    def from_members(cls, k: int, members) -> "MatchingFamily":
        seen: dict[PerfectMatching, None] = {}
        for m in members:
            if m.k != k:
                raise InvalidInputError(f"{m} is not a matching on {2 * k} vertices")
            seen.setdefault(m, None)
        rows = [m.partners() for m in seen] or np.zeros((0, 2 * k), dtype=np.int8)
        return cls(k, np.array(rows, dtype=np.int8))

    @property
    def members(self) -> list[PerfectMatching]:
        if self._members is None:
            self._members = [PerfectMatching.from_partners(row) for row in self.partners.tolist()]
        return self._members

    def index_of(self, matching: PerfectMatching) -> int:
        if self._index is None:
            self._index = {m: i for i, m in enumerate(self.members)}
        return self._index[matching]

    def __len__(self) -> int:
        return len(self.partners)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i: int) -> PerfectMatching:
        return self.members[i]

    def to_json(self) -> dict:
        return {"k": self.k, "members": [m.to_json() for m in self.members]}

    @classmethod
    def from_json(cls, data: dict) -> "MatchingFamily":
        try:
            k = int(data["k"])
            members = [PerfectMatching.from_edges(e) for e in data["members"]]
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidInputError(f"malformed family: {e}") from e
        return cls.from_members(k, members)


def check_enumerable(k: int) -> None:
    if k < 1 or k > MAX_ENUMERATION_K:
        raise ResourceLimitError(
            f"full enumeration supports 1 <= k <= {MAX_ENUMERATION_K}, got k={k}"
        )


def check_t(k: int, t: int) -> None:
    if t < 1 or t > k // 2:
        raise InvalidInputError(f"need 1 <= t <= floor(k/2) = {k // 2}, got t={t}")


@lru_cache(maxsize=None)
def partner_table(k: int) -> np.ndarray:
    """Partner rows of every matching in enumeration order (read-only).

    Vertex 0 is paired with j = 1, 2, ... in turn and the remaining vertices
    are matched recursively in the same order.
    """
    if k == 0:
        table = np.zeros((1, 0), dtype=np.int8)
    else:
        sub = partner_table(k - 1)
        n = 2 * k
        blocks = []
        for j in range(1, n):
            remaining = np.array([v for v in range(1, n) if v != j], dtype=np.int8)
            block = np.empty((len(sub), n), dtype=np.int8)
            block[:, 0] = j
            block[:, j] = 0
            block[:, remaining] = remaining[sub]
            blocks.append(block)
        table = np.concatenate(blocks)
    table.setflags(write=False)
    return table


def enumerate_matchings(k: int) -> MatchingFamily:
    """All (2k-1)!! perfect matchings of K_2k in canonical enumeration order."""
    check_enumerable(k)
    table = partner_table(k)
    logger.info("enumerated %d matchings for k=%d", len(table), k)
    return MatchingFamily(k, table)


def union_shape(P: PerfectMatching, Q: PerfectMatching) -> IntPartition:
    """Cycle lengths of the multigraph P + Q (shared edges are 2-cycles)."""
    if P.k != Q.k:
        raise InvalidInputError(f"{P} and {Q} live on different vertex sets")
    p, q = P.partners(), Q.partners()
    seen = [False] * len(p)
    parts = []
    for start in range(len(p)):
        if seen[start]:
            continue
        length, v = 0, start
        while True:
            w = q[v]
            seen[v] = seen[w] = True
            length += 2
            v = p[w]
            if v == start:
                break
        parts.append(length)
    return IntPartition.from_parts(parts)


def edge_intersection(P: PerfectMatching, Q: PerfectMatching) -> set[tuple[int, int]]:
    return set(P.edges) & set(Q.edges)


def setwise_t_intersecting_by_shape(P: PerfectMatching, Q: PerfectMatching, t: int) -> bool:
    check_t(P.k, t)
    return has_subpartition_sum(union_shape(P, Q), 2 * t)


def setwise_t_intersecting_oracle(P: PerfectMatching, Q: PerfectMatching, t: int) -> bool:
    """Brute force over all pairs of t-edge subsets of P and Q."""
    check_t(P.k, t)
    if P.k != Q.k:
        raise InvalidInputError(f"{P} and {Q} live on different vertex sets")

    def covers(m: PerfectMatching) -> set[frozenset[int]]:
        return {
            frozenset(v for e in subset for v in e)
            for subset in itertools.combinations(m.edges, t)
        }

    return not covers(P).isdisjoint(covers(Q))


def canonical_family(k: int, t: int) -> MatchingFamily:
    """Matchings covering vertices 1..2t with exactly t edges."""
    check_t(k, t)
    check_enumerable(k)
    table = partner_table(k)
    mask = (table[:, : 2 * t] < 2 * t).all(axis=1)
    family = MatchingFamily(k, table[mask])
    expected = double_factorial(2 * t - 1) * double_factorial(2 * k - 2 * t - 1)
    if len(family) != expected:
        raise ConsistencyError(f"canonical family has {len(family)} members, expected {expected}")
    return family


def canonical_mask(k: int, t: int) -> np.ndarray:
    """Boolean mask over enumeration order selecting the canonical family."""
    check_t(k, t)
    return (partner_table(k)[:, : 2 * t] < 2 * t).all(axis=1)


def random_matching(k: int, rng: np.random.Generator) -> PerfectMatching:
    """A uniformly random perfect matching of K_2k."""
    order = rng.permutation(2 * k) + 1
    return PerfectMatching.from_edges(zip(order[0::2], order[1::2]))
