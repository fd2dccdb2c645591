"""Exact maximum cocliques of N_t(2k) by bitset branch and bound."""

import logging
from dataclasses import dataclass

import numpy as np

from .config import MAX_COCLIQUE_VERTICES
from .errors import ConsistencyError, ResourceLimitError
from .matchings import MatchingFamily, canonical_mask, partner_table
from .scheme import IntersectionGraph, is_coclique

logger = logging.getLogger(__name__)

DEFAULT_NODE_BUDGET = 5_000_000


class _BudgetExceeded(Exception):
    pass


@dataclass
class CocliqueResult:
    size: int
    witness: MatchingFamily
    optimal: bool
    nodes: int
    incumbent: int

    @property
    def partial(self) -> bool:
        return not self.optimal


def _bitsets(adjacency: np.ndarray) -> list[int]:
    packed = np.packbits(adjacency.astype(np.uint8), axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def _lowest(bits: int) -> int:
    return (bits & -bits).bit_length() - 1


def _members(bits: int) -> list[int]:
    out = []
    while bits:
        v = _lowest(bits)
        out.append(v)
        bits &= bits - 1
    return out


class _CliqueSearch:
    """Maximum clique in the complement graph; colour classes bound each branch."""

    def __init__(self, comp: list[int], budget: int) -> None:
        self.comp = comp
        self.budget = budget
        self.nodes = 0
        self.best: list[int] = []

    def _colour(self, candidates: int) -> tuple[list[int], list[int]]:
        order, bounds = [], []
        colour = 0
        uncoloured = candidates
        while uncoloured:
            colour += 1
            q = uncoloured
            while q:
                v = _lowest(q)
                q &= ~self.comp[v] & ~(1 << v)
                uncoloured &= ~(1 << v)
                order.append(v)
                bounds.append(colour)
        return order, bounds

    def expand(self, clique: list[int], candidates: int) -> None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise _BudgetExceeded
        order, bounds = self._colour(candidates)
        for v, bound in zip(reversed(order), reversed(bounds)):
            if len(clique) + bound <= len(self.best):
                return
            clique.append(v)
            rest = candidates & self.comp[v]
            if rest:
                self.expand(clique, rest)
            elif len(clique) > len(self.best):
                self.best = list(clique)
                logger.debug("new incumbent of size %d after %d nodes", len(self.best), self.nodes)
            clique.pop()
            candidates &= ~(1 << v)


def max_coclique_exact(graph: IntersectionGraph, budget: int = DEFAULT_NODE_BUDGET,
                       seed_canonical: bool = True, symmetric: bool = True,
                       workers: int = 1) -> CocliqueResult:
    """Largest coclique of N_t(2k) with a witness; partial when the node budget runs out.

    The graph is vertex-transitive, so with symmetric=True the search only
    looks at cocliques through matching 0.
    """
    n = graph.n_vertices
    if n > MAX_COCLIQUE_VERTICES:
        raise ResourceLimitError(f"exact search supports at most {MAX_COCLIQUE_VERTICES} vertices, got {n}")
    adjacency = graph.dense_adjacency(workers)
    full = (1 << n) - 1
    comp = [full & ~row & ~(1 << i) for i, row in enumerate(_bitsets(adjacency))]

    search = _CliqueSearch(comp, budget)
    incumbent = 0
    if seed_canonical:
        search.best = np.flatnonzero(canonical_mask(graph.k, graph.t)).tolist()
        incumbent = len(search.best)

    optimal = True
    try:
        if symmetric:
            search.expand([0], comp[0])
            if not search.best:
                search.best = [0]
        else:
            search.expand([], full)
    except _BudgetExceeded:
        optimal = False
        logger.warning("node budget %d exhausted; best coclique so far has %d vertices", budget, len(search.best))

    table = partner_table(graph.k)
    witness = MatchingFamily(graph.k, table[sorted(search.best)])
    if not is_coclique(witness, graph):
        raise ConsistencyError("search returned a family with an adjacent pair")
    logger.info(
        "alpha(N_%d(%d)) %s %d after %d nodes", graph.t, 2 * graph.k,
        "=" if optimal else ">=", len(witness), search.nodes,
    )
    return CocliqueResult(len(witness), witness, optimal, search.nodes, incumbent)
