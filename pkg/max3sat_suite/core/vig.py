"""
Variable Interaction Graph

Variables are adjacent iff they co-occur in at least one clause. The graph is
held in a networkx Graph; sorted neighbour tuples are cached because the
perturbation operators query them constantly.
"""

import itertools
import logging
from typing import Iterable, List, Tuple

import networkx as nx

from .data_structures import Max3SatInstance
from .errors import VariableIndexError

logger = logging.getLogger(__name__)


class Vig:
    """Immutable, symmetric, irreflexive variable dependency graph."""

    def __init__(self, n: int, graph: nx.Graph):
        self.n = n
        self.graph = nx.freeze(graph)
        self._neighbors: Tuple[Tuple[int, ...], ...] = tuple(
            tuple(sorted(graph.neighbors(v))) for v in range(n)
        )

    def _check(self, v: int) -> int:
        if not 0 <= v < self.n:
            raise VariableIndexError(f"variable {v} outside [0, {self.n})")
        return int(v)

    def neighbors(self, v: int) -> List[int]:
        return list(self._neighbors[self._check(v)])

    def degree(self, v: int) -> int:
        return len(self._neighbors[self._check(v)])

    def has_edge(self, u: int, v: int) -> bool:
        return self.graph.has_edge(self._check(u), self._check(v))

    def edges(self) -> List[Tuple[int, int]]:
        return sorted((min(u, v), max(u, v)) for u, v in self.graph.edges())

    def connected_components_restricted(self, active: Iterable[int]) -> List[List[int]]:
        """
        Components of the subgraph induced on `active`.

        Each component is sorted and the list is ordered by smallest element.
        """
        active = {self._check(int(v)) for v in active}
        if not active:
            return []
        components = [sorted(c) for c in nx.connected_components(self.graph.subgraph(active))]
        components.sort(key=lambda component: component[0])
        return components


def build_vig(instance: Max3SatInstance) -> Vig:
    """
    Build the variable interaction graph of an instance.

    Args:
        instance: Instance whose clauses define the edges

    Returns:
        Vig with one node per variable and an edge between every pair of
        variables sharing a clause
    """
    graph = nx.Graph()
    graph.add_nodes_from(range(instance.n))
    for clause in instance.clauses:
        graph.add_edges_from(itertools.combinations(clause.variables, 2))
    logger.debug(f"Built VIG for {instance!r}: {graph.number_of_edges()} edges")
    return Vig(instance.n, graph)


def neighbors(vig: Vig, v: int) -> List[int]:
    return vig.neighbors(v)


def connected_components_restricted(vig: Vig, active: Iterable[int]) -> List[List[int]]:
    """Components of the subgraph induced by active, each sorted, ordered by smallest member."""
    return vig.connected_components_restricted(active)


def write_edge_list(vig: Vig) -> str:
    """One 'u v' line per edge, 1-based, u < v, ascending."""
    return "".join(f"{u + 1} {v + 1}\n" for u, v in vig.edges())
