"""
Partition Crossover

Differing variables are split into connected components of the VIG
restricted to them. Every clause touches at most one component, so each
component can be inherited from either parent independently and the summed
parental fitness is conserved by any exchange.
"""

import logging
from typing import Iterable, List, Tuple

import numpy as np

from ..core.data_structures import Assignment, Max3SatInstance, PxDecomposition
from ..core.errors import AssignmentLengthError, IdenticalParentsError
from ..core.instance import clause_sat_counts
from ..core.vig import Vig

logger = logging.getLogger(__name__)


def px_decompose(instance: Max3SatInstance, vig: Vig, a: Assignment, b: Assignment) -> PxDecomposition:
    """
    Raises:
        IdenticalParentsError: a and b are equal, so there is nothing to mix.
    """
    a = instance.check_assignment(a)
    b = instance.check_assignment(b)
    differing = np.flatnonzero(a != b)
    if differing.size == 0:
        raise IdenticalParentsError("parents are identical")

    components = vig.connected_components_restricted(differing.tolist())
    component_clauses, partial_a, partial_b = [], [], []
    for component in components:
        clause_ids = sorted({c for v in component for c in instance.membership[v]})
        component_clauses.append(tuple(clause_ids))
        partial_a.append(int(np.count_nonzero(clause_sat_counts(instance, a, clause_ids))))
        partial_b.append(int(np.count_nonzero(clause_sat_counts(instance, b, clause_ids))))

    return PxDecomposition(
        shared=tuple(np.flatnonzero(a == b).tolist()),
        components=tuple(tuple(c) for c in components),
        component_clauses=tuple(component_clauses),
        partial_a=tuple(partial_a),
        partial_b=tuple(partial_b),
    )


def px_exchange(a: Assignment, b: Assignment, mask: Iterable[int]) -> Tuple[Assignment, Assignment]:
    """Swap the masked genes: a' takes them from b and b' from a."""
    a = np.asarray(a, dtype=np.uint8)
    b = np.asarray(b, dtype=np.uint8)
    if a.shape != b.shape:
        raise AssignmentLengthError(f"parents differ in length: {a.shape[0]} vs {b.shape[0]}")
    index = np.fromiter((int(v) for v in mask), dtype=np.int64)
    child_a, child_b = a.copy(), b.copy()
    child_a[index] = b[index]
    child_b[index] = a[index]
    return child_a, child_b


def best_offspring_plan(decomposition: PxDecomposition) -> Tuple[List[Tuple[int, ...]], int]:
    """
    Components the best offspring takes from parent b (ties stay with a) and
    the resulting fitness gain over parent a.
    """
    from_b, gain = [], 0
    for component, fa, fb in zip(decomposition.components, decomposition.partial_a, decomposition.partial_b):
        if fb > fa:
            from_b.append(component)
            gain += fb - fa
    return from_b, gain


def px_best_offspring(instance: Max3SatInstance, vig: Vig, a: Assignment, b: Assignment) -> Assignment:
    """Per component, genes of the parent with the higher partial fitness."""
    decomposition = px_decompose(instance, vig, a, b)
    from_b, _ = best_offspring_plan(decomposition)
    child, _ = px_exchange(a, b, [v for component in from_b for v in component])
    return child
