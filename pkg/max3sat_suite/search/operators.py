"""
Local Search and Perturbation Operators

First-improvement and f_cf-directed hill climbers, the clause-based and
VIG-based perturbation masks, the two ILS steps and the LongConnection drift.
Every operator mutates the Mmst it is given in place and draws randomness
only from the run's generator.
"""

import logging
import math
from typing import List, Optional, Sequence

import numpy as np

from ..core.data_structures import Max3SatInstance, PerturbationMask
from ..core.mmst import Mmst
from ..core.vig import Vig

logger = logging.getLogger(__name__)

MASK_KEEP_FRACTION = 0.25
DEFAULT_LONG_CONNECTION_STEPS = 25


def _pick(candidates: Sequence[int], rng: np.random.Generator) -> int:
    """Uniform choice; a single candidate consumes no randomness."""
    if len(candidates) == 1:
        return candidates[0]
    return candidates[int(rng.integers(len(candidates)))]


def fihc(mmst: Mmst, rng: np.random.Generator) -> Mmst:
    """
    First Improvement Hill Climber.

    Sweeps the variables in a fresh random order, flipping every variable
    whose flip improves fitness, until a whole sweep flips nothing.
    """
    improved = True
    while improved:
        improved = False
        for v in rng.permutation(mmst.n).tolist():
            if mmst.fitness_delta(v) > 0:
                mmst.flip(v)
                improved = True
    return mmst


def directed_fihc(mmst: Mmst, rng: np.random.Generator) -> Mmst:
    """
    Hill climber that, among the strictly improving flips, always takes one
    with the highest f_cf (ties broken uniformly at random).
    """
    while True:
        improving = mmst.improving_flips()
        if not improving:
            return mmst
        scores = [(mmst.fcf_delta(v), v) for v, _ in improving]
        best = max(score for score, _ in scores)
        mmst.flip(_pick([v for score, v in scores if score == best], rng))


def clause_mask(instance: Max3SatInstance, seed_clause: int, rng: np.random.Generator,
                keep_fraction: float = MASK_KEEP_FRACTION) -> PerturbationMask:
    """
    Variables of the seed clause and of every clause sharing a variable with
    it, reduced to a random ceil(keep_fraction * size) subset.
    """
    union = set()
    for v in instance.clauses[seed_clause].variables:
        for clause_id in instance.membership[v]:
            union.update(instance.clauses[clause_id].variables)
    union = sorted(union)
    keep = max(1, math.ceil(keep_fraction * len(union)))
    chosen = rng.choice(union, size=keep, replace=False)
    return PerturbationMask(tuple(sorted(int(v) for v in chosen)), seed_clause=seed_clause)


def vigbp_mask(vig: Vig, max_size: int, rng: np.random.Generator,
               root: Optional[int] = None) -> PerturbationMask:
    """
    A random gene grouped with its VIG neighbours; random neighbours are
    dropped until at most max_size genes remain. The root is never dropped.
    """
    if max_size < 1:
        raise ValueError(f"max_size must be >= 1, got {max_size}")
    if root is None:
        root = int(rng.integers(vig.n))
    others = vig.neighbors(root)
    if len(others) + 1 > max_size:
        others = rng.choice(others, size=max_size - 1, replace=False).tolist() if max_size > 1 else []
    return PerturbationMask(tuple(sorted([root] + [int(v) for v in others])), root=root)


def randomize(mmst: Mmst, mask: PerturbationMask, rng: np.random.Generator) -> None:
    """Set every masked variable to a uniformly random bit."""
    values = rng.integers(0, 2, size=len(mask)).tolist()
    for v, value in zip(mask, values):
        if mmst.bit(v) != value:
            mmst.flip(v)


def ils_step(mmst: Mmst, rng: np.random.Generator, mask: str = "clause",
             vig: Optional[Vig] = None, max_mask_size: int = 4) -> bool:
    """
    One dependency-aware ILS step: perturb a mask around a uniformly chosen
    clause (or a VIGbp mask), run FIHC, and revert if fitness dropped.

    Returns True if the result was kept (ties are kept).
    """
    instance = mmst.instance
    if instance.m == 0:
        return True
    saved = mmst.assignment
    fitness_before = mmst.fitness

    if mask == "vig":
        if vig is None:
            raise ValueError("a VIG is required for the 'vig' perturbation")
        perturbation = vigbp_mask(vig, max_mask_size, rng)
    else:
        perturbation = clause_mask(instance, int(rng.integers(instance.m)), rng)

    randomize(mmst, perturbation, rng)
    fihc(mmst, rng)

    if mmst.fitness < fitness_before:
        mmst.move_to(saved)
        return False
    return True


def directed_ils_step(mmst: Mmst, rng: np.random.Generator) -> bool:
    """
    ILS step seeded by a uniformly chosen unsatisfied clause and optimised
    by directed_fihc. A no-op when every clause is satisfied.

    Returns True if the result was kept (reverts only on strict decrease).
    """
    unsatisfied = mmst.unsatisfied_clauses()
    if not unsatisfied:
        return True
    saved = mmst.assignment
    fitness_before = mmst.fitness

    seed_clause = _pick(unsatisfied, rng)
    randomize(mmst, clause_mask(mmst.instance, seed_clause, rng), rng)
    directed_fihc(mmst, rng)

    if mmst.fitness < fitness_before:
        mmst.move_to(saved)
        return False
    return True


def long_connection(mmst: Mmst, steps_limit: int = DEFAULT_LONG_CONNECTION_STEPS,
                    rng: Optional[np.random.Generator] = None) -> int:
    """
    Drift toward the optimal region by repeatedly taking the single flip with
    the highest f_cf, ignoring fitness, while that maximum is not negative.

    Returns the number of flips performed (at most steps_limit).
    """
    if steps_limit < 0:
        raise ValueError(f"steps_limit must be >= 0, got {steps_limit}")
    steps = 0
    while steps < steps_limit:
        scores: List[int] = [mmst.fcf_delta(v) for v in range(mmst.n)]
        best = max(scores)
        if best < 0:
            break
        candidates = [v for v, score in enumerate(scores) if score == best]
        if len(candidates) > 1 and rng is None:
            raise ValueError("a random generator is required to break ties")
        mmst.flip(_pick(candidates, rng))
        steps += 1
    return steps
