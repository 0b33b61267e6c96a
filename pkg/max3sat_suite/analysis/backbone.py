"""
Backbone and Instance-Difficulty Analysis

Backbones from exhaustive enumeration or from a collected optima set,
backbone overlap of near-optimal solutions, the C1/C2 profile of those
solutions per overlap value, the backbone-distance difficulty measure and
the Spearman rank correlation used to relate difficulty to solver effort.
"""

import logging
import math
from collections import Counter, defaultdict
from dataclasses import replace
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from ..core.data_structures import (
    Assignment,
    Backbone,
    HighQualitySet,
    Max3SatInstance,
    OverlapStats,
)
from ..core.errors import AnalysisInputError, ExhaustiveLimitError
from ..core.instance import evaluate
from ..utils.settings import DEFAULT_EXHAUSTIVE_LIMIT

logger = logging.getLogger(__name__)

ENUMERATION_CHUNK = 1 << 14
HIGH_QUALITY_THRESHOLD = 0.995
DIFFICULTY_FRACTION = 0.10


def _ceil_fraction(fraction: float, total: int) -> int:
    # 0.995 * 640 must give 637, not 636.99999
    return math.ceil(round(fraction * total, 9))


def batch_fitness(instance: Max3SatInstance, xs: np.ndarray) -> np.ndarray:
    """Fitness of every row of a (k, n) bit matrix."""
    if instance.m == 0:
        return np.zeros(xs.shape[0], dtype=np.int64)
    literals = xs[:, instance.variables] != instance.negated
    return literals.any(axis=2).sum(axis=1)


def _check_limit(instance: Max3SatInstance, limit: int) -> None:
    if instance.n > limit:
        raise ExhaustiveLimitError(
            f"n={instance.n} exceeds the exhaustive limit {limit}; supply an optima set instead")


def _scan(instance: Max3SatInstance) -> Iterator[Tuple[np.ndarray, np.ndarray]]:
    """Yield (bits, scores) for consecutive chunks of the 2^n assignments, ascending index order."""
    n = instance.n
    shifts = np.arange(n, dtype=np.int64)
    total = 1 << n
    for start in range(0, total, ENUMERATION_CHUNK):
        index = np.arange(start, min(start + ENUMERATION_CHUNK, total), dtype=np.int64)
        bits = ((index[:, None] >> shifts) & 1).astype(np.uint8)
        yield bits, batch_fitness(instance, bits)


def enumerate_optima(instance: Max3SatInstance, limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
                     max_optima: Optional[int] = None) -> Tuple[int, List[Assignment]]:
    """
    Scan all 2^n assignments in chunks and collect every optimum.

    Only use this when the optima themselves are needed; backbone_exhaustive
    does not keep them.

    Args:
        instance: Instance to scan
        limit: Largest n accepted
        max_optima: Largest number of optima to hold at once (None: no cap)

    Returns:
        (optimum fitness, every assignment reaching it in ascending index order)

    Raises:
        ExhaustiveLimitError: n is above limit, or more than max_optima optima.
    """
    _check_limit(instance, limit)
    best = -1
    chunks: List[np.ndarray] = []
    held = 0
    for bits, scores in _scan(instance):
        chunk_best = int(scores.max())
        if chunk_best < best:
            continue
        if chunk_best > best:
            best, chunks, held = chunk_best, [], 0
        rows = bits[scores == best]
        held += len(rows)
        if max_optima is not None and held > max_optima:
            raise ExhaustiveLimitError(f"{instance!r} has more than {max_optima} optima")
        chunks.append(rows)

    optima = [row for rows in chunks for row in rows]
    logger.debug(f"Enumerated 2^{instance.n} assignments of {instance!r}: optimum {best}, {len(optima)} optima")
    return best, optima


def backbone_from_set(optima: Sequence[Assignment]) -> Backbone:
    """
    Variables with the same value in every given solution.

    Raises:
        AnalysisInputError: empty input or solutions of different lengths.
    """
    if len(optima) == 0:
        raise AnalysisInputError("cannot compute a backbone from an empty solution set")
    lengths = {len(x) for x in optima}
    if len(lengths) > 1:
        raise AnalysisInputError(f"solutions have different lengths: {sorted(lengths)}")
    matrix = np.asarray(optima, dtype=np.uint8)
    agree = np.all(matrix == matrix[0], axis=0)
    fixed = {int(v): int(matrix[0, v]) for v in np.flatnonzero(agree)}
    return Backbone(n=matrix.shape[1], fixed=fixed, optima_count=len(optima))


def backbone_exhaustive(instance: Max3SatInstance, limit: int = DEFAULT_EXHAUSTIVE_LIMIT) -> Backbone:
    """
    Backbone over every optimum of the instance, reduced chunk by chunk.

    Memory stays at one chunk plus an agreement mask however many optima
    there are.

    Args:
        instance: Instance to scan
        limit: Largest n accepted

    Returns:
        Backbone with optimum and optima_count set

    Raises:
        ExhaustiveLimitError: n is above limit.
    """
    _check_limit(instance, limit)
    n = instance.n
    best = -1
    reference = np.zeros(n, dtype=np.uint8)
    agree = np.ones(n, dtype=bool)
    count = 0
    for bits, scores in _scan(instance):
        chunk_best = int(scores.max())
        if chunk_best < best:
            continue
        rows = bits[scores == chunk_best]
        if chunk_best > best:
            # a better optimum invalidates everything seen so far
            best = chunk_best
            reference = rows[0].copy()
            agree = np.ones(n, dtype=bool)
            count = 0
        agree &= np.all(rows == reference, axis=0)
        count += len(rows)

    fixed = {int(v): int(reference[v]) for v in np.flatnonzero(agree)}
    backbone = Backbone(n=n, fixed=fixed, optimum=best, optima_count=count)
    logger.info(f"Exhaustive backbone of {instance.name or 'instance'}: optimum {best}, "
                f"size {backbone.size}, {count} optima")
    return backbone


def backbone_from_solutions(instance: Max3SatInstance, solutions: Sequence[Assignment]) -> Backbone:
    """Backbone of the best-fitness solutions of a collected set (e.g. a solver archive)."""
    if len(solutions) == 0:
        raise AnalysisInputError("no solutions given")
    checked = [instance.check_assignment(x) for x in solutions]
    scores = batch_fitness(instance, np.asarray(checked, dtype=np.uint8))
    optimum = int(scores.max())
    best = [x for x, score in zip(checked, scores) if score == optimum]
    return replace(backbone_from_set(best), optimum=optimum)


def overlap(x: Assignment, backbone: Backbone) -> int:
    """Number of backbone positions on which x agrees."""
    if len(x) != backbone.n:
        raise AnalysisInputError(f"assignment has length {len(x)}, backbone covers {backbone.n} variables")
    return sum(1 for v, bit in backbone.fixed.items() if int(x[v]) == bit)


def back_dist(x: Assignment, backbone: Backbone) -> int:
    """
    Backbone distance of an assignment.

    Args:
        x: Assignment over the backbone's n variables
        backbone: Backbone to compare against

    Returns:
        Number of backbone variables x sets to the opposite value
    """
    return backbone.size - overlap(x, backbone)


def high_quality_bar(m: int, threshold: float = HIGH_QUALITY_THRESHOLD, rounding: str = "ceil") -> int:
    """Minimum satisfied-clause count for class B."""
    if rounding == "ceil":
        return _ceil_fraction(threshold, m)
    if rounding == "floor":
        return math.floor(round(threshold * m, 9))
    raise AnalysisInputError(f"rounding must be 'ceil' or 'floor', got {rounding!r}")


def classify_high_quality(instance: Max3SatInstance, solutions: Sequence[Assignment],
                          threshold: float = HIGH_QUALITY_THRESHOLD,
                          rounding: str = "ceil") -> HighQualitySet:
    """
    Class A: exactly one unsatisfied clause. Class B: two or more unsatisfied
    clauses but still at or above the bar. Optima and anything below the bar
    are left out.
    """
    m = instance.m
    hq = HighQualitySet(m=m, bar=high_quality_bar(m, threshold, rounding))
    for x in solutions:
        f = evaluate(instance, x).fitness
        if f == m - 1:
            hq.class_a.append(instance.check_assignment(x))
        elif f <= m - 2 and f >= hq.bar:
            hq.class_b.append(instance.check_assignment(x))
    logger.debug(f"High-quality split for {instance!r}: A={len(hq.class_a)}, B={len(hq.class_b)}, bar={hq.bar}")
    return hq


def overlap_distribution(backbone: Backbone, hq: HighQualitySet) -> Dict[str, Dict[int, int]]:
    """Per class, count of solutions by overlap value."""
    return {
        name: dict(sorted(Counter(overlap(x, backbone) for x in members).items()))
        for name, members in hq.classes().items()
    }


def distribution_rows(distribution: Mapping[str, Mapping[int, int]]) -> List[Tuple[str, int, int]]:
    """(class, overlap, count) rows, classes and overlaps ascending."""
    return [
        (name, value, count)
        for name in sorted(distribution)
        for value, count in sorted(distribution[name].items())
    ]


def c1c2_by_overlap(instance: Max3SatInstance, backbone: Backbone,
                    hq: HighQualitySet) -> Dict[int, OverlapStats]:
    """min/mean/max of C1 and C2 over all high-quality solutions sharing an overlap value."""
    groups: Dict[int, List[Tuple[int, int]]] = defaultdict(list)
    for members in hq.classes().values():
        for x in members:
            profile = evaluate(instance, x)
            groups[overlap(x, backbone)].append((profile.c1, profile.c2))

    result = {}
    for value in sorted(groups):
        c1 = np.array([pair[0] for pair in groups[value]])
        c2 = np.array([pair[1] for pair in groups[value]])
        result[value] = OverlapStats(
            overlap=value,
            count=len(groups[value]),
            c1_min=int(c1.min()), c1_mean=float(c1.mean()), c1_max=int(c1.max()),
            c2_min=int(c2.min()), c2_mean=float(c2.mean()), c2_max=int(c2.max()),
        )
    return result


def difficulty(instance: Max3SatInstance, backbone: Backbone, solutions: Sequence[Assignment],
               fraction: float = DIFFICULTY_FRACTION) -> float:
    """
    Mean backbone distance of the best ceil(fraction * count) solutions.

    Solutions are ranked by fitness, best first; equal fitness keeps input order.

    Raises:
        AnalysisInputError: no solutions, or fraction outside (0, 1].
    """
    if len(solutions) == 0:
        raise AnalysisInputError("difficulty needs at least one solution")
    if not 0.0 < fraction <= 1.0:
        raise AnalysisInputError(f"fraction must be in (0, 1], got {fraction}")
    scores = [evaluate(instance, x).fitness for x in solutions]
    order = sorted(range(len(solutions)), key=lambda i: -scores[i])
    top = order[:_ceil_fraction(fraction, len(solutions))]
    return float(np.mean([back_dist(solutions[i], backbone) for i in top]))


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float:
    """
    Spearman rank correlation with average ranks on ties.

    Raises:
        AnalysisInputError: length mismatch, fewer than two points, or a
            constant column (correlation undefined).
    """
    if len(xs) != len(ys):
        raise AnalysisInputError(f"length mismatch: {len(xs)} vs {len(ys)}")
    if len(xs) < 2:
        raise AnalysisInputError("spearman needs at least two points")
    rho = stats.spearmanr(np.asarray(xs, dtype=float), np.asarray(ys, dtype=float))[0]
    if np.isnan(rho):
        raise AnalysisInputError("spearman is undefined for a constant column")
    return float(rho)


def difficulty_study(difficulties: Mapping[str, float], efforts: Mapping[str, float]) -> Tuple[float, int]:
    """
    Spearman between per-instance difficulty and solver effort, paired by
    instance id.

    Returns:
        (rho, number of paired instances)
    """
    shared = sorted(set(difficulties) & set(efforts))
    missing = set(difficulties) ^ set(efforts)
    if missing:
        logger.warning(f"Ignoring {len(missing)} instance ids present in only one column")
    rho = spearman([difficulties[k] for k in shared], [efforts[k] for k in shared])
    return rho, len(shared)


def median_effort(flip_updates: Sequence[int]) -> Optional[float]:
    """Median flips among successful runs; None when there were none."""
    if len(flip_updates) == 0:
        return None
    return float(np.median(flip_updates))
