"""
Analysis module for the Max3Sat suite.

Backbones, high-quality solution classes, overlap statistics, the
backbone-distance difficulty measure and Spearman correlation.
"""

from .backbone import (
    HIGH_QUALITY_THRESHOLD, DIFFICULTY_FRACTION,
    batch_fitness, enumerate_optima, backbone_exhaustive, backbone_from_set,
    backbone_from_solutions, overlap, back_dist, high_quality_bar,
    classify_high_quality, overlap_distribution, distribution_rows,
    c1c2_by_overlap, difficulty, spearman, difficulty_study, median_effort,
)

__all__ = [
    'HIGH_QUALITY_THRESHOLD', 'DIFFICULTY_FRACTION',
    'batch_fitness', 'enumerate_optima', 'backbone_exhaustive', 'backbone_from_set',
    'backbone_from_solutions', 'overlap', 'back_dist', 'high_quality_bar',
    'classify_high_quality', 'overlap_distribution', 'distribution_rows',
    'c1c2_by_overlap', 'difficulty', 'spearman', 'difficulty_study', 'median_effort',
]
