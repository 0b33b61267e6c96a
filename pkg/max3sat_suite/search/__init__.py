"""
Search module for the Max3Sat suite.

Local search and perturbation operators, partition crossover and the
pyramid-based optimizer drivers.
"""

from .operators import (
    MASK_KEEP_FRACTION, DEFAULT_LONG_CONNECTION_STEPS,
    fihc, directed_fihc, clause_mask, vigbp_mask, randomize,
    ils_step, directed_ils_step, long_connection,
)
from .px import px_decompose, px_exchange, best_offspring_plan, px_best_offspring
from .pyramid import (
    Pyramid, PyramidOptimizer, DriverPolicy, POLICIES, RUNNERS,
    ipp_run, mocsm_run, mocsm_mixed_run, run,
)

__all__ = [
    'MASK_KEEP_FRACTION', 'DEFAULT_LONG_CONNECTION_STEPS',
    'fihc', 'directed_fihc', 'clause_mask', 'vigbp_mask', 'randomize',
    'ils_step', 'directed_ils_step', 'long_connection',
    'px_decompose', 'px_exchange', 'best_offspring_plan', 'px_best_offspring',
    'Pyramid', 'PyramidOptimizer', 'DriverPolicy', 'POLICIES', 'RUNNERS',
    'ipp_run', 'mocsm_run', 'mocsm_mixed_run', 'run',
]
