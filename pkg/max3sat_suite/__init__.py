"""
Max3Sat Suite

Gray-box optimization for Max3Sat: the clause-satisfiability-directed
optimizer (MOCSM), its undirected pyramid baseline (IPP) and the mixed
variant, built on an incremental multi-satisfiability table, partition
crossover over the variable interaction graph, and a backbone-based
instance-difficulty analysis.
"""

from typing import Optional

from dotenv import load_dotenv

load_dotenv()

from .core.data_structures import Max3SatInstance, RunConfig, RunResult
from .core.instance import generate, parse_dimacs, read_dimacs, evaluate
from .core.vig import build_vig
from .core.mmst import Mmst
from .search.pyramid import ipp_run, mocsm_run, mocsm_mixed_run, run
from .analysis.backbone import backbone_exhaustive, difficulty, spearman

__version__ = "0.1.0"


def solve(instance: Max3SatInstance, algorithm: str = "mocsm", seed: int = 0,
          flip_limit: Optional[int] = None, time_limit_ms: Optional[float] = None,
          target: Optional[int] = None) -> RunResult:
    """
    Convenience wrapper around run().

    Args:
        instance: Parsed or generated instance
        algorithm: ipp, mocsm or mocsm-mixed
        seed: Run seed
        flip_limit: Stop after this many flip updates
        time_limit_ms: Stop after this much wall-clock time
        target: Target fitness (default m)

    Returns:
        RunResult of the run
    """
    if flip_limit is None and time_limit_ms is None and target is None:
        flip_limit = 100 * instance.n * max(instance.m, 1)
    config = RunConfig(algorithm=algorithm, seed=seed, flip_limit=flip_limit,
                       time_limit_ms=time_limit_ms, target=target)
    return run(instance, config)


__all__ = [
    'Max3SatInstance', 'RunConfig', 'RunResult',
    'generate', 'parse_dimacs', 'read_dimacs', 'evaluate', 'build_vig', 'Mmst',
    'ipp_run', 'mocsm_run', 'mocsm_mixed_run', 'run', 'solve',
    'backbone_exhaustive', 'difficulty', 'spearman', '__version__',
]
