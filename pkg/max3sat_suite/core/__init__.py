"""
Core module for the Max3Sat suite.

Contains the data structures, instance I/O and generation, the variable
interaction graph and the multi-satisfiability table.
"""

from .data_structures import (
    Assignment, Literal, Clause, Max3SatInstance, SatProfile, GeneratorConfig,
    PerturbationMask, PxDecomposition, RunConfig, RunResult, HistoryEntry,
    Backbone, HighQualitySet, OverlapStats, BenchRow, DataStructureManager,
    assignment_to_string, assignment_from_string,
)
from .errors import (
    Max3SatError, InstanceError, DimacsParseError, AssignmentLengthError,
    GeneratorConfigError, VariableIndexError, IdenticalParentsError,
    PyramidLevelError, ExhaustiveLimitError, AnalysisInputError, RunConfigError,
)
from .instance import (
    make_rng, random_assignment, parse_dimacs, read_dimacs, write_dimacs, save_dimacs,
    generate, generate_uniform, generate_scale_free, clause_sat_count, evaluate, fitness,
)
from .vig import Vig, build_vig, neighbors, connected_components_restricted, write_edge_list
from .mmst import Mmst, EvaluationCounter, VariableCounters, f_cf

__all__ = [
    'Assignment', 'Literal', 'Clause', 'Max3SatInstance', 'SatProfile', 'GeneratorConfig',
    'PerturbationMask', 'PxDecomposition', 'RunConfig', 'RunResult', 'HistoryEntry',
    'Backbone', 'HighQualitySet', 'OverlapStats', 'BenchRow', 'DataStructureManager',
    'assignment_to_string', 'assignment_from_string',
    'Max3SatError', 'InstanceError', 'DimacsParseError', 'AssignmentLengthError',
    'GeneratorConfigError', 'VariableIndexError', 'IdenticalParentsError',
    'PyramidLevelError', 'ExhaustiveLimitError', 'AnalysisInputError', 'RunConfigError',
    'make_rng', 'random_assignment', 'parse_dimacs', 'read_dimacs', 'write_dimacs', 'save_dimacs',
    'generate', 'generate_uniform', 'generate_scale_free', 'clause_sat_count', 'evaluate', 'fitness',
    'Vig', 'build_vig', 'neighbors', 'connected_components_restricted', 'write_edge_list',
    'Mmst', 'EvaluationCounter', 'VariableCounters', 'f_cf',
]
