"""
Core Data Structures

This module defines the basic data structures used throughout the Max3Sat suite:
instances and their clauses, satisfaction profiles, generator and run
configuration, run results and the analysis records.
"""

import json
import logging
import math
from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import Dict, List, Any, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import (
    AnalysisInputError,
    AssignmentLengthError,
    GeneratorConfigError,
    InstanceError,
    RunConfigError,
)

logger = logging.getLogger(__name__)

# One bit per variable, dtype uint8, variable 0 first.
Assignment = np.ndarray

GENERATOR_KINDS = ("uniform", "scale-free")
ALGORITHMS = ("ipp", "mocsm", "mocsm-mixed")
PERTURBATIONS = ("clause", "vig")


@dataclass(frozen=True)
class Literal:
    """A possibly negated occurrence of a variable (0-based index)."""
    variable: int
    negated: bool = False

    def is_true(self, x: Assignment) -> bool:
        return bool(x[self.variable]) != self.negated

    def to_dimacs(self) -> int:
        value = self.variable + 1
        return -value if self.negated else value

    @classmethod
    def from_dimacs(cls, value: int) -> "Literal":
        if value == 0:
            raise InstanceError("0 is not a literal")
        return cls(variable=abs(value) - 1, negated=value < 0)


@dataclass(frozen=True)
class Clause:
    """A disjunction of exactly three literals over distinct variables."""
    literals: Tuple[Literal, Literal, Literal]

    def __post_init__(self):
        literals = tuple(self.literals)
        object.__setattr__(self, "literals", literals)
        if len(literals) != 3:
            raise InstanceError(f"clause must have exactly 3 literals, got {len(literals)}")
        if len({lit.variable for lit in literals}) != 3:
            raise InstanceError(f"repeated variable in clause {self.to_dimacs()}")

    @property
    def variables(self) -> Tuple[int, int, int]:
        return tuple(lit.variable for lit in self.literals)

    def to_dimacs(self) -> List[int]:
        return [lit.to_dimacs() for lit in self.literals]

    @classmethod
    def from_dimacs(cls, values: Sequence[int]) -> "Clause":
        return cls(tuple(Literal.from_dimacs(v) for v in values))


class Max3SatInstance:
    """
    Immutable Max3Sat instance: n variables and an ordered clause list.

    Besides the clauses it keeps the per-variable clause membership index and
    two (m, 3) arrays (variables and negation flags) used by the vectorised
    evaluation code, plus a plain tuple view used by the incremental code.
    """

    def __init__(self, n: int, clauses: Sequence[Clause], name: str = ""):
        if n < 1:
            raise InstanceError(f"an instance needs at least one variable, got n={n}")
        self.n = int(n)
        self.clauses: Tuple[Clause, ...] = tuple(clauses)
        self.name = name

        for index, clause in enumerate(self.clauses):
            for variable in clause.variables:
                if not 0 <= variable < self.n:
                    raise InstanceError(
                        f"clause {index + 1} references variable {variable + 1} outside 1..{self.n}"
                    )

        self.literal_table: Tuple[Tuple[Tuple[int, int], ...], ...] = tuple(
            tuple((lit.variable, int(lit.negated)) for lit in clause.literals)
            for clause in self.clauses
        )
        self.variables = np.array(
            [clause.variables for clause in self.clauses], dtype=np.int64
        ).reshape(-1, 3)
        self.negated = np.array(
            [[lit.negated for lit in clause.literals] for clause in self.clauses], dtype=np.uint8
        ).reshape(-1, 3)
        self.membership: Tuple[Tuple[int, ...], ...] = self._build_membership()

        self.variables.setflags(write=False)
        self.negated.setflags(write=False)

    def _build_membership(self) -> Tuple[Tuple[int, ...], ...]:
        membership: List[List[int]] = [[] for _ in range(self.n)]
        for index, clause in enumerate(self.clauses):
            for variable in clause.variables:
                membership[variable].append(index)
        return tuple(tuple(clause_ids) for clause_ids in membership)

    @property
    def m(self) -> int:
        return len(self.clauses)

    def check_assignment(self, x: Any) -> Assignment:
        """Return x as a uint8 vector, raising if its length is not n."""
        x = np.asarray(x, dtype=np.uint8)
        if x.ndim != 1 or x.shape[0] != self.n:
            raise AssignmentLengthError(
                f"assignment has length {x.shape[0] if x.ndim == 1 else x.shape}, instance has n={self.n}"
            )
        return x

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Max3SatInstance):
            return NotImplemented
        return self.n == other.n and self.clauses == other.clauses

    def __hash__(self) -> int:
        return hash((self.n, self.clauses))

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"Max3SatInstance{label}(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class SatProfile:
    """Clause counts by number of satisfying literals."""
    c0: int
    c1: int
    c2: int
    c3: int

    @property
    def total(self) -> int:
        return self.c0 + self.c1 + self.c2 + self.c3

    @property
    def fitness(self) -> int:
        return self.c1 + self.c2 + self.c3

    def as_tuple(self) -> Tuple[int, int, int, int]:
        return (self.c0, self.c1, self.c2, self.c3)

    @classmethod
    def from_counts(cls, counts: Sequence[int]) -> "SatProfile":
        c0, c1, c2, c3 = (int(c) for c in counts)
        return cls(c0, c1, c2, c3)


@dataclass(frozen=True)
class GeneratorConfig:
    """Parameters of the random instance generators."""
    kind: str
    n: int
    cr: float
    beta: Optional[float] = None
    seed: int = 0

    def __post_init__(self):
        if self.kind not in GENERATOR_KINDS:
            raise GeneratorConfigError(f"unknown generator kind {self.kind!r}")
        if self.n < 3:
            raise GeneratorConfigError(f"need at least 3 variables, got n={self.n}")
        if self.m < 1:
            raise GeneratorConfigError(f"n={self.n}, cr={self.cr} yields no clauses")
        if self.kind == "uniform" and self.beta is not None:
            raise GeneratorConfigError("beta only applies to the scale-free generator")
        if self.kind == "scale-free" and (self.beta is None or self.beta <= 1):
            raise GeneratorConfigError(f"scale-free generator needs beta > 1, got {self.beta}")
        if not 0 <= self.seed < 2 ** 64:
            raise GeneratorConfigError(f"seed must fit in 64 bits, got {self.seed}")

    @property
    def m(self) -> int:
        # floor(n * cr); the epsilon absorbs binary representation error
        return int(math.floor(self.n * self.cr + 1e-9))


@dataclass(frozen=True)
class PerturbationMask:
    """Variables re-initialised by a perturbation step."""
    variables: Tuple[int, ...]
    seed_clause: Optional[int] = None
    root: Optional[int] = None

    def __len__(self) -> int:
        return len(self.variables)

    def __iter__(self):
        return iter(self.variables)

    def __contains__(self, variable: object) -> bool:
        return variable in self.variables


@dataclass(frozen=True)
class PxDecomposition:
    """Partition crossover view of two parents."""
    shared: Tuple[int, ...]
    components: Tuple[Tuple[int, ...], ...]
    component_clauses: Tuple[Tuple[int, ...], ...]
    partial_a: Tuple[int, ...]
    partial_b: Tuple[int, ...]

    @property
    def differing(self) -> Tuple[int, ...]:
        return tuple(sorted(v for component in self.components for v in component))


@dataclass
class RunConfig:
    """Optimizer run configuration."""
    algorithm: str
    seed: int = 0
    time_limit_ms: Optional[float] = None
    flip_limit: Optional[int] = None
    target: Optional[int] = None
    long_connection_steps: int = 25
    perturbation: str = "clause"
    vig_mask_size: int = 4
    archive_threshold: Optional[float] = None

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise RunConfigError(f"unknown algorithm {self.algorithm!r}, expected one of {ALGORITHMS}")
        if self.time_limit_ms is None and self.flip_limit is None and self.target is None:
            raise RunConfigError("at least one stop criterion (time, flips, target) is required")
        if self.long_connection_steps < 0:
            raise RunConfigError("long_connection_steps must be >= 0")
        if self.perturbation not in PERTURBATIONS:
            raise RunConfigError(f"unknown perturbation {self.perturbation!r}")
        if self.vig_mask_size < 1:
            raise RunConfigError("vig_mask_size must be >= 1")
        if self.archive_threshold is not None and not 0 < self.archive_threshold <= 1:
            raise RunConfigError("archive_threshold must lie in (0, 1]")


@dataclass(frozen=True)
class HistoryEntry:
    fitness: int
    flip_updates: int


@dataclass
class RunResult:
    """Outcome of one optimizer run."""
    instance: str
    algorithm: str
    seed: int
    n: int
    m: int
    best_fitness: int
    best_assignment: Assignment
    target: int
    success: bool
    full_evaluations: int
    flip_updates: int
    wall_ms: float
    history: List[HistoryEntry] = field(default_factory=list)
    archive: List[Assignment] = field(default_factory=list)


@dataclass(frozen=True)
class Backbone:
    """Variables fixed to the same value in every globally optimal solution."""
    n: int
    fixed: Dict[int, int]
    optimum: Optional[int] = None
    optima_count: Optional[int] = None

    @property
    def size(self) -> int:
        return len(self.fixed)


@dataclass
class HighQualitySet:
    """Near-optimal solutions: class A has one unsatisfied clause, class B two or more."""
    m: int
    bar: int
    class_a: List[Assignment] = field(default_factory=list)
    class_b: List[Assignment] = field(default_factory=list)

    def classes(self) -> Dict[str, List[Assignment]]:
        return {"A": self.class_a, "B": self.class_b}

    def __len__(self) -> int:
        return len(self.class_a) + len(self.class_b)


@dataclass(frozen=True)
class OverlapStats:
    """C1/C2 statistics of the high-quality solutions sharing one overlap value."""
    overlap: int
    count: int
    c1_min: int
    c1_mean: float
    c1_max: int
    c2_min: int
    c2_mean: float
    c2_max: int


@dataclass(frozen=True)
class BenchRow:
    instance: str
    algorithm: str
    seed: int
    success: bool
    best_fitness: int
    flip_updates: int
    full_evaluations: int
    wall_ms: float


def assignment_to_string(x: Assignment) -> str:
    return "".join("1" if bit else "0" for bit in np.asarray(x).tolist())


def assignment_from_string(text: str) -> Assignment:
    text = text.strip()
    if not text or set(text) - {"0", "1"}:
        raise AnalysisInputError(f"not a 0/1 assignment string: {text!r}")
    return (np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0")).astype(np.uint8)


class DataStructureManager:
    """Manager for serialising run results and solution files."""

    @staticmethod
    def run_result_to_dict(result: RunResult) -> Dict[str, Any]:
        """Documented RunResult JSON object (the archive is written separately)."""
        return {
            "instance": result.instance,
            "algorithm": result.algorithm,
            "seed": result.seed,
            "n": result.n,
            "m": result.m,
            "best_fitness": result.best_fitness,
            "best_assignment": assignment_to_string(result.best_assignment),
            "target": result.target,
            "success": result.success,
            "full_evaluations": result.full_evaluations,
            "flip_updates": result.flip_updates,
            "wall_ms": result.wall_ms,
            "history": [asdict(entry) for entry in result.history],
        }

    @staticmethod
    def run_result_from_dict(data: Dict[str, Any]) -> RunResult:
        return RunResult(
            instance=data["instance"],
            algorithm=data["algorithm"],
            seed=data["seed"],
            n=data["n"],
            m=data["m"],
            best_fitness=data["best_fitness"],
            best_assignment=assignment_from_string(data["best_assignment"]),
            target=data["target"],
            success=data["success"],
            full_evaluations=data["full_evaluations"],
            flip_updates=data["flip_updates"],
            wall_ms=data["wall_ms"],
            history=[HistoryEntry(**entry) for entry in data.get("history", [])],
        )

    @staticmethod
    def dumps_run_result(result: RunResult) -> str:
        return json.dumps(DataStructureManager.run_result_to_dict(result), indent=2)

    @staticmethod
    def save_run_result(result: RunResult, output_path: Union[str, Path]) -> str:
        """Save a run result to a JSON file."""
        try:
            output_path = Path(output_path)
            output_path.parent.mkdir(parents=True, exist_ok=True)
            output_path.write_text(DataStructureManager.dumps_run_result(result) + "\n")
            logger.info(f"Run result saved to {output_path}")
            return str(output_path)
        except Exception as e:
            logger.error(f"Error saving run result: {e}")
            raise

    @staticmethod
    def load_run_result(file_path: Union[str, Path]) -> RunResult:
        """Load a run result from a JSON file."""
        try:
            with open(file_path, "r") as f:
                return DataStructureManager.run_result_from_dict(json.load(f))
        except Exception as e:
            logger.error(f"Error loading run result: {e}")
            raise

    @staticmethod
    def parse_solutions(text: str, n: Optional[int] = None) -> List[Assignment]:
        """One 0/1 string per line; blank lines and '#' comments are skipped."""
        solutions = []
        for line_number, line in enumerate(text.splitlines(), start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                x = assignment_from_string(line)
            except AnalysisInputError as e:
                raise AnalysisInputError(f"line {line_number}: {e}") from None
            if n is not None and x.shape[0] != n:
                raise AnalysisInputError(
                    f"line {line_number}: solution has length {x.shape[0]}, expected {n}"
                )
            solutions.append(x)
        return solutions

    @staticmethod
    def load_solutions(file_path: Union[str, Path], n: Optional[int] = None) -> List[Assignment]:
        try:
            return DataStructureManager.parse_solutions(Path(file_path).read_text(), n)
        except Exception as e:
            logger.error(f"Error loading solutions from {file_path}: {e}")
            raise

    @staticmethod
    def save_solutions(solutions: Sequence[Assignment], output_path: Union[str, Path]) -> str:
        output_path = Path(output_path)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        output_path.write_text("".join(assignment_to_string(x) + "\n" for x in solutions))
        logger.info(f"Saved {len(solutions)} solutions to {output_path}")
        return str(output_path)

    @staticmethod
    def backbone_to_dict(backbone: Backbone) -> Dict[str, Any]:
        """Backbone JSON; variable keys are 1-based strings."""
        return {
            "n": backbone.n,
            "optimum": backbone.optimum,
            "size": backbone.size,
            "fixed": {str(v + 1): bit for v, bit in sorted(backbone.fixed.items())},
        }

    @staticmethod
    def backbone_from_dict(data: Dict[str, Any]) -> Backbone:
        try:
            fixed = {int(k) - 1: int(bit) for k, bit in data["fixed"].items()}
            return Backbone(n=int(data["n"]), fixed=fixed, optimum=data.get("optimum"))
        except (KeyError, TypeError, ValueError) as e:
            raise AnalysisInputError(f"malformed backbone object: {e}") from None
