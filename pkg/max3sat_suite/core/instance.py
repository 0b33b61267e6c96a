"""
Max3Sat Instances

DIMACS CNF reading and writing, the uniform-random and scale-free instance
generators, and the reference (non-incremental) evaluation that every
incremental structure is checked against.

All randomness comes from numpy's PCG64 bit generator so that instances are
reproducible bit-for-bit across platforms for a given 64-bit seed.
"""

import io
import logging
from pathlib import Path
from typing import Iterable, List, Optional, TextIO, Union

import numpy as np

from .data_structures import (
    Assignment,
    Clause,
    GeneratorConfig,
    Literal,
    Max3SatInstance,
    SatProfile,
)
from .errors import DimacsParseError, GeneratorConfigError

logger = logging.getLogger(__name__)


def make_rng(seed: int) -> np.random.Generator:
    """The suite's random source: PCG64 seeded with a 64-bit integer."""
    return np.random.Generator(np.random.PCG64(seed))


def random_assignment(n: int, rng: np.random.Generator) -> Assignment:
    """
    Uniform random assignment.

    Args:
        n: Number of variables
        rng: Generator from make_rng

    Returns:
        uint8 vector of length n
    """
    return rng.integers(0, 2, size=n, dtype=np.uint8)


def parse_dimacs(text: Union[str, TextIO], name: str = "") -> Max3SatInstance:
    """
    Parse DIMACS CNF text into an instance.

    Comment lines start with 'c'. A '%' line ends the clause section (the
    SATLIB convention). Clauses may span lines; errors report the line on
    which the offending clause starts.

    Raises:
        DimacsParseError: malformed header, clause arity other than 3, repeated
            variable, variable out of range or clause count mismatch.
    """
    stream = io.StringIO(text) if isinstance(text, str) else text

    n: Optional[int] = None
    declared_m = 0
    clauses: List[Clause] = []
    pending: List[int] = []
    pending_line = 0
    last_line = 0

    for line_number, raw in enumerate(stream, start=1):
        last_line = line_number
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            if n is not None:
                raise DimacsParseError("duplicate problem line", line_number)
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsParseError(f"malformed header {line!r}, expected 'p cnf <n> <m>'", line_number)
            try:
                n, declared_m = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsParseError(f"malformed header {line!r}, counts must be integers", line_number) from None
            if n < 1 or declared_m < 0:
                raise DimacsParseError(f"malformed header {line!r}, bad counts", line_number)
            continue

        if n is None:
            raise DimacsParseError("clause before 'p cnf' header", line_number)

        for token in line.split():
            try:
                value = int(token)
            except ValueError:
                raise DimacsParseError(f"non-integer token {token!r}", line_number) from None
            if not pending:
                pending_line = line_number
            if value != 0:
                pending.append(value)
                continue
            clauses.append(_clause_from_values(pending, n, pending_line))
            pending = []

    if n is None:
        raise DimacsParseError("missing 'p cnf' header", last_line or None)
    if pending:
        raise DimacsParseError("clause not terminated by 0", pending_line)
    if len(clauses) != declared_m:
        raise DimacsParseError(
            f"clause count mismatch: header declares {declared_m}, found {len(clauses)}", last_line
        )

    instance = Max3SatInstance(n, clauses, name=name)
    logger.debug(f"Parsed DIMACS instance {name or '<text>'}: n={n}, m={len(clauses)}")
    return instance


def _clause_from_values(values: List[int], n: int, line_number: int) -> Clause:
    if len(values) != 3:
        raise DimacsParseError(f"clause has {len(values)} literals, expected 3", line_number)
    variables = [abs(v) for v in values]
    for variable in variables:
        if variable > n:
            raise DimacsParseError(f"variable {variable} out of range 1..{n}", line_number)
    if len(set(variables)) != 3:
        raise DimacsParseError(f"repeated variable in clause {' '.join(map(str, values))}", line_number)
    return Clause.from_dimacs(values)


def read_dimacs(path: Union[str, Path]) -> Max3SatInstance:
    """Read a .cnf file; the instance is named after the file stem."""
    path = Path(path)
    with open(path, "r") as f:
        return parse_dimacs(f, name=path.stem)


def write_dimacs(instance: Max3SatInstance) -> str:
    """Header plus one line per clause, clause and literal order preserved."""
    lines = [f"p cnf {instance.n} {instance.m}"]
    lines.extend(" ".join(str(v) for v in clause.to_dimacs()) + " 0" for clause in instance.clauses)
    return "\n".join(lines) + "\n"


def save_dimacs(instance: Max3SatInstance, path: Union[str, Path]) -> str:
    """
    Write an instance as DIMACS CNF, creating parent directories.

    Args:
        instance: Instance to write
        path: Target .cnf file

    Returns:
        The path written, as a string
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(write_dimacs(instance))
    return str(path)


def generate_uniform(config: GeneratorConfig) -> Max3SatInstance:
    """
    Uniform random 3-SAT: each clause samples 3 distinct variables uniformly
    and negates each with probability 1/2.
    """
    if config.kind != "uniform":
        raise GeneratorConfigError(f"generate_uniform needs kind 'uniform', got {config.kind!r}")

    rng = make_rng(config.seed)
    clauses = []
    for _ in range(config.m):
        variables = rng.choice(config.n, size=3, replace=False)
        negated = rng.random(3) < 0.5
        clauses.append(Clause(tuple(Literal(int(v), bool(neg)) for v, neg in zip(variables, negated))))

    logger.info(f"Generated uniform instance n={config.n}, m={config.m}, seed={config.seed}")
    return Max3SatInstance(config.n, clauses, name=instance_name(config))


def generate_scale_free(config: GeneratorConfig) -> Max3SatInstance:
    """
    Scale-free 3-SAT: variable of rank i (1-based) is drawn with probability
    proportional to i^(-1/beta); repeats inside a clause are re-drawn.
    """
    if config.kind != "scale-free":
        raise GeneratorConfigError(f"generate_scale_free needs kind 'scale-free', got {config.kind!r}")

    rng = make_rng(config.seed)
    weights = np.arange(1, config.n + 1, dtype=np.float64) ** (-1.0 / config.beta)
    cdf = np.cumsum(weights / weights.sum())
    cdf[-1] = 1.0

    clauses = []
    for _ in range(config.m):
        chosen: List[int] = []
        while len(chosen) < 3:
            variable = int(np.searchsorted(cdf, rng.random(), side="right"))
            if variable not in chosen:
                chosen.append(variable)
        negated = rng.random(3) < 0.5
        clauses.append(Clause(tuple(Literal(v, bool(neg)) for v, neg in zip(chosen, negated))))

    logger.info(
        f"Generated scale-free instance n={config.n}, m={config.m}, beta={config.beta}, seed={config.seed}"
    )
    return Max3SatInstance(config.n, clauses, name=instance_name(config))


def generate(config: GeneratorConfig) -> Max3SatInstance:
    """
    Generate an instance from its configuration.

    Args:
        config: Validated generator parameters (kind, n, cr, beta, seed)

    Returns:
        Instance named after its parameters; the same config always gives
        the same clauses
    """
    if config.kind == "uniform":
        return generate_uniform(config)
    return generate_scale_free(config)


def instance_name(config: GeneratorConfig) -> str:
    """File stem encoding every generator parameter."""
    if config.kind == "uniform":
        return f"uniform_n{config.n}_cr{config.cr:g}_seed{config.seed}"
    return f"scalefree_n{config.n}_cr{config.cr:g}_beta{config.beta:g}_seed{config.seed}"


def clause_sat_count(clause: Clause, x: Assignment) -> int:
    """Number of literals of the clause made true by x."""
    return sum(1 for lit in clause.literals if lit.is_true(x))


def clause_sat_counts(instance: Max3SatInstance, x: Assignment,
                      clause_ids: Optional[Iterable[int]] = None) -> np.ndarray:
    """Satisfier count of every clause (or of the selected clauses)."""
    variables, negated = instance.variables, instance.negated
    if clause_ids is not None:
        ids = np.asarray(list(clause_ids), dtype=np.int64)
        variables, negated = variables[ids], negated[ids]
    return (x[variables] != negated).sum(axis=1)


def evaluate(instance: Max3SatInstance, x: Assignment) -> SatProfile:
    """Reference full-scan evaluation: clause counts by satisfier count."""
    x = instance.check_assignment(x)
    counts = np.bincount(clause_sat_counts(instance, x), minlength=4)
    return SatProfile.from_counts(counts[:4])


def fitness(instance: Max3SatInstance, x: Assignment) -> int:
    return evaluate(instance, x).fitness
