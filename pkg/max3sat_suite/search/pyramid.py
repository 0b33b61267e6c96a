"""
Population Pyramid and Optimizer Drivers

A P3-style leveled population of unique solutions and the three drivers
built on it:

- IPP: every member gets one ILS step per iteration, then a fresh climber is
  improved by ILS, added to level 0 and pushed up the pyramid with partition
  crossover.
- MOCSM: directed ILS instead of ILS, plus a LongConnection pass over every
  member at the end of each iteration.
- MOCSM-mixed: members at even enumeration positions get ILS and the
  LongConnection pass, odd positions get directed ILS only.
"""

import logging
import math
import time
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from ..core.data_structures import (
    Assignment,
    HistoryEntry,
    Max3SatInstance,
    RunConfig,
    RunResult,
)
from ..core.errors import IdenticalParentsError, PyramidLevelError, RunConfigError
from ..core.instance import make_rng, random_assignment
from ..core.mmst import EvaluationCounter, Mmst
from ..core.vig import Vig, build_vig
from .operators import directed_ils_step, ils_step, long_connection
from .px import best_offspring_plan, px_decompose

logger = logging.getLogger(__name__)


class Pyramid:
    """
    Leveled population with no duplicate insertions.

    Members improve in place, so two of them can drift onto the same
    assignment. _holders counts members per assignment; a key stays blocked
    for add_unique until the last member holding it moves away.
    """

    def __init__(self):
        self.levels: List[List[Mmst]] = []
        self._holders: Counter = Counter()

    def add_unique(self, level: int, state: Mmst) -> bool:
        """
        Place state on the given level unless its assignment is already in
        the pyramid. level == level_count opens a new level.

        Raises:
            PyramidLevelError: level would leave a gap.
        """
        if level < 0 or level > len(self.levels):
            raise PyramidLevelError(f"cannot insert at level {level}, pyramid has {len(self.levels)} levels")
        key = state.key()
        if key in self._holders:
            logger.debug(f"Duplicate rejected at level {level}")
            return False
        if level == len(self.levels):
            self.levels.append([])
        self.levels[level].append(state)
        self._holders[key] += 1
        return True

    def refresh(self, state: Mmst, old_key: bytes) -> None:
        """Re-register a member whose assignment changed in place."""
        new_key = state.key()
        if new_key == old_key:
            return
        self._holders[old_key] -= 1
        if self._holders[old_key] <= 0:
            del self._holders[old_key]
        self._holders[new_key] += 1

    def holders(self, x: Assignment) -> int:
        """Number of members currently holding assignment x."""
        return self._holders.get(bytes(x.tolist()), 0)

    def contains(self, x: Assignment) -> bool:
        return bytes(x.tolist()) in self._holders

    def members(self) -> List[Mmst]:
        """Level-major enumeration, insertion order within a level."""
        return [state for level in self.levels for state in level]

    @property
    def level_count(self) -> int:
        return len(self.levels)

    def __len__(self) -> int:
        return sum(len(level) for level in self.levels)


def _never(index: int) -> bool:
    return False


def _always(index: int) -> bool:
    return True


def _even(index: int) -> bool:
    return index % 2 == 0


def _odd(index: int) -> bool:
    return index % 2 == 1


@dataclass(frozen=True)
class DriverPolicy:
    """Which ILS flavour and which LongConnection treatment each member gets."""
    member_directed: Callable[[int], bool]
    climber_directed: bool
    long_connection: Callable[[int], bool]


POLICIES: Dict[str, DriverPolicy] = {
    "ipp": DriverPolicy(member_directed=_never, climber_directed=False, long_connection=_never),
    "mocsm": DriverPolicy(member_directed=_always, climber_directed=True, long_connection=_always),
    "mocsm-mixed": DriverPolicy(member_directed=_odd, climber_directed=True, long_connection=_even),
}


class _StopRun(Exception):
    pass


class PyramidOptimizer:
    """Runs one seeded optimizer over one instance."""

    def __init__(self, instance: Max3SatInstance, config: RunConfig,
                 policy: Optional[DriverPolicy] = None, vig: Optional[Vig] = None):
        """
        Args:
            instance: Instance to optimise
            config: Run configuration (algorithm, seed, stop criteria)
            policy: Overrides the algorithm's default policy
            vig: Precomputed VIG of the instance
        """
        self.instance = instance
        self.config = config
        self.policy = policy or POLICIES[config.algorithm]
        self.vig = vig or build_vig(instance)
        self.target = instance.m if config.target is None else config.target

        self.rng = make_rng(config.seed)
        self.counter = EvaluationCounter()
        self.pyramid = Pyramid()

        self.best_fitness = -1
        self.best_assignment: Optional[Assignment] = None
        self.history: List[HistoryEntry] = []
        self.archive: List[Assignment] = []
        self._archive_keys = set()
        self._archive_bar = (
            math.ceil(round(config.archive_threshold * instance.m, 9))
            if config.archive_threshold is not None else None
        )
        self._start = 0.0

        logger.debug(
            f"PyramidOptimizer initialized: {config.algorithm} on {instance!r}, seed={config.seed}"
        )

    def _elapsed_ms(self) -> float:
        return (time.perf_counter() - self._start) * 1000.0

    def _check_stop(self) -> None:
        config = self.config
        if self.best_fitness >= self.target:
            raise _StopRun()
        if config.flip_limit is not None and self.counter.flip_updates >= config.flip_limit:
            raise _StopRun()
        if config.time_limit_ms is not None and self._elapsed_ms() >= config.time_limit_ms:
            raise _StopRun()

    def _observe(self, state: Mmst) -> None:
        fitness = state.fitness
        if fitness > self.best_fitness:
            self.best_fitness = fitness
            self.best_assignment = state.assignment
            self.history.append(HistoryEntry(fitness=fitness, flip_updates=self.counter.flip_updates))
            logger.debug(f"New best {fitness}/{self.instance.m} after {self.counter.flip_updates} flips")
        if self._archive_bar is not None and fitness >= self._archive_bar:
            key = state.key()
            if key not in self._archive_keys:
                self._archive_keys.add(key)
                self.archive.append(state.assignment)

    def _improve(self, state: Mmst, directed: bool) -> None:
        if directed:
            directed_ils_step(state, self.rng)
        else:
            ils_step(state, self.rng, mask=self.config.perturbation, vig=self.vig,
                     max_mask_size=self.config.vig_mask_size)

    def _improve_members(self) -> None:
        for index, member in enumerate(self.pyramid.members()):
            self._check_stop()
            old_key = member.key()
            self._improve(member, self.policy.member_directed(index))
            self.pyramid.refresh(member, old_key)
            self._observe(member)

    def _new_climber(self) -> Mmst:
        climber = Mmst.build(self.instance, random_assignment(self.instance.n, self.rng), self.counter)
        self._observe(climber)
        self._check_stop()
        self._improve(climber, self.policy.climber_directed)
        self._observe(climber)
        self.pyramid.add_unique(0, climber)
        return climber

    def _climb(self, climber: Mmst) -> None:
        """Cross the climber with every member, level by level, adopting strict improvements."""
        level = 0
        while level < self.pyramid.level_count:
            for partner in list(self.pyramid.levels[level]):
                if partner is climber:
                    continue
                try:
                    decomposition = px_decompose(self.instance, self.vig, climber.assignment, partner.assignment)
                except IdenticalParentsError:
                    continue
                from_partner, gain = best_offspring_plan(decomposition)
                if gain <= 0:
                    continue
                offspring = climber.copy()
                for component in from_partner:
                    for v in component:
                        offspring.flip(v)
                self.pyramid.add_unique(level + 1, offspring)
                climber = offspring
                self._observe(climber)
            level += 1

    def _connect_members(self) -> None:
        steps = self.config.long_connection_steps
        for index, member in enumerate(self.pyramid.members()):
            if not self.policy.long_connection(index):
                continue
            self._check_stop()
            old_key = member.key()
            long_connection(member, steps, self.rng)
            self.pyramid.refresh(member, old_key)
            self._observe(member)

    def run(self) -> RunResult:
        logger.info(
            f"Starting {self.config.algorithm} seed={self.config.seed} on {self.instance.name or 'instance'} "
            f"(n={self.instance.n}, m={self.instance.m}, target={self.target})"
        )
        self._start = time.perf_counter()
        iterations = 0
        try:
            while True:
                self._improve_members()
                climber = self._new_climber()
                self._climb(climber)
                self._connect_members()
                iterations += 1
        except _StopRun:
            pass

        result = RunResult(
            instance=self.instance.name,
            algorithm=self.config.algorithm,
            seed=self.config.seed,
            n=self.instance.n,
            m=self.instance.m,
            best_fitness=self.best_fitness,
            best_assignment=self.best_assignment,
            target=self.target,
            success=self.best_fitness >= self.target,
            full_evaluations=self.counter.full_evaluations,
            flip_updates=self.counter.flip_updates,
            wall_ms=round(self._elapsed_ms(), 3),
            history=list(self.history),
            archive=list(self.archive),
        )
        logger.info(
            f"{self.config.algorithm} seed={self.config.seed} on {self.instance.name or 'instance'}: "
            f"best {result.best_fitness}/{result.m}, success={result.success}, "
            f"{iterations} iterations, {result.flip_updates} flips, pyramid size {len(self.pyramid)}"
        )
        return result


def _run_algorithm(instance: Max3SatInstance, config: RunConfig, algorithm: str) -> RunResult:
    if config.algorithm != algorithm:
        raise RunConfigError(f"expected algorithm {algorithm!r}, config says {config.algorithm!r}")
    return PyramidOptimizer(instance, config).run()


def ipp_run(instance: Max3SatInstance, config: RunConfig) -> RunResult:
    return _run_algorithm(instance, config, "ipp")


def mocsm_run(instance: Max3SatInstance, config: RunConfig) -> RunResult:
    return _run_algorithm(instance, config, "mocsm")


def mocsm_mixed_run(instance: Max3SatInstance, config: RunConfig) -> RunResult:
    return _run_algorithm(instance, config, "mocsm-mixed")


RUNNERS: Dict[str, Callable[[Max3SatInstance, RunConfig], RunResult]] = {
    "ipp": ipp_run,
    "mocsm": mocsm_run,
    "mocsm-mixed": mocsm_mixed_run,
}


def run(instance: Max3SatInstance, config: RunConfig) -> RunResult:
    """Dispatch on config.algorithm."""
    return RUNNERS[config.algorithm](instance, config)
