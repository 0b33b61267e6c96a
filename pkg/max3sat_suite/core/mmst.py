"""
Max3Sat Multi-Satisfiability Table

Per-variable counters of the clauses containing the variable, split by how
many literals satisfy the clause (C0..C3) and whether the variable's own
literal is one of the satisfiers (S1..S3) or not (U1, U2). With them a
single-bit flip is applied in O(degree) and its fitness change and
clause-satisfiability change are read in O(1).

Counters live in plain Python lists; they are touched one scalar at a time.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .data_structures import Assignment, Max3SatInstance, SatProfile
from .errors import VariableIndexError

logger = logging.getLogger(__name__)


@dataclass
class EvaluationCounter:
    """Run-wide effort accounting shared by every table of a run."""
    full_evaluations: int = 0
    flip_updates: int = 0


@dataclass(frozen=True)
class VariableCounters:
    c0: int
    c1: int
    c2: int
    c3: int
    s1: int
    s2: int
    s3: int
    u1: int
    u2: int


def f_cf(before: SatProfile, after: SatProfile) -> int:
    """Clause-satisfiability change: gain in once-satisfied minus gain in twice-satisfied clauses."""
    return (after.c1 - before.c1) - (after.c2 - before.c2)


class Mmst:
    """Incremental clause-satisfiability bookkeeping for one assignment."""

    def __init__(self, instance: Max3SatInstance, x: Assignment,
                 counter: Optional[EvaluationCounter] = None):
        x = instance.check_assignment(x)
        self.instance = instance
        self.counter = counter if counter is not None else EvaluationCounter()
        self._bits: List[int] = x.tolist()
        self._rebuild()
        self.counter.full_evaluations += 1

    @classmethod
    def build(cls, instance: Max3SatInstance, x: Assignment,
              counter: Optional[EvaluationCounter] = None) -> "Mmst":
        return cls(instance, x, counter)

    def _rebuild(self):
        n = self.instance.n
        bits = self._bits
        self._c = [[0] * n for _ in range(4)]
        self._s = [[0] * n for _ in range(4)]  # index 0 unused
        self._u = [[0] * n for _ in range(3)]  # index 0 unused
        self._profile = [0, 0, 0, 0]
        self._sat: List[int] = []

        for literals in self.instance.literal_table:
            truths = [bits[v] ^ neg for v, neg in literals]
            k = sum(truths)
            self._sat.append(k)
            self._profile[k] += 1
            for (v, _), true in zip(literals, truths):
                self._c[k][v] += 1
                if k:
                    if true:
                        self._s[k][v] += 1
                    else:
                        self._u[k][v] += 1

    def copy(self) -> "Mmst":
        """Independent copy sharing the instance and the run counter; not an evaluation."""
        clone = Mmst.__new__(Mmst)
        clone.instance = self.instance
        clone.counter = self.counter
        clone._bits = list(self._bits)
        clone._c = [list(row) for row in self._c]
        clone._s = [list(row) for row in self._s]
        clone._u = [list(row) for row in self._u]
        clone._profile = list(self._profile)
        clone._sat = list(self._sat)
        return clone

    def _check(self, v: int) -> int:
        if not 0 <= v < self.instance.n:
            raise VariableIndexError(f"variable {v} outside [0, {self.instance.n})")
        return int(v)

    @property
    def n(self) -> int:
        return self.instance.n

    @property
    def full_evaluations(self) -> int:
        return self.counter.full_evaluations

    @property
    def flip_updates(self) -> int:
        return self.counter.flip_updates

    @property
    def assignment(self) -> Assignment:
        """Copy of the current assignment; later flips do not change it."""
        return np.array(self._bits, dtype=np.uint8)

    def bit(self, v: int) -> int:
        """Current value of variable v (0-based)."""
        return self._bits[self._check(v)]

    def key(self) -> bytes:
        """Hashable identity of the current assignment."""
        return bytes(self._bits)

    @property
    def profile(self) -> SatProfile:
        """Clause counts by number of true literals, kept current by flip()."""
        return SatProfile.from_counts(self._profile)

    @property
    def fitness(self) -> int:
        """Number of satisfied clauses."""
        return self.instance.m - self._profile[0]

    def clause_sat(self, clause_id: int) -> int:
        return self._sat[clause_id]

    def counters(self, v: int) -> VariableCounters:
        """
        Snapshot of the per-variable counters.

        Args:
            v: Variable index (0-based)

        Returns:
            VariableCounters with C0..C3, S1..S3, U1 and U2 of v

        Raises:
            VariableIndexError: v outside [0, n).
        """
        v = self._check(v)
        c, s, u = self._c, self._s, self._u
        return VariableCounters(
            c0=c[0][v], c1=c[1][v], c2=c[2][v], c3=c[3][v],
            s1=s[1][v], s2=s[2][v], s3=s[3][v],
            u1=u[1][v], u2=u[2][v],
        )

    def fitness_delta(self, v: int) -> int:
        """
        Fitness change if v were flipped, without flipping it.

        Args:
            v: Variable index (0-based)

        Returns:
            C0(v) - S1(v): clauses gained minus clauses broken
        """
        v = self._check(v)
        return self._c[0][v] - self._s[1][v]

    def fcf_delta(self, v: int) -> int:
        """
        Change of C1 - C2 if v were flipped, read from the counters.

        Args:
            v: Variable index (0-based)

        Returns:
            delta C1 - delta C2; the directed search prefers larger values
        """
        v = self._check(v)
        c0, s1, s2, s3 = self._c[0][v], self._s[1][v], self._s[2][v], self._s[3][v]
        u1, u2 = self._u[1][v], self._u[2][v]
        delta_c1 = (c0 + s2) - (s1 + u1)
        delta_c2 = (u1 + s3) - (s2 + u2)
        return delta_c1 - delta_c2

    def flip(self, v: int) -> None:
        """Toggle bit v and update every counter of the clauses containing it."""
        v = self._check(v)
        bits, c, s, u = self._bits, self._c, self._s, self._u
        literal_table = self.instance.literal_table

        for clause_id in self.instance.membership[v]:
            literals = literal_table[clause_id]
            old = self._sat[clause_id]
            for w, neg in literals:
                if w == v:
                    new = old - 1 if bits[v] ^ neg else old + 1
                    break

            for w, neg in literals:
                true_before = bits[w] ^ neg
                true_after = true_before ^ 1 if w == v else true_before
                c[old][w] -= 1
                if old:
                    if true_before:
                        s[old][w] -= 1
                    else:
                        u[old][w] -= 1
                c[new][w] += 1
                if new:
                    if true_after:
                        s[new][w] += 1
                    else:
                        u[new][w] += 1

            self._sat[clause_id] = new
            self._profile[old] -= 1
            self._profile[new] += 1

        bits[v] ^= 1
        self.counter.flip_updates += 1

    def move_to(self, x: Assignment) -> int:
        """Flip every differing bit so the table describes x; returns the number of flips."""
        x = self.instance.check_assignment(x)
        differing = np.flatnonzero(self.assignment != x).tolist()
        for v in differing:
            self.flip(v)
        return len(differing)

    def improving_flips(self) -> List[Tuple[int, int]]:
        """(variable, fitness gain) for every strictly improving flip, ascending variable."""
        c0, s1 = self._c[0], self._s[1]
        return [(v, c0[v] - s1[v]) for v in range(self.instance.n) if c0[v] > s1[v]]

    def unsatisfied_clauses(self) -> List[int]:
        """Ids of clauses with no true literal."""
        return [clause_id for clause_id, k in enumerate(self._sat) if k == 0]

    def __repr__(self) -> str:
        return f"Mmst(n={self.instance.n}, fitness={self.fitness}, profile={tuple(self._profile)})"
