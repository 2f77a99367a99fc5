"""
Progress Ledger

Per-worker count of finished block products. Workers process their tasks
top to bottom, so a count t means locations 0..t-1 are done.
"""

import logging
from dataclasses import dataclass
from typing import Iterable

import numpy as np

logger = logging.getLogger(__name__)


class LedgerError(ValueError):
    """Raised on an out-of-range worker or a completion past the last task."""


@dataclass(eq=False)
class ProgressLedger:
    """
    Completed-task counts of n workers with ell tasks each.

    Attributes:
        ell: tasks per worker
        counts: int array of length n with 0 <= counts[i] <= ell
    """
    ell: int
    counts: np.ndarray

    def __post_init__(self):
        self.counts = np.array(self.counts, dtype=np.int64)
        if self.counts.ndim != 1:
            raise LedgerError("ledger counts must be one-dimensional")
        if np.any(self.counts < 0) or np.any(self.counts > self.ell):
            raise LedgerError(f"ledger counts must lie in [0, {self.ell}], got {self.counts.tolist()}")

    @classmethod
    def fresh(cls, n: int, ell: int) -> 'ProgressLedger':
        return cls(ell=ell, counts=np.zeros(n, dtype=np.int64))

    @classmethod
    def full(cls, n: int, ell: int) -> 'ProgressLedger':
        return cls(ell=ell, counts=np.full(n, ell, dtype=np.int64))

    @classmethod
    def from_survivors(cls, n: int, ell: int, survivors: Iterable[int]) -> 'ProgressLedger':
        """Survivors fully finished, every other worker at zero."""
        counts = np.zeros(n, dtype=np.int64)
        for worker in survivors:
            if not 0 <= worker < n:
                raise LedgerError(f"worker {worker} out of range [0, {n})")
            counts[worker] = ell
        return cls(ell=ell, counts=counts)

    @property
    def n(self) -> int:
        return len(self.counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def is_finished(self, worker: int) -> bool:
        return int(self.counts[worker]) == self.ell

    def completed(self, worker: int, location: int) -> bool:
        return location < self.counts[worker]

    def dominates(self, other: 'ProgressLedger') -> bool:
        """True if every worker here has finished at least as much as in other."""
        return bool(np.all(self.counts >= other.counts))

    def copy(self) -> 'ProgressLedger':
        return ProgressLedger(ell=self.ell, counts=self.counts.copy())

    def record(self, worker: int) -> None:
        """Mark the next task of a worker as finished, in place."""
        if not 0 <= worker < self.n:
            raise LedgerError(f"worker {worker} out of range [0, {self.n})")
        if self.counts[worker] >= self.ell:
            raise LedgerError(f"worker {worker} already finished all {self.ell} tasks")
        self.counts[worker] += 1


def record_completion(ledger: ProgressLedger, worker: int) -> ProgressLedger:
    """
    Return a new ledger with one more finished task for a worker.

    Raises:
        LedgerError: if the worker has already finished
    """
    updated = ledger.copy()
    updated.record(worker)
    return updated
