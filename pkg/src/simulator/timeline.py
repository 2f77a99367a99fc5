"""
Timeline Simulator

Deterministic discrete-event simulation of workers running their ordered
task lists. Worker i finishes its k-th task at
(cost of its first k tasks + k * overhead) / speed_i; a worker with speed 0
produces no events. Events are ordered by (time, worker, location).

Decode time is the time of the shortest event prefix whose ledger is
decodable. Decodability only grows as events arrive, so the prefix is found
by binary search. Central decoding cost is not part of the decode time.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from ..baseline import PolyCodePlan
from ..decoder import ProgressLedger, SchemeDecoder
from ..encoding import EncodingPlan
from ..utils.logging import log_execution_time
from .costs import SimulationError, SpeedProfile, TaskCosts

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ['scheme', 'straggler_count', 'straggler_factor', 'cost_model',
                 'decode_time', 'products_used']


@dataclass(frozen=True, eq=False)
class Timeline:
    """
    Completion events of one simulated run.

    Attributes:
        times, workers, locations, classes: event arrays in event order
        finish_times: time each worker finished its last task (+inf if never)
        tasks_per_worker: ell for the scheme, 1 for the baseline
    """
    times: np.ndarray
    workers: np.ndarray
    locations: np.ndarray
    classes: np.ndarray
    finish_times: np.ndarray
    tasks_per_worker: int

    @property
    def n(self) -> int:
        return len(self.finish_times)

    def __len__(self) -> int:
        return len(self.times)

    def ledger_at(self, events: int) -> ProgressLedger:
        """Ledger after the first events events."""
        counts = np.bincount(self.workers[:events], minlength=self.n)
        return ProgressLedger(ell=self.tasks_per_worker, counts=counts)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({'time': self.times, 'worker': self.workers,
                             'location': self.locations, 'class': self.classes})


@dataclass(frozen=True)
class DecodeTime:
    """Earliest decodable time and the number of products received by then."""
    time: float
    products_used: int

    @property
    def decodable(self) -> bool:
        return np.isfinite(self.time)


def _build_timeline(costs: np.ndarray, speeds: SpeedProfile, classes: np.ndarray,
                    overhead: float) -> Timeline:
    n, tasks = costs.shape
    if speeds.n != n:
        raise SimulationError(f"speed profile has {speeds.n} workers, costs have {n}")
    if np.any(costs < 0) or not np.all(np.isfinite(costs)):
        raise SimulationError("task costs must be finite and non-negative")
    if overhead < 0:
        raise SimulationError(f"overhead must be non-negative, got {overhead}")

    elapsed = np.cumsum(costs, axis=1) + overhead * np.arange(1, tasks + 1)
    alive = speeds.speeds > 0
    finish = np.full(n, np.inf)
    finish[alive] = elapsed[alive, -1] / speeds.speeds[alive]

    workers, locations = np.nonzero(np.repeat(alive[:, None], tasks, axis=1))
    times = elapsed[workers, locations] / speeds.speeds[workers]
    order = np.lexsort((locations, workers, times))
    return Timeline(times=times[order], workers=workers[order].astype(np.int64),
                    locations=locations[order].astype(np.int64),
                    classes=classes[workers[order], locations[order]],
                    finish_times=finish, tasks_per_worker=tasks)


def simulate_timeline(plan: EncodingPlan, speeds: SpeedProfile, costs: TaskCosts,
                      overhead: float = 0.0) -> Timeline:
    """
    Simulate the proposed scheme.

    Args:
        plan (EncodingPlan): task lists to run
        speeds (SpeedProfile): worker speeds
        costs (TaskCosts): per-task costs of shape (n, ell)
        overhead (float): constant extra cost per product

    Returns:
        Timeline: all events, deterministic

    Raises:
        SimulationError: on shape mismatches or negative costs
    """
    if costs.costs.shape != (plan.n, plan.ell):
        raise SimulationError(f"costs have shape {costs.costs.shape}, plan needs {(plan.n, plan.ell)}")
    classes = np.array([[t.class_id for t in w.a_tasks] for w in plan.workers], dtype=np.int64)
    timeline = _build_timeline(costs.costs, speeds, classes, overhead)
    logger.debug(f"Simulated {len(timeline)} events for n={plan.n}")
    return timeline


def simulate_poly_timeline(plan: PolyCodePlan, speeds: SpeedProfile, costs: TaskCosts,
                           overhead: float = 0.0) -> Timeline:
    """Simulate the baseline: one product per worker."""
    if costs.costs.shape != (plan.n, 1):
        raise SimulationError(f"costs have shape {costs.costs.shape}, baseline needs {(plan.n, 1)}")
    return _build_timeline(costs.costs, speeds, np.zeros((plan.n, 1), dtype=np.int64), overhead)


def time_to_decode(timeline: Timeline, plan: EncodingPlan,
                   decoder: Optional[SchemeDecoder] = None) -> DecodeTime:
    """
    Earliest time at which the received products are decodable.

    Returns:
        DecodeTime: +inf and all events if the full timeline never decodes
    """
    decoder = decoder or SchemeDecoder(plan)
    total = len(timeline)
    if total == 0 or not decoder.decodable(timeline.ledger_at(total)):
        return DecodeTime(time=float('inf'), products_used=total)

    low, high = 0, total
    while high - low > 1:
        middle = (low + high) // 2
        if decoder.decodable(timeline.ledger_at(middle)):
            high = middle
        else:
            low = middle
    return DecodeTime(time=float(timeline.times[high - 1]), products_used=high)


def poly_time_to_decode(timeline: Timeline, plan: PolyCodePlan) -> DecodeTime:
    """The baseline decodes once tau workers have finished their one product."""
    finished = np.sort(timeline.finish_times)
    if not np.isfinite(finished[plan.tau - 1]):
        return DecodeTime(time=float('inf'), products_used=int(np.isfinite(finished).sum()))
    return DecodeTime(time=float(finished[plan.tau - 1]), products_used=plan.tau)


@dataclass(frozen=True, eq=False)
class SimulationCase:
    """One scheme to compare: its plan, task costs and report label."""
    name: str
    plan: Union[EncodingPlan, PolyCodePlan]
    costs: TaskCosts


def run_case(case: SimulationCase, speeds: SpeedProfile, overhead: float = 0.0) -> DecodeTime:
    if isinstance(case.plan, PolyCodePlan):
        return poly_time_to_decode(simulate_poly_timeline(case.plan, speeds, case.costs, overhead),
                                   case.plan)
    return time_to_decode(simulate_timeline(case.plan, speeds, case.costs, overhead), case.plan)


@log_execution_time
def compare_overall(cases: Sequence[SimulationCase], straggler_counts: Sequence[int] = range(7),
                    straggler_factor: float = 0.2, overhead: float = 0.0,
                    seed: Optional[int] = None, max_workers: Optional[int] = None) -> pd.DataFrame:
    """
    Decode times of several schemes over a straggler sweep.

    Every sweep point slows the same workers for all cases (the first count
    workers, or a seeded random choice).

    Args:
        cases (Sequence[SimulationCase]): schemes with their costs
        straggler_counts (Sequence[int]): sweep points
        straggler_factor (float): speed of the slow workers
        overhead (float): constant extra cost per product
        seed (Optional[int]): seed for random straggler placement
        max_workers (Optional[int]): threads across sweep points

    Returns:
        pd.DataFrame: rows ordered by straggler count then case order
    """
    if not cases:
        raise SimulationError("nothing to compare")
    n = cases[0].plan.n
    if any(case.plan.n != n for case in cases):
        raise SimulationError("all compared schemes need the same worker count")

    jobs = [(count, case) for count in straggler_counts for case in cases]

    def run(job) -> dict:
        count, case = job
        speeds = SpeedProfile.with_stragglers(n, count, straggler_factor, seed=seed)
        result = run_case(case, speeds, overhead)
        return {'scheme': case.name, 'straggler_count': count,
                'straggler_factor': straggler_factor, 'cost_model': case.costs.model,
                'decode_time': result.time, 'products_used': result.products_used}

    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            rows: List[dict] = list(pool.map(run, jobs))
    else:
        rows = [run(job) for job in jobs]
    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)
