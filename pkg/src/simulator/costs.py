"""
Cost Models and Speed Profiles

Per-task costs for the timeline simulator and the worker speed profiles that
turn costs into completion times.

Cost models:
- unit: every block product of the scheme costs 1; a baseline product, which
  covers ell times the columns, costs ell
- nnz: structural flop count of the actual encoded operands
- analytic: dense flop count scaled by the first-order density estimate
  min(1, weight * density) of each operand
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..baseline import PolyCodePlan
from ..encoding import EncodingPlan, WorkerPayload
from ..linalg import gram_flops

logger = logging.getLogger(__name__)

COST_MODELS = ('unit', 'nnz', 'analytic')


class SimulationError(ValueError):
    """Raised on invalid speeds, costs or simulation inputs."""


@dataclass(frozen=True, eq=False)
class SpeedProfile:
    """
    Speed factor of each worker; 1.0 is nominal and 0.0 a failed worker.

    Attributes:
        speeds: non-negative speed per worker
        stragglers: workers slowed below nominal
        factor: slowdown factor applied to the stragglers
    """
    speeds: np.ndarray
    stragglers: tuple = ()
    factor: float = 1.0

    def __post_init__(self):
        speeds = np.asarray(self.speeds, dtype=np.float64)
        if speeds.ndim != 1 or not np.all(np.isfinite(speeds)):
            raise SimulationError("speeds must be a finite one-dimensional array")
        if np.any(speeds < 0):
            raise SimulationError(f"speeds must be non-negative, got {speeds.tolist()}")
        object.__setattr__(self, 'speeds', speeds)

    @property
    def n(self) -> int:
        return len(self.speeds)

    @classmethod
    def uniform(cls, n: int, speed: float = 1.0) -> 'SpeedProfile':
        return cls(speeds=np.full(n, speed))

    @classmethod
    def with_stragglers(cls, n: int, count: int = 0, factor: float = 0.2,
                        workers: Optional[Sequence[int]] = None,
                        seed: Optional[int] = None) -> 'SpeedProfile':
        """
        Nominal speeds with some workers slowed by factor.

        Slow workers are the explicit list when given, otherwise count workers
        chosen at random when a seed is given, otherwise the first count.
        """
        if not 0.0 <= factor <= 1.0:
            raise SimulationError(f"straggler factor must lie in [0, 1], got {factor}")
        if workers is None:
            if not 0 <= count <= n:
                raise SimulationError(f"straggler count {count} must lie in [0, {n}]")
            if seed is None:
                workers = range(count)
            else:
                workers = np.random.default_rng(seed).choice(n, size=count, replace=False)
        slow = tuple(sorted(int(w) for w in workers))
        if any(not 0 <= w < n for w in slow):
            raise SimulationError(f"straggler workers {slow} out of range [0, {n})")
        speeds = np.ones(n)
        speeds[list(slow)] = factor
        return cls(speeds=speeds, stragglers=slow, factor=factor)

    def scaled(self, scale: float) -> 'SpeedProfile':
        return SpeedProfile(speeds=self.speeds * scale, stragglers=self.stragglers, factor=self.factor)


@dataclass(frozen=True, eq=False)
class TaskCosts:
    """Cost of each task: array of shape (n, tasks per worker)."""
    model: str
    costs: np.ndarray

    @property
    def per_worker(self) -> np.ndarray:
        return self.costs.sum(axis=1)


def _operand_density(weight: int, density: float) -> float:
    return min(1.0, weight * density)


class CostModel:
    """
    Turns plans into TaskCosts under one of the cost models.

    The analytic model needs the input density and, optionally, the matrix
    dimensions (rows t, A columns r, B columns w); with unit dimensions only
    cost ratios are meaningful.
    """

    def __init__(self, kind: str = 'unit', density: Optional[float] = None,
                 rows: int = 1, a_cols: int = 1, b_cols: int = 1):
        if kind not in COST_MODELS:
            raise SimulationError(f"unknown cost model {kind!r}; expected one of {COST_MODELS}")
        if kind == 'analytic' and (density is None or not 0.0 < density <= 1.0):
            raise SimulationError(f"analytic cost model needs a density in (0, 1], got {density}")
        self.kind = kind
        self.density = density
        self.dims = {'rows': rows, 'a_cols': a_cols, 'b_cols': b_cols}

    def _dense_flops(self, a_blocks: int, b_blocks: int) -> float:
        return 2.0 * self.dims['rows'] * (self.dims['a_cols'] / a_blocks) * (self.dims['b_cols'] / b_blocks)

    def scheme_costs(self, plan: EncodingPlan,
                     payloads: Optional[Sequence[WorkerPayload]] = None) -> TaskCosts:
        """
        Costs of every task of the proposed scheme.

        Raises:
            SimulationError: if the nnz model is used without payloads
        """
        derived = plan.derived
        if self.kind == 'unit':
            costs = np.ones((plan.n, plan.ell))
        elif self.kind == 'nnz':
            if payloads is None:
                raise SimulationError("the nnz cost model needs encoded payloads")
            costs = np.array([[gram_flops(a, p.b_block) for a in p.a_blocks] for p in payloads],
                             dtype=np.float64)
        else:
            dense = self._dense_flops(derived.delta_a, derived.k_b)
            costs = np.array([
                [dense * _operand_density(task.weight, self.density)
                 * _operand_density(len(worker.b.support), self.density)
                 for task in worker.a_tasks]
                for worker in plan.workers])
        return TaskCosts(model=self.kind, costs=costs)

    def baseline_costs(self, plan: PolyCodePlan, encoded: Optional[Sequence[tuple]] = None,
                       ell: int = 1) -> TaskCosts:
        """
        Costs of the single product of every baseline worker.

        Args:
            plan (PolyCodePlan): baseline plan
            encoded: (A~_i, B~_i) pairs, required by the nnz model
            ell (int): unit-model cost of one baseline product

        Raises:
            SimulationError: if the nnz model is used without encoded blocks
        """
        if self.kind == 'unit':
            costs = np.full((plan.n, 1), float(ell))
        elif self.kind == 'nnz':
            if encoded is None:
                raise SimulationError("the nnz cost model needs encoded baseline blocks")
            costs = np.array([[gram_flops(a, b)] for a, b in encoded], dtype=np.float64)
        else:
            dense = self._dense_flops(plan.k_a, plan.k_b)
            costs = np.full((plan.n, 1), dense * _operand_density(plan.k_a, self.density)
                            * _operand_density(plan.k_b, self.density))
        return TaskCosts(model=self.kind, costs=costs)
