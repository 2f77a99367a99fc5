"""
Encoding Plan

Builds the worker assignment of the scheme: the class decomposition of A's
block-columns, each worker's ordered list of uncoded and coded A tasks, and
each worker's coded B block.

Key Features:
- Class decomposition C_m = {m, m + ell, ..., m + (k_a - 1) ell}
- Cyclic uncoded windows of p blocks per worker
- Low-weight coded A blocks drawn from per-class cyclic counters
- Cyclic B supports of weight zeta (worker type i mod k_b)
- Appearance index (U_i, V_i) for every A block-column
"""

import logging
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Dict, List, Tuple

import numpy as np

from ..scheme import SchemeParams, DerivedParams, derive_params

logger = logging.getLogger(__name__)

UNCODED = 'uncoded'
CODED = 'coded'
TASK_KINDS = (UNCODED, CODED)


@dataclass(frozen=True)
class ClassDecomposition:
    """The ell disjoint classes of A block-columns, each of size k_a."""
    classes: Tuple[Tuple[int, ...], ...]

    @property
    def ell(self) -> int:
        return len(self.classes)

    def class_of(self, index: int) -> int:
        return index % self.ell

    def position_of(self, index: int) -> int:
        """Position of a global block index inside its class."""
        return index // self.ell


@dataclass(frozen=True)
class ATask:
    """
    One A-side block assigned to a worker.

    Uncoded tasks carry a single support member with coefficient 1.0; coded
    tasks carry k_a - y members of one class and their random coefficients.
    """
    kind: str
    class_id: int
    support: Tuple[int, ...]
    coefficients: Tuple[float, ...]

    @property
    def is_coded(self) -> bool:
        return self.kind == CODED

    @property
    def weight(self) -> int:
        return len(self.support)

    @classmethod
    def uncoded(cls, index: int, ell: int) -> 'ATask':
        return cls(kind=UNCODED, class_id=index % ell, support=(index,), coefficients=(1.0,))


@dataclass(frozen=True)
class BSpec:
    """Coded B block of a worker: zeta cyclically consecutive B blocks."""
    type_id: int
    support: Tuple[int, ...]
    coefficients: Tuple[float, ...]


@dataclass(frozen=True)
class WorkerPlan:
    """Ordered A tasks (location 0 first) and the B block of one worker."""
    worker: int
    a_tasks: Tuple[ATask, ...]
    b: BSpec

    @property
    def uncoded_indices(self) -> Tuple[int, ...]:
        return tuple(t.support[0] for t in self.a_tasks if not t.is_coded)

    @property
    def coded_tasks(self) -> Tuple[ATask, ...]:
        return tuple(t for t in self.a_tasks if t.is_coded)


@dataclass(frozen=True)
class EncodingPlan:
    """
    Complete assignment for n workers.

    Attributes:
        scheme: the user parameters the plan was built from
        derived: derived scalar quantities
        workers: one WorkerPlan per worker, in worker order
        lambdas: final per-class counters after all coded assignments
        groups: worker groups of ell consecutive workers
    """
    scheme: SchemeParams
    derived: DerivedParams
    workers: Tuple[WorkerPlan, ...]
    lambdas: Tuple[int, ...]
    groups: Tuple[Tuple[int, ...], ...] = field(repr=False)

    @property
    def n(self) -> int:
        return self.derived.n

    @property
    def ell(self) -> int:
        return self.derived.ell

    @property
    def seed(self) -> int:
        return self.scheme.seed

    def worker(self, index: int) -> WorkerPlan:
        return self.workers[index]

    @cached_property
    def location_table(self) -> np.ndarray:
        """
        n x ell table of the location at which worker i touches class m.

        Entries are -1 where a worker never touches a class (only possible for
        hand-edited plans); a repeated class keeps its first location.
        """
        table = np.full((self.n, self.ell), -1, dtype=np.int64)
        for plan in self.workers:
            for location, task in enumerate(plan.a_tasks):
                if table[plan.worker, task.class_id] < 0:
                    table[plan.worker, task.class_id] = location
        return table

    def replace_task(self, worker: int, location: int, task: ATask) -> 'EncodingPlan':
        """Copy of the plan with one A task swapped out."""
        tasks = list(self.workers[worker].a_tasks)
        tasks[location] = task
        workers = list(self.workers)
        workers[worker] = replace(self.workers[worker], a_tasks=tuple(tasks))
        return replace(self, workers=tuple(workers))


@dataclass(frozen=True)
class AppearanceIndex:
    """Workers holding each A block uncoded (U_i) and inside a coded block (V_i)."""
    uncoded: Tuple[Tuple[int, ...], ...]
    coded: Tuple[Tuple[int, ...], ...]

    def u(self, index: int) -> Tuple[int, ...]:
        return self.uncoded[index]

    def v(self, index: int) -> Tuple[int, ...]:
        return self.coded[index]


def decompose_classes(derived: DerivedParams) -> ClassDecomposition:
    """
    Split the Delta_A block-columns of A into ell classes.

    Args:
        derived (DerivedParams): derived scheme quantities

    Returns:
        ClassDecomposition: class m = [m, ell + m, ..., (k_a - 1) ell + m]
    """
    ell, k_a = derived.ell, derived.k_a
    return ClassDecomposition(
        classes=tuple(tuple(m + pos * ell for pos in range(k_a)) for m in range(ell)))


def worker_groups(derived: DerivedParams) -> Tuple[Tuple[int, ...], ...]:
    """The c groups of ell consecutive workers."""
    ell = derived.ell
    return tuple(tuple(range(g * ell, (g + 1) * ell)) for g in range(derived.c))


def build_plan(params: SchemeParams) -> EncodingPlan:
    """
    Assign A and B blocks to all workers.

    Workers are visited in index order. Worker i takes the p uncoded blocks
    {u, ..., u + p - 1} mod Delta_A with u = i Delta_A / n, then one coded
    block for each of the next ell_c classes in cyclic order. A coded block
    of class v combines the k_a - y class members starting at the class
    counter lambda_v, which then advances by k_a - y (mod k_a). The B block
    of worker i combines B_i, ..., B_{i+zeta-1} (mod k_b).

    Coefficients are uniform on [-1, 1], drawn per worker in task order and
    then for the B block.

    Args:
        params (SchemeParams): scheme parameters including the seed

    Returns:
        EncodingPlan: immutable, deterministic for a given seed

    Raises:
        SchemeError: if the parameters are illegal
    """
    derived = derive_params(params)
    rng = np.random.default_rng(params.seed)
    classes = decompose_classes(derived)

    n, k_a, k_b = derived.n, derived.k_a, derived.k_b
    ell, p, weight = derived.ell, derived.p, derived.coded_weight_a
    lambdas = [0] * ell

    workers: List[WorkerPlan] = []
    for i in range(n):
        u = i * derived.block_shift
        tasks = [ATask.uncoded((u + j) % derived.delta_a, ell) for j in range(p)]

        for j in range(derived.ell_c):
            v = (u + p + j) % ell
            positions = [(lambdas[v] + t) % k_a for t in range(weight)]
            support = tuple(classes.classes[v][pos] for pos in positions)
            coefficients = tuple(float(c) for c in rng.uniform(-1.0, 1.0, size=weight))
            tasks.append(ATask(kind=CODED, class_id=v, support=support, coefficients=coefficients))
            lambdas[v] = (lambdas[v] + weight) % k_a

        b_support = tuple((i + t) % k_b for t in range(derived.zeta))
        b_coefficients = tuple(float(c) for c in rng.uniform(-1.0, 1.0, size=derived.zeta))
        workers.append(WorkerPlan(worker=i, a_tasks=tuple(tasks),
                                  b=BSpec(type_id=i % k_b, support=b_support,
                                          coefficients=b_coefficients)))

    plan = EncodingPlan(scheme=params, derived=derived, workers=tuple(workers),
                        lambdas=tuple(lambdas), groups=worker_groups(derived))
    logger.info(f"Built plan for n={n}, k_a={k_a}, k_b={k_b}, x={derived.x}: "
                f"{p} uncoded + {derived.ell_c} coded A blocks per worker, "
                f"coded weights (A, B) = ({weight}, {derived.zeta})")
    return plan


def appearance_sets(plan: EncodingPlan) -> AppearanceIndex:
    """
    Scan every task and collect U_i and V_i for each A block-column.

    Returns:
        AppearanceIndex: worker tuples in ascending order per block
    """
    delta_a = plan.derived.delta_a
    uncoded: Dict[int, List[int]] = {i: [] for i in range(delta_a)}
    coded: Dict[int, List[int]] = {i: [] for i in range(delta_a)}
    for worker in plan.workers:
        for task in worker.a_tasks:
            target = coded if task.is_coded else uncoded
            for index in task.support:
                target[index].append(worker.worker)
    return AppearanceIndex(
        uncoded=tuple(tuple(sorted(uncoded[i])) for i in range(delta_a)),
        coded=tuple(tuple(sorted(coded[i])) for i in range(delta_a)),
    )
