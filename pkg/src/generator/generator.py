"""
Generator Matrices

Per-class decoding systems of an EncodingPlan. For class m the A-side
generator G_A has one column per task of that class (k_a rows, one per class
member), the B-side generator G_B holds each worker's B coefficients, and
their column-wise Khatri-Rao product G maps the k_a * k_b unknown products
A_{alpha ell + m}^T B_beta to the products the workers return.

Columns follow natural worker order; the unknown (alpha, beta) sits in row
alpha * k_b + beta.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from ..encoding import EncodingPlan, appearance_sets
from ..linalg import khatri_rao_columns

logger = logging.getLogger(__name__)


class UnsupportedOperationError(ValueError):
    """Raised when an operation is requested outside its supported parameter range."""


@dataclass(frozen=True, eq=False)
class BGenerator:
    """k_b x n matrix of B coefficients; column i is worker i's coded B block."""
    matrix: np.ndarray
    supports: Tuple[Tuple[int, ...], ...]

    @property
    def k_b(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class ClassSystem:
    """
    Decoding system of one class.

    Attributes:
        class_id: class index m
        columns: (worker, location) of every task of the class, worker order
        g_a: k_a x len(columns) A-side generator
        g_b: k_b x len(columns) B-side generator
        g: (k_a * k_b) x len(columns) Khatri-Rao product of g_a and g_b
        unknowns: (A block index, B block index) of each row of g
    """
    class_id: int
    columns: Tuple[Tuple[int, int], ...]
    g_a: np.ndarray
    g_b: np.ndarray
    g: np.ndarray
    unknowns: Tuple[Tuple[int, int], ...]
    coded: Tuple[bool, ...] = ()

    @property
    def workers(self) -> np.ndarray:
        return np.array([w for w, _ in self.columns], dtype=np.int64)

    @property
    def locations(self) -> np.ndarray:
        return np.array([loc for _, loc in self.columns], dtype=np.int64)

    @property
    def coded_mask(self) -> np.ndarray:
        return np.array(self.coded, dtype=bool)


@dataclass(frozen=True, eq=False)
class RiMatrix:
    """B coefficients of the workers that hold A block i in any form."""
    submatrix: int
    workers: Tuple[int, ...]
    types: Tuple[int, ...]
    matrix: np.ndarray


def build_GB(plan: EncodingPlan) -> BGenerator:
    """
    Assemble the B-side generator of a plan.

    Returns:
        BGenerator: column i carries worker i's coefficients at its B support
    """
    k_b, n = plan.derived.k_b, plan.n
    matrix = np.zeros((k_b, n))
    for worker in plan.workers:
        matrix[list(worker.b.support), worker.worker] = worker.b.coefficients
    return BGenerator(matrix=matrix, supports=tuple(w.b.support for w in plan.workers))


def build_class_system(plan: EncodingPlan, m: int, gb: Optional[BGenerator] = None) -> ClassSystem:
    """
    Build the decoding system of class m.

    Args:
        plan (EncodingPlan): the assignment
        m (int): class index in [0, ell)
        gb (BGenerator): optional prebuilt B generator

    Returns:
        ClassSystem: generators over the tasks of class m

    Raises:
        ValueError: if m is out of range
    """
    derived = plan.derived
    ell, k_a, k_b = derived.ell, derived.k_a, derived.k_b
    if not 0 <= m < ell:
        raise ValueError(f"class {m} out of range [0, {ell})")
    gb = gb if gb is not None else build_GB(plan)

    columns: List[Tuple[int, int]] = []
    coded: List[bool] = []
    a_columns: List[np.ndarray] = []
    for worker in plan.workers:
        for location, task in enumerate(worker.a_tasks):
            if task.class_id != m:
                continue
            column = np.zeros(k_a)
            for index, coefficient in zip(task.support, task.coefficients):
                if index % ell != m:
                    logger.warning(f"Worker {worker.worker} location {location}: block {index} "
                                   f"is not in class {m}; ignored in the class system")
                    continue
                column[index // ell] += coefficient
            columns.append((worker.worker, location))
            coded.append(task.is_coded)
            a_columns.append(column)

    g_a = np.column_stack(a_columns) if a_columns else np.zeros((k_a, 0))
    g_b = gb.matrix[:, [w for w, _ in columns]] if columns else np.zeros((k_b, 0))
    g = khatri_rao_columns(g_a, g_b) if columns else np.zeros((k_a * k_b, 0))
    unknowns = tuple((alpha * ell + m, beta) for alpha in range(k_a) for beta in range(k_b))
    return ClassSystem(class_id=m, columns=tuple(columns), g_a=g_a, g_b=g_b, g=g,
                       unknowns=unknowns, coded=tuple(coded))


def build_class_systems(plan: EncodingPlan) -> List[ClassSystem]:
    """All ell class systems, sharing one B generator."""
    gb = build_GB(plan)
    return [build_class_system(plan, m, gb) for m in range(plan.ell)]


def extract_Ri(plan: EncodingPlan, i: int) -> RiMatrix:
    """
    Collect the B coefficients of every worker holding A block i.

    Args:
        plan (EncodingPlan): the assignment, built with x = 0
        i (int): A block index in [0, Delta_A)

    Returns:
        RiMatrix: k_b x |U_i u V_i| matrix, columns in worker order

    Raises:
        UnsupportedOperationError: if the plan has x > 0
    """
    if plan.derived.x > 0:
        raise UnsupportedOperationError(
            f"R_i is only defined for x = 0 (plan has x={plan.derived.x})")
    if not 0 <= i < plan.derived.delta_a:
        raise ValueError(f"A block {i} out of range [0, {plan.derived.delta_a})")

    index = appearance_sets(plan)
    workers = tuple(sorted(set(index.u(i)) | set(index.v(i))))
    gb = build_GB(plan)
    return RiMatrix(submatrix=i, workers=workers,
                    types=tuple(plan.worker(w).b.type_id for w in workers),
                    matrix=gb.matrix[:, list(workers)])
