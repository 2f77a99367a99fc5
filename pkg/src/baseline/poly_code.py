"""
Polynomial Code Baseline

Dense polynomial-code encoding used as the comparison point: worker i holds
A~_i = sum_j A_j p_i^j and B~_i = sum_k B_k p_i^(k k_a), computes one product
A~_i^T B~_i, and any k_a * k_b finished workers determine A^T B through a
Vandermonde solve.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..linalg import (PartitionedMatrix, RankDeficientError, batched_condition_numbers,
                      condition_number, linear_combination, solve_least_squares)
from ..utils.logging import log_sweep_progress

logger = logging.getLogger(__name__)


class BaselineError(ValueError):
    """Raised for illegal baseline parameters or too few survivors."""


@dataclass(frozen=True, eq=False)
class PolyCodePlan:
    """
    Polynomial-code assignment.

    Attributes:
        n, k_a, k_b: worker count and storage fractions
        points: evaluation point of each worker
    """
    n: int
    k_a: int
    k_b: int
    points: np.ndarray

    @property
    def tau(self) -> int:
        return self.k_a * self.k_b

    def a_coefficients(self, worker: int) -> np.ndarray:
        return self.points[worker] ** np.arange(self.k_a)

    def b_coefficients(self, worker: int) -> np.ndarray:
        return self.points[worker] ** (np.arange(self.k_b) * self.k_a)

    def vandermonde(self, workers: Sequence[int]) -> np.ndarray:
        """Rows p_i^d, d < tau, for the given workers."""
        return np.vander(self.points[list(workers)], N=self.tau, increasing=True)

    @property
    def weights(self) -> Dict[str, int]:
        """Number of blocks combined in each encoded A and B block."""
        return {'a': self.k_a, 'b': self.k_b}


def poly_plan(n: int, k_a: int, k_b: int, points: Optional[Sequence[float]] = None) -> PolyCodePlan:
    """
    Build a polynomial-code plan.

    Args:
        n (int): worker count, must exceed k_a * k_b
        k_a (int): A block-columns
        k_b (int): B block-columns
        points (Optional[Sequence[float]]): evaluation points; default 1..n

    Returns:
        PolyCodePlan: the plan

    Raises:
        BaselineError: on illegal sizes or repeated points
    """
    if k_a < 1 or k_b < 1:
        raise BaselineError(f"k_a and k_b must be positive, got {k_a}, {k_b}")
    if n <= k_a * k_b:
        raise BaselineError(f"no straggler margin: n={n} must exceed k_a*k_b={k_a * k_b}")
    nodes = np.arange(1, n + 1, dtype=np.float64) if points is None else np.asarray(points, dtype=np.float64)
    if nodes.shape != (n,):
        raise BaselineError(f"expected {n} evaluation points, got {nodes.size}")
    if len(np.unique(nodes)) != n:
        raise BaselineError("evaluation points must be distinct")
    return PolyCodePlan(n=n, k_a=k_a, k_b=k_b, points=nodes)


def poly_encode(a: PartitionedMatrix, b: PartitionedMatrix, plan: PolyCodePlan) -> List[tuple]:
    """
    Encoded (A~_i, B~_i) pair of every worker.

    Raises:
        BaselineError: if the partitions do not have k_a and k_b blocks
    """
    if a.block_count != plan.k_a or b.block_count != plan.k_b:
        raise BaselineError(f"partitions have {a.block_count}/{b.block_count} blocks, "
                            f"plan needs {plan.k_a}/{plan.k_b}")
    a_blocks = [a.block(j) for j in range(plan.k_a)]
    b_blocks = [b.block(k) for k in range(plan.k_b)]
    return [(linear_combination(a_blocks, plan.a_coefficients(i)),
             linear_combination(b_blocks, plan.b_coefficients(i))) for i in range(plan.n)]


def poly_decode(plan: PolyCodePlan, products: Dict[int, np.ndarray]) -> np.ndarray:
    """
    Interpolate A^T B from finished workers.

    Coefficient d = j + k k_a of the product polynomial is A_j^T B_k.

    Args:
        plan (PolyCodePlan): the plan
        products (Dict[int, np.ndarray]): worker -> A~_i^T B~_i

    Returns:
        np.ndarray: tiled A^T B (k_a x k_b blocks)

    Raises:
        BaselineError: with fewer than tau products or a singular system
    """
    if len(products) < plan.tau:
        raise BaselineError(f"{len(products)} products are fewer than the threshold {plan.tau}")
    workers = sorted(products)
    rhs = np.stack([np.asarray(products[w], dtype=np.float64) for w in workers])
    try:
        solution = solve_least_squares(plan.vandermonde(workers), rhs).solution
    except RankDeficientError as e:
        raise BaselineError(f"interpolation failed: {e}") from e

    wa, wb = rhs.shape[1:]
    result = np.zeros((plan.k_a * wa, plan.k_b * wb))
    for j in range(plan.k_a):
        for k in range(plan.k_b):
            result[j * wa:(j + 1) * wa, k * wb:(k + 1) * wb] = solution[j + k * plan.k_a]
    return result


def poly_kappa_worst(plan: PolyCodePlan, s: int, cap: int = 100_000,
                     seed: int = 0) -> float:
    """
    Worst condition number of the interpolation systems left by s stragglers.

    Each choice of s stragglers leaves an (n - s) x tau Vandermonde system;
    with s = n - tau these are the square tau x tau submatrices. All C(n, s)
    choices are swept when there are at most cap of them, otherwise cap
    random choices.

    Returns:
        float: maximum condition number (+inf if any system is singular)
    """
    if not 0 <= s <= plan.n - plan.tau:
        raise BaselineError(f"s={s} must lie in [0, {plan.n - plan.tau}]")
    survivors = plan.n - s
    total = math.comb(plan.n, s)
    if total <= cap:
        subsets = np.array(list(itertools.combinations(range(plan.n), survivors)), dtype=np.intp)
    else:
        logger.warning(f"Sampling {cap} of {total} straggler subsets")
        rng = np.random.default_rng(seed)
        subsets = np.sort(np.array([rng.choice(plan.n, survivors, replace=False)
                                    for _ in range(cap)]), axis=1)

    full = np.vander(plan.points, N=plan.tau, increasing=True)
    worst = 0.0
    for start in range(0, len(subsets), 4096):
        stack = full[subsets[start:start + 4096]]
        worst = max(worst, float(np.max(batched_condition_numbers(stack))))
        log_sweep_progress(logger, f"Polynomial code sweep s={s}", min(start + 4096, len(subsets)),
                           len(subsets))
    logger.info(f"Polynomial code worst condition number over {len(subsets)} subsets: {worst:.3g}")
    return worst


def poly_condition(plan: PolyCodePlan, workers: Sequence[int]) -> float:
    """Condition number of the interpolation matrix of a worker subset."""
    return condition_number(plan.vandermonde(workers))
