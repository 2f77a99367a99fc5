"""
Numerical Kernels

Rank, conditioning, least-squares and Khatri-Rao kernels shared by the
generator, decoder, baseline and analysis modules. Batched variants work on
stacks of equally shaped matrices so that subset sweeps can hand numpy a
single call per subset size.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

logger = logging.getLogger(__name__)

DEFAULT_REL_TOL = 1e-10


class RankDeficientError(ValueError):
    """Raised when a linear system does not determine all unknowns."""


def default_tolerance(rows: int, cols: int) -> float:
    """Relative singular-value tolerance 1e-10 * max(rows, cols)."""
    return DEFAULT_REL_TOL * max(rows, cols, 1)


def numerical_rank(matrix: np.ndarray, rel_tol: Optional[float] = None) -> int:
    """
    Count singular values above rel_tol * sigma_max.

    Args:
        matrix (np.ndarray): finite real matrix
        rel_tol (Optional[float]): relative tolerance; None uses
            1e-10 * max(rows, cols)

    Returns:
        int: numerical rank
    """
    matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    if matrix.size == 0:
        return 0
    tol = default_tolerance(*matrix.shape) if rel_tol is None else rel_tol
    singular = np.linalg.svd(matrix, compute_uv=False)
    if singular[0] == 0.0:
        return 0
    return int(np.count_nonzero(singular > tol * singular[0]))


def batched_ranks(stack: np.ndarray, rel_tol: Optional[float] = None) -> np.ndarray:
    """
    Numerical ranks of a stack of matrices, shape (batch, rows, cols).

    Returns:
        np.ndarray: integer rank per matrix
    """
    stack = np.asarray(stack, dtype=np.float64)
    if stack.shape[0] == 0:
        return np.zeros(0, dtype=int)
    if stack.shape[1] == 0 or stack.shape[2] == 0:
        return np.zeros(stack.shape[0], dtype=int)
    tol = default_tolerance(stack.shape[1], stack.shape[2]) if rel_tol is None else rel_tol
    singular = np.linalg.svd(stack, compute_uv=False)
    top = singular[:, :1]
    return np.count_nonzero((singular > tol * top) & (top > 0), axis=1)


def condition_number(matrix: np.ndarray) -> float:
    """
    sigma_max / sigma_min over the min(rows, cols) singular values.

    Args:
        matrix (np.ndarray): non-zero real matrix, rectangular allowed

    Returns:
        float: condition number; +inf when sigma_min underflows

    Raises:
        ValueError: for an empty or all-zero matrix
    """
    matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    if matrix.size == 0:
        raise ValueError("condition number of an empty matrix")
    singular = np.linalg.svd(matrix, compute_uv=False)
    if singular[0] == 0.0:
        raise ValueError("condition number of a zero matrix")
    smallest = singular[-1]
    if smallest < np.finfo(np.float64).tiny:
        return float('inf')
    return float(singular[0] / smallest)


def batched_condition_numbers(stack: np.ndarray) -> np.ndarray:
    """Condition numbers of a stack of matrices; +inf where sigma_min underflows."""
    stack = np.asarray(stack, dtype=np.float64)
    if stack.shape[0] == 0:
        return np.zeros(0)
    singular = np.linalg.svd(stack, compute_uv=False)
    smallest = singular[:, -1]
    kappa = np.full(stack.shape[0], np.inf)
    ok = smallest >= np.finfo(np.float64).tiny
    kappa[ok] = singular[ok, 0] / smallest[ok]
    return kappa


@dataclass(frozen=True, eq=False)
class LeastSquaresSolution:
    """Solution blocks of a stacked block system and its diagnostics."""
    solution: np.ndarray
    residual_norm: float
    rank: int
    condition: float


def solve_least_squares(matrix: np.ndarray, rhs: np.ndarray,
                        rel_tol: Optional[float] = None) -> LeastSquaresSolution:
    """
    Minimum-residual solve of M X = rhs for stacked right-hand-side blocks.

    Uses a column-pivoted QR factorization (LAPACK geqp3; pivot ties go to
    the lowest column index). Every unknown must be determined.

    Args:
        matrix (np.ndarray): equations x unknowns coefficient matrix
        rhs (np.ndarray): equations x ... stacked right-hand-side blocks
        rel_tol (Optional[float]): rank tolerance, see numerical_rank

    Returns:
        LeastSquaresSolution: unknowns x ... solution blocks, Frobenius
            residual norm, rank and condition number of M

    Raises:
        RankDeficientError: if the numerical rank is below the unknown count
    """
    matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
    rhs = np.asarray(rhs, dtype=np.float64)
    equations, unknowns = matrix.shape
    if rhs.shape[0] != equations:
        raise ValueError(f"rhs has {rhs.shape[0]} equations, matrix has {equations}")

    rank = numerical_rank(matrix, rel_tol)
    if rank < unknowns:
        raise RankDeficientError(f"rank {rank} < {unknowns} unknowns")

    block_shape = rhs.shape[1:]
    flat_rhs = rhs.reshape(equations, -1)

    q, r, pivots = scipy.linalg.qr(matrix, mode='economic', pivoting=True)
    permuted = scipy.linalg.solve_triangular(r[:unknowns, :unknowns], q[:, :unknowns].T @ flat_rhs)
    flat_solution = np.empty_like(permuted)
    flat_solution[pivots] = permuted

    residual = float(np.linalg.norm(matrix @ flat_solution - flat_rhs))
    return LeastSquaresSolution(
        solution=flat_solution.reshape((unknowns,) + block_shape),
        residual_norm=residual,
        rank=rank,
        condition=condition_number(matrix),
    )


def khatri_rao_columns(g_a: np.ndarray, g_b: np.ndarray) -> np.ndarray:
    """
    Column-wise Kronecker product of a k_a x n and a k_b x n matrix.

    Column j of the result is kron(g_a[:, j], g_b[:, j]), so row
    alpha * k_b + beta holds g_a[alpha, j] * g_b[beta, j].

    Returns:
        np.ndarray: (k_a * k_b) x n matrix

    Raises:
        ValueError: if the column counts differ
    """
    g_a = np.atleast_2d(np.asarray(g_a, dtype=np.float64))
    g_b = np.atleast_2d(np.asarray(g_b, dtype=np.float64))
    if g_a.shape[1] != g_b.shape[1]:
        raise ValueError(f"column counts differ: {g_a.shape[1]} vs {g_b.shape[1]}")
    return np.einsum('aj,bj->abj', g_a, g_b).reshape(-1, g_a.shape[1])


def column_subset_stack(matrix: np.ndarray, subsets: Sequence[Sequence[int]]) -> np.ndarray:
    """Stack matrix[:, subset] for equally sized subsets, shape (len, rows, size)."""
    index = np.asarray(subsets, dtype=np.intp)
    if index.size == 0:
        return np.zeros((0, matrix.shape[0], 0))
    return np.transpose(matrix[:, index], (1, 0, 2))
