"""
Block-Partitioned Matrices

Column-block partitioning of dense (numpy) and sparse (scipy CSC) matrices,
and the block product A_i^T B_j that every worker computes.

Key Features:
- Column partitions with optional zero padding and exact re-assembly
- Sparse x sparse products through scipy's SpGEMM, dense products otherwise
- Structural multiply-add counting used by the flop cost model
"""

import logging
from dataclasses import dataclass, field
from typing import List, Union

import numpy as np
import scipy.sparse as sp

logger = logging.getLogger(__name__)

Matrix = Union[np.ndarray, sp.spmatrix]


class PartitionError(ValueError):
    """Raised when a matrix cannot be split into the requested block-columns."""


class DimensionError(ValueError):
    """Raised when operand shapes do not agree."""


def is_sparse(matrix: Matrix) -> bool:
    return sp.issparse(matrix)


def as_csc(matrix: Matrix) -> sp.csc_matrix:
    """Convert to CSC with sorted indices and no stored zeros."""
    csc = sp.csc_matrix(matrix, dtype=np.float64)
    csc.eliminate_zeros()
    csc.sort_indices()
    return csc


@dataclass(frozen=True, eq=False)
class PartitionedMatrix:
    """
    A matrix split into equal-width block-columns.

    Attributes:
        matrix: the (possibly padded) t x cols matrix, ndarray or CSC
        block_count: number of block-columns
        original_cols: column count before padding
        blocks: the block-columns, addressable by index
    """
    matrix: Matrix
    block_count: int
    original_cols: int
    blocks: List[Matrix] = field(repr=False, compare=False)

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    @property
    def block_width(self) -> int:
        return self.cols // self.block_count

    @property
    def padding(self) -> int:
        """Number of trailing zero columns added by padding."""
        return self.cols - self.original_cols

    @property
    def sparse(self) -> bool:
        return is_sparse(self.matrix)

    def block(self, index: int) -> Matrix:
        return self.blocks[index]

    def assemble(self) -> Matrix:
        """Re-assemble the blocks and drop the padding columns."""
        if self.sparse:
            whole = sp.hstack(self.blocks, format='csc')
        else:
            whole = np.hstack(self.blocks)
        return whole[:, :self.original_cols]


def partition_columns(matrix: Matrix, blocks: int, pad: bool = False) -> PartitionedMatrix:
    """
    Split a matrix into equal-width block-columns.

    Args:
        matrix (Matrix): t x cols dense array or sparse matrix
        blocks (int): number of block-columns
        pad (bool): append zero columns when blocks does not divide cols

    Returns:
        PartitionedMatrix: the partition; dense blocks are views, sparse
            blocks are CSC column slices

    Raises:
        PartitionError: on a non-positive block count, or indivisible
            dimensions without pad
    """
    if blocks < 1:
        raise PartitionError(f"block count must be positive, got {blocks}")

    if is_sparse(matrix):
        work = as_csc(matrix)
    else:
        work = np.asarray(matrix, dtype=np.float64)
        if work.ndim == 1:
            work = work.reshape(-1, 1)
    rows, cols = work.shape

    remainder = cols % blocks
    if remainder:
        if not pad:
            raise PartitionError(
                f"{cols} columns are not divisible into {blocks} block-columns (use pad)")
        extra = blocks - remainder
        logger.debug(f"Padding {rows}x{cols} matrix with {extra} zero columns")
        if is_sparse(work):
            work = sp.hstack([work, sp.csc_matrix((rows, extra))], format='csc')
        else:
            work = np.hstack([work, np.zeros((rows, extra))])

    width = work.shape[1] // blocks
    parts = [work[:, b * width:(b + 1) * width] for b in range(blocks)]
    return PartitionedMatrix(matrix=work, block_count=blocks, original_cols=cols, blocks=parts)


@dataclass(frozen=True, eq=False)
class GramProduct:
    """Result of A_i^T B_j with its structural flop count (2 x multiply-adds)."""
    value: np.ndarray
    flops: int


def gram_flops(a_block: Matrix, b_block: Matrix) -> int:
    """
    Flop count of A_i^T B_j for the kernel that would compute it.

    Sparse x sparse counts structural multiply-adds, i.e. the sum over rows k
    of nnz(A row k) * nnz(B row k). Any dense operand means the dense kernel,
    which performs t * w_a * w_b multiply-adds.

    Returns:
        int: 2 x multiply-add count
    """
    if a_block.shape[0] != b_block.shape[0]:
        raise DimensionError(f"row counts differ: {a_block.shape} vs {b_block.shape}")
    if is_sparse(a_block) and is_sparse(b_block):
        a_rows = np.diff(sp.csr_matrix(a_block).indptr)
        b_rows = np.diff(sp.csr_matrix(b_block).indptr)
        return int(2 * np.dot(a_rows.astype(np.int64), b_rows.astype(np.int64)))
    t, w_a = a_block.shape
    return int(2 * t * w_a * b_block.shape[1])


def gram_product(a_block: Matrix, b_block: Matrix) -> GramProduct:
    """
    Compute A_i^T B_j.

    Args:
        a_block (Matrix): t x w_a block of A (dense or sparse)
        b_block (Matrix): t x w_b block of B (dense or sparse)

    Returns:
        GramProduct: dense w_a x w_b value and its flop count

    Raises:
        DimensionError: if the row counts differ
    """
    if a_block.shape[0] != b_block.shape[0]:
        raise DimensionError(f"row counts differ: {a_block.shape} vs {b_block.shape}")

    flops = gram_flops(a_block, b_block)
    if is_sparse(a_block) and is_sparse(b_block):
        value = (sp.csc_matrix(a_block).T @ sp.csc_matrix(b_block)).toarray()
    elif is_sparse(a_block):
        value = np.asarray(a_block.T @ b_block)
    elif is_sparse(b_block):
        value = np.asarray((b_block.T @ a_block).T)
    else:
        value = np.asarray(a_block).T @ np.asarray(b_block)
    return GramProduct(value=np.asarray(value, dtype=np.float64), flops=flops)


def density(matrix: Matrix) -> float:
    """Fraction of non-zero entries."""
    total = matrix.shape[0] * matrix.shape[1]
    if total == 0:
        return 0.0
    nnz = matrix.count_nonzero() if is_sparse(matrix) else np.count_nonzero(matrix)
    return nnz / total


def linear_combination(blocks: List[Matrix], coefficients) -> Matrix:
    """
    Weighted sum of equally shaped blocks, staying sparse when the inputs are.

    Args:
        blocks (List[Matrix]): blocks to combine
        coefficients: one real weight per block

    Returns:
        Matrix: the combination (CSC without stored zeros, or ndarray)
    """
    if len(blocks) != len(coefficients):
        raise DimensionError(f"{len(blocks)} blocks but {len(coefficients)} coefficients")
    if all(is_sparse(b) for b in blocks):
        total = sp.csc_matrix(blocks[0].shape, dtype=np.float64)
        for block, coefficient in zip(blocks, coefficients):
            total = total + float(coefficient) * block
        return as_csc(total)
    total = np.zeros(blocks[0].shape)
    for block, coefficient in zip(blocks, coefficients):
        dense = block.toarray() if is_sparse(block) else block
        total += float(coefficient) * dense
    return total
