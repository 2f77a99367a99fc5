"""
Linear algebra module for the coded matrix multiplication toolkit.

This module provides block partitioning, block products and the numerical
kernels (rank, least squares, conditioning, Khatri-Rao) shared by the other
modules.

Modules:
- blocks: Column partitions and A_i^T B_j products with flop counts
- kernels: SVD rank, pivoted-QR least squares, condition numbers
- matrix_io: Matrix Market I/O and synthetic sparse inputs
"""

from .blocks import (Matrix, PartitionError, DimensionError, PartitionedMatrix, GramProduct,
                     partition_columns, gram_product, gram_flops, linear_combination,
                     density, is_sparse, as_csc)
from .kernels import (RankDeficientError, LeastSquaresSolution, numerical_rank, batched_ranks,
                      condition_number, batched_condition_numbers, solve_least_squares,
                      khatri_rao_columns, column_subset_stack, default_tolerance)
from .matrix_io import load_matrix, save_matrix, random_sparse_matrix, random_dense_matrix

__all__ = ['Matrix', 'PartitionError', 'DimensionError', 'PartitionedMatrix', 'GramProduct',
           'partition_columns', 'gram_product', 'gram_flops', 'linear_combination', 'density',
           'is_sparse', 'as_csc', 'RankDeficientError', 'LeastSquaresSolution',
           'numerical_rank', 'batched_ranks', 'condition_number', 'batched_condition_numbers',
           'solve_least_squares', 'khatri_rao_columns', 'column_subset_stack',
           'default_tolerance', 'load_matrix', 'save_matrix', 'random_sparse_matrix',
           'random_dense_matrix']
