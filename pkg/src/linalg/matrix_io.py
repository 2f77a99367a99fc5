"""
Matrix I/O

Matrix Market load/store for A, B and recovered products, plus the seeded
synthetic sparse generator used when no input files are given.
"""

import logging
from pathlib import Path
from typing import Union

import numpy as np
import scipy.io
import scipy.sparse as sp

from .blocks import Matrix, as_csc, is_sparse

logger = logging.getLogger(__name__)


def load_matrix(path: Union[str, Path]) -> Matrix:
    """
    Load a Matrix Market file.

    Coordinate files come back as CSC matrices, array files as dense arrays.

    Args:
        path: .mtx file path

    Returns:
        Matrix: float64 ndarray or CSC matrix

    Raises:
        FileNotFoundError: if the file does not exist
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Matrix file not found: {path}")

    loaded = scipy.io.mmread(str(path))
    if sp.issparse(loaded):
        matrix = as_csc(loaded)
    else:
        matrix = np.asarray(loaded, dtype=np.float64)
    logger.info(f"Loaded {matrix.shape[0]}x{matrix.shape[1]} "
                f"{'sparse' if is_sparse(matrix) else 'dense'} matrix from {path}")
    return matrix


def save_matrix(path: Union[str, Path], matrix: Matrix, comment: str = '') -> Path:
    """
    Write a matrix in Matrix Market format with 17 significant digits.

    Sparse matrices use the coordinate format and dense ones the array format.

    Returns:
        Path: the written file
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    target = as_csc(matrix) if is_sparse(matrix) else np.asarray(matrix, dtype=np.float64)
    scipy.io.mmwrite(str(path), target, comment=comment, field='real',
                     precision=17, symmetry='general')
    logger.debug(f"Wrote {target.shape[0]}x{target.shape[1]} matrix to {path}")
    return path


def random_sparse_matrix(rows: int, cols: int, density: float, seed: int) -> sp.csc_matrix:
    """
    Synthetic sparse matrix with Bernoulli(density) support.

    Each column draws its non-zero count from Binomial(rows, density) and then
    that many distinct rows uniformly, which gives the same distribution as
    independent per-entry Bernoulli trials. Values are uniform on (-1, 1).

    Args:
        rows (int): row count
        cols (int): column count
        density (float): per-entry non-zero probability in (0, 1]
        seed (int): generator seed

    Returns:
        sp.csc_matrix: rows x cols matrix without stored zeros
    """
    if not 0.0 < density <= 1.0:
        raise ValueError(f"density must lie in (0, 1], got {density}")
    if rows < 1 or cols < 1:
        raise ValueError(f"matrix dimensions must be positive, got {rows}x{cols}")

    rng = np.random.default_rng(seed)
    counts = rng.binomial(rows, density, size=cols)
    indptr = np.zeros(cols + 1, dtype=np.int64)
    np.cumsum(counts, out=indptr[1:])

    indices = np.empty(indptr[-1], dtype=np.int64)
    for col in range(cols):
        chosen = rng.choice(rows, size=counts[col], replace=False)
        indices[indptr[col]:indptr[col + 1]] = np.sort(chosen)

    # Exclude exact zeros so every drawn position stays structural
    values = rng.uniform(-1.0, 1.0, size=indptr[-1])
    values[values == 0.0] = 0.5

    matrix = sp.csc_matrix((values, indices, indptr), shape=(rows, cols))
    logger.debug(f"Generated {rows}x{cols} sparse matrix, density {density}, nnz {matrix.nnz}")
    return matrix


def random_dense_matrix(rows: int, cols: int, seed: int) -> np.ndarray:
    """Dense matrix with i.i.d. uniform(-1, 1) entries."""
    return np.random.default_rng(seed).uniform(-1.0, 1.0, size=(rows, cols))
