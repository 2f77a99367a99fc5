"""
Scheme Decoder

Decides whether a set of finished block products determines A^T B and
recovers it. Each class is an independent system with k_a * k_b unknown
products; a class is solved by least squares over every available equation.

Key Features:
- Per-class rank reports with borderline-tolerance flags
- Least-squares recovery with residual and condition diagnostics
- Recovery from fully finished survivor sets
- Block products computed from encoded payloads for completed tasks
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..encoding import EncodingPlan, WorkerPayload
from ..generator import ClassSystem, build_class_systems
from ..linalg import RankDeficientError, default_tolerance, gram_product, numerical_rank, solve_least_squares
from .ledger import ProgressLedger

logger = logging.getLogger(__name__)


class DecodeError(ValueError):
    """Raised when the finished products do not determine A^T B."""


@dataclass(frozen=True, eq=False)
class CompletedProduct:
    """Product of worker's A block at location with its B block."""
    worker: int
    location: int
    value: np.ndarray
    flops: int = 0


@dataclass(frozen=True)
class DecodabilityReport:
    """
    Per-class ranks of the available equations.

    Attributes:
        ranks: rank of each class's available generator columns
        equations: number of available columns per class
        required: k_a * k_b
        borderline: classes whose rank changes at a 10x tighter tolerance
    """
    ranks: Tuple[int, ...]
    equations: Tuple[int, ...]
    required: int
    borderline: Tuple[int, ...] = ()

    @property
    def decodable(self) -> bool:
        return all(rank == self.required for rank in self.ranks)

    @property
    def deficient_classes(self) -> Tuple[int, ...]:
        return tuple(m for m, rank in enumerate(self.ranks) if rank < self.required)

    def to_dict(self) -> dict:
        return {
            'decodable': self.decodable,
            'required_rank': self.required,
            'class_ranks': list(self.ranks),
            'class_equations': list(self.equations),
            'borderline_classes': list(self.borderline),
        }


@dataclass(frozen=True, eq=False)
class RecoveredResult:
    """
    Recovered product A^T B.

    Attributes:
        product: tiled result (padding removed when the shape is known)
        blocks: (A block, B block) -> A_i^T B_j
        residuals: Frobenius residual norm per class
        conditions: condition number of the system solved per class
    """
    product: np.ndarray
    blocks: Dict[Tuple[int, int], np.ndarray]
    residuals: Tuple[float, ...]
    conditions: Tuple[float, ...]


class SchemeDecoder:
    """
    Decoder bound to one plan.

    Class systems are built once; is_decodable and decode then only select
    the columns that a ledger marks as finished.
    """

    def __init__(self, plan: EncodingPlan, rel_tol: Optional[float] = None,
                 max_workers: Optional[int] = None):
        """
        Initialize the decoder.

        Args:
            plan (EncodingPlan): the assignment the workers executed
            rel_tol (Optional[float]): rank tolerance; None uses the shared default
            max_workers (Optional[int]): threads for independent class solves
        """
        self.plan = plan
        self.rel_tol = rel_tol
        self.max_workers = max_workers
        self.systems: List[ClassSystem] = build_class_systems(plan)
        self.required = plan.derived.unknowns_per_class
        self._workers = [s.workers for s in self.systems]
        self._locations = [s.locations for s in self.systems]

    def available(self, ledger: ProgressLedger, m: int) -> np.ndarray:
        """Mask of class-m columns whose task is finished."""
        return self._locations[m] < ledger.counts[self._workers[m]]

    def class_rank(self, ledger: ProgressLedger, m: int, rel_tol: Optional[float] = None) -> int:
        columns = self.systems[m].g[:, self.available(ledger, m)]
        return numerical_rank(columns, self.rel_tol if rel_tol is None else rel_tol)

    def is_decodable(self, ledger: ProgressLedger) -> DecodabilityReport:
        """
        Rank report of every class for a ledger.

        Ranks that fall short only at the working tolerance are re-checked at
        a 10x tighter tolerance; disagreements are flagged as borderline.
        """
        self._check_ledger(ledger)
        ranks, equations, borderline = [], [], []
        for m, system in enumerate(self.systems):
            mask = self.available(ledger, m)
            columns = system.g[:, mask]
            rank = numerical_rank(columns, self.rel_tol)
            if rank < self.required and columns.shape[1] >= self.required:
                base = self.rel_tol if self.rel_tol is not None else default_tolerance(*columns.shape)
                if numerical_rank(columns, base / 10) != rank:
                    borderline.append(m)
                    logger.warning(f"Class {m}: rank {rank} is borderline at tolerance {base:g}")
            ranks.append(rank)
            equations.append(int(mask.sum()))
        return DecodabilityReport(ranks=tuple(ranks), equations=tuple(equations),
                                  required=self.required, borderline=tuple(borderline))

    def decodable(self, ledger: ProgressLedger) -> bool:
        """Fast yes/no check; stops at the first deficient class."""
        return all(self.class_rank(ledger, m) == self.required for m in range(len(self.systems)))

    def _check_ledger(self, ledger: ProgressLedger) -> None:
        if ledger.n != self.plan.n or ledger.ell != self.plan.ell:
            raise DecodeError(f"ledger shape ({ledger.n} workers, {ledger.ell} tasks) does not "
                              f"match the plan ({self.plan.n}, {self.plan.ell})")

    def _solve_class(self, m: int, ledger: ProgressLedger,
                     values: Dict[Tuple[int, int], np.ndarray]):
        system = self.systems[m]
        mask = self.available(ledger, m)
        chosen = [column for column, keep in zip(system.columns, mask) if keep]
        missing = [column for column in chosen if column not in values]
        if missing:
            raise DecodeError(f"class {m}: no product for finished tasks {missing[:5]}")
        rhs = np.stack([values[column] for column in chosen]) if chosen else np.zeros((0, 1, 1))
        try:
            solution = solve_least_squares(system.g[:, mask].T, rhs, self.rel_tol)
        except RankDeficientError as e:
            raise DecodeError(f"class {m} is not decodable: {e}") from e
        if solution.condition > 1e12:
            logger.warning(f"Class {m}: ill-conditioned system (kappa={solution.condition:.3g})")
        return solution

    def decode(self, ledger: ProgressLedger, products: Iterable[CompletedProduct],
               shape: Optional[Tuple[int, int]] = None) -> RecoveredResult:
        """
        Recover A^T B from the products a ledger marks as finished.

        Args:
            ledger (ProgressLedger): finished counts per worker
            products (Iterable[CompletedProduct]): at least the finished products
            shape (Optional[Tuple[int, int]]): unpadded (r, w) of A^T B

        Returns:
            RecoveredResult: tiled product with per-class diagnostics

        Raises:
            DecodeError: if a class is rank deficient, a product is missing or
                product shapes disagree
        """
        self._check_ledger(ledger)
        values: Dict[Tuple[int, int], np.ndarray] = {}
        block_shape = None
        for product in products:
            value = np.asarray(product.value, dtype=np.float64)
            if block_shape is None:
                block_shape = value.shape
            elif value.shape != block_shape:
                raise DecodeError(f"product shape {value.shape} differs from {block_shape}")
            values[(product.worker, product.location)] = value
        if block_shape is None:
            raise DecodeError("no products supplied")

        classes = range(len(self.systems))
        if self.max_workers and self.max_workers > 1:
            with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
                solutions = list(pool.map(lambda m: self._solve_class(m, ledger, values), classes))
        else:
            solutions = [self._solve_class(m, ledger, values) for m in classes]

        derived = self.plan.derived
        wa, wb = block_shape
        product = np.zeros((derived.delta_a * wa, derived.k_b * wb))
        blocks: Dict[Tuple[int, int], np.ndarray] = {}
        for system, solution in zip(self.systems, solutions):
            for row, (i, j) in enumerate(system.unknowns):
                blocks[(i, j)] = solution.solution[row]
                product[i * wa:(i + 1) * wa, j * wb:(j + 1) * wb] = solution.solution[row]
        if shape is not None:
            product = product[:shape[0], :shape[1]]

        residuals = tuple(s.residual_norm for s in solutions)
        logger.info(f"Decoded {len(blocks)} blocks, max class residual {max(residuals):.3g}")
        return RecoveredResult(product=product, blocks=blocks, residuals=residuals,
                               conditions=tuple(s.condition for s in solutions))

    def decode_from_survivors(self, products: Iterable[CompletedProduct], survivors: Sequence[int],
                              shape: Optional[Tuple[int, int]] = None) -> RecoveredResult:
        """
        Recover A^T B from workers that finished every task.

        Raises:
            DecodeError: if fewer than tau workers survive
        """
        survivors = sorted(set(survivors))
        if len(survivors) < self.plan.derived.tau:
            raise DecodeError(f"{len(survivors)} survivors are fewer than the recovery "
                              f"threshold {self.plan.derived.tau}")
        ledger = ProgressLedger.from_survivors(self.plan.n, self.plan.ell, survivors)
        return self.decode(ledger, products, shape)


def compute_products(payloads: Sequence[WorkerPayload], ledger: ProgressLedger) -> List[CompletedProduct]:
    """Multiply the finished A blocks of each worker with its B block."""
    products = []
    for payload in payloads:
        for location in range(int(ledger.counts[payload.worker])):
            result = gram_product(payload.a_blocks[location], payload.b_block)
            products.append(CompletedProduct(worker=payload.worker, location=location,
                                             value=result.value, flops=result.flops))
    return products


def is_decodable(ledger: ProgressLedger, plan: EncodingPlan) -> DecodabilityReport:
    return SchemeDecoder(plan).is_decodable(ledger)


def decode(ledger: ProgressLedger, products: Iterable[CompletedProduct], plan: EncodingPlan,
           shape: Optional[Tuple[int, int]] = None) -> RecoveredResult:
    return SchemeDecoder(plan).decode(ledger, products, shape)


def decode_from_survivors(plan: EncodingPlan, products: Iterable[CompletedProduct],
                          survivors: Sequence[int],
                          shape: Optional[Tuple[int, int]] = None) -> RecoveredResult:
    return SchemeDecoder(plan).decode_from_survivors(products, survivors, shape)
