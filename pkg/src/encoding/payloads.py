"""
Worker Payloads

Materializes the linear combinations of an EncodingPlan: for each worker the
ell A-side blocks in task order and the single coded B block.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional

from ..linalg import DimensionError, Matrix, PartitionedMatrix, density, linear_combination
from .plan import EncodingPlan, WorkerPlan

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class WorkerPayload:
    """Encoded blocks held by one worker; a_blocks[location] pairs with b_block."""
    worker: int
    a_blocks: List[Matrix]
    b_block: Matrix

    def density_report(self) -> dict:
        return {
            'worker': self.worker,
            'a_density': [density(block) for block in self.a_blocks],
            'b_density': density(self.b_block),
        }


class PayloadEncoder:
    """
    Encodes partitioned A and B according to a plan.

    Uncoded A blocks are handed out by reference; coded blocks are weighted
    sums that stay sparse when the inputs are sparse.
    """

    def __init__(self, plan: EncodingPlan, max_workers: Optional[int] = None):
        """
        Initialize the encoder.

        Args:
            plan (EncodingPlan): assignment to materialize
            max_workers (Optional[int]): thread count for per-worker encoding;
                None or 1 encodes sequentially
        """
        self.plan = plan
        self.max_workers = max_workers

    def check_partitions(self, a: PartitionedMatrix, b: PartitionedMatrix) -> None:
        derived = self.plan.derived
        if a.block_count != derived.delta_a:
            raise DimensionError(f"A has {a.block_count} block-columns, plan needs {derived.delta_a}")
        if b.block_count != derived.delta_b:
            raise DimensionError(f"B has {b.block_count} block-columns, plan needs {derived.delta_b}")
        if a.rows != b.rows:
            raise DimensionError(f"A has {a.rows} rows but B has {b.rows}")

    def encode_worker(self, worker: WorkerPlan, a: PartitionedMatrix,
                      b: PartitionedMatrix) -> WorkerPayload:
        a_blocks = []
        for task in worker.a_tasks:
            if task.is_coded:
                a_blocks.append(linear_combination([a.block(i) for i in task.support],
                                                   task.coefficients))
            else:
                a_blocks.append(a.block(task.support[0]))
        b_block = linear_combination([b.block(j) for j in worker.b.support], worker.b.coefficients)
        return WorkerPayload(worker=worker.worker, a_blocks=a_blocks, b_block=b_block)

    def encode(self, a: PartitionedMatrix, b: PartitionedMatrix) -> List[WorkerPayload]:
        self.check_partitions(a, b)
        if self.max_workers and self.max_workers > 1:
            with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
                payloads = list(pool.map(lambda w: self.encode_worker(w, a, b), self.plan.workers))
        else:
            payloads = [self.encode_worker(w, a, b) for w in self.plan.workers]
        logger.info(f"Encoded payloads for {len(payloads)} workers")
        return payloads


def encode_blocks(a: PartitionedMatrix, b: PartitionedMatrix, plan: EncodingPlan,
                  max_workers: Optional[int] = None) -> List[WorkerPayload]:
    """
    Build every worker's encoded blocks.

    Args:
        a (PartitionedMatrix): A split into Delta_A block-columns
        b (PartitionedMatrix): B split into k_b block-columns
        plan (EncodingPlan): the assignment
        max_workers (Optional[int]): optional thread pool size

    Returns:
        List[WorkerPayload]: payloads in worker order

    Raises:
        DimensionError: if the partitions do not match the plan
    """
    return PayloadEncoder(plan, max_workers).encode(a, b)
