"""
Worst-Case Conditioning

Condition numbers of the per-class decoding systems that remain after a
set of s workers is lost entirely. Each straggler choice leaves one
(k_a k_b) x (n - s) system per class; the system's condition number is the
largest over its classes.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from ..encoding import EncodingPlan
from ..generator import build_class_systems
from ..linalg import batched_condition_numbers
from ..utils.logging import log_execution_time, log_sweep_progress

logger = logging.getLogger(__name__)

CHUNK = 4096
QUANTILES = (0.5, 0.9, 0.99, 1.0)


@dataclass(frozen=True)
class ConditioningReport:
    """
    Result of a straggler-subset conditioning sweep.

    Attributes:
        stragglers: number of lost workers s
        kappa_worst: maximum condition number over the checked subsets
        worst_stragglers: lost workers of the maximizing subset
        worst_class: class whose system attains the maximum
        quantiles: per-subset condition number quantiles
        subsets_checked: number of straggler choices evaluated
        exhaustive: every choice was evaluated
    """
    stragglers: int
    kappa_worst: float
    worst_stragglers: Tuple[int, ...]
    worst_class: int
    quantiles: Dict[float, float] = field(default_factory=dict)
    subsets_checked: int = 0
    exhaustive: bool = True

    def to_dict(self) -> dict:
        return {
            'stragglers': self.stragglers,
            'kappa_worst': self.kappa_worst,
            'worst_stragglers': list(self.worst_stragglers),
            'worst_class': self.worst_class,
            'quantiles': {str(q): v for q, v in self.quantiles.items()},
            'subsets_checked': self.subsets_checked,
            'exhaustive': self.exhaustive,
        }


def straggler_subsets(n: int, s: int, cap: int, seed: int) -> Tuple[np.ndarray, bool]:
    """
    Straggler choices to evaluate: all C(n, s) when there are at most cap,
    otherwise cap distinct-member random draws (duplicates possible).

    Returns:
        (subsets, exhaustive): sorted index rows of shape (count, s)
    """
    total = math.comb(n, s)
    if total <= cap:
        subsets = np.array(list(itertools.combinations(range(n), s)), dtype=np.intp)
        return subsets.reshape(total, s), True
    logger.warning(f"Sampling {cap} of {total} straggler subsets")
    rng = np.random.default_rng(seed)
    draws = np.array([np.sort(rng.choice(n, size=s, replace=False)) for _ in range(cap)],
                     dtype=np.intp).reshape(cap, s)
    return draws, False


def survivor_columns(n: int, stragglers: np.ndarray) -> np.ndarray:
    keep = np.ones((len(stragglers), n), dtype=bool)
    rows = np.repeat(np.arange(len(stragglers)), stragglers.shape[1])
    keep[rows, stragglers.ravel()] = False
    return np.nonzero(keep)[1].reshape(len(stragglers), n - stragglers.shape[1])


@log_execution_time
def kappa_worst(plan: EncodingPlan, s: int, cap: int = 100_000, seed: int = 0) -> ConditioningReport:
    """
    Worst condition number over all choices of s fully lost workers.

    Args:
        plan (EncodingPlan): the assignment
        s (int): number of lost workers, at most s_m - x
        cap (int): largest number of subsets swept exhaustively
        seed (int): seed for subset sampling beyond cap

    Returns:
        ConditioningReport: maximum, argmax and quantiles

    Raises:
        ValueError: if s exceeds the tolerated straggler count
    """
    derived = plan.derived
    if not 0 <= s <= derived.s:
        raise ValueError(f"s={s} must lie in [0, {derived.s}] for this plan")
    systems = build_class_systems(plan)
    matrices = []
    for system in systems:
        column_of = {w: j for j, (w, _) in enumerate(system.columns)}
        if len(column_of) != plan.n or len(system.columns) != plan.n:
            raise ValueError(f"class {system.class_id} does not have one task per worker")
        matrices.append(system.g[:, [column_of[w] for w in range(plan.n)]])

    stragglers, exhaustive = straggler_subsets(plan.n, s, cap, seed)
    survivors = survivor_columns(plan.n, stragglers)

    per_subset = np.zeros(len(survivors))
    per_class_argmax = np.zeros(len(survivors), dtype=np.int64)
    for start in range(0, len(survivors), CHUNK):
        chunk = survivors[start:start + CHUNK]
        kappas = np.stack([batched_condition_numbers(np.transpose(g[:, chunk], (1, 0, 2)))
                           for g in matrices], axis=1)
        per_subset[start:start + CHUNK] = kappas.max(axis=1)
        per_class_argmax[start:start + CHUNK] = kappas.argmax(axis=1)
        log_sweep_progress(logger, f"Conditioning sweep s={s}", min(start + CHUNK, len(survivors)),
                           len(survivors))

    worst = int(np.argmax(per_subset))
    # no interpolation, so infinite entries stay well defined
    quantiles = {q: float(np.quantile(per_subset, q, method='lower')) for q in QUANTILES}
    report = ConditioningReport(
        stragglers=s, kappa_worst=float(per_subset[worst]),
        worst_stragglers=tuple(int(w) for w in stragglers[worst]),
        worst_class=int(per_class_argmax[worst]), quantiles=quantiles,
        subsets_checked=len(per_subset), exhaustive=exhaustive)
    logger.info(f"Worst condition number with {s} stragglers: {report.kappa_worst:.4g} "
                f"(class {report.worst_class}, lost {list(report.worst_stragglers)})")
    return report
