"""
Q Metric

The number of in-order block products, counted over all workers, that is
always enough to decode. Provides the closed-form bounds, the worst-case
non-decodable ledger construction and a brute-force oracle for small plans.

Key Features:
- eta_max_products: most products a ledger can hold while a class has
  fewer than kappa finished appearances
- q_bounds / coprime_q / coprime_q_gap closed forms
- worst_pattern_ledger: a non-decodable ledger of maximal size
- QOracle: exact Q by per-class subset search or full ledger enumeration
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np

from ..decoder import ProgressLedger
from ..encoding import AppearanceIndex, EncodingPlan, appearance_sets, decompose_classes
from ..generator import build_class_systems
from ..linalg import batched_ranks, default_tolerance
from ..scheme import DerivedParams
from ..utils.logging import log_execution_time

logger = logging.getLogger(__name__)

SUBSET_MAX_N = 12
EXHAUSTIVE_MAX_N = 6
EXHAUSTIVE_MAX_LEDGERS = 10_000_000


class OracleTooLargeError(ValueError):
    """Raised when an oracle mode is requested for a plan that is too large."""


def eta_max_products(derived: DerivedParams, kappa: int) -> int:
    """
    Largest ledger total with some class finished at no more than kappa - 1 workers.

    eta = n (ell - 1) / 2 + c * sum_{i < c_1} (ell - i) + c_2 (ell - c_1)
    with c_1 = floor((kappa - 1) / c) and c_2 = kappa - 1 - c c_1.

    Args:
        derived (DerivedParams): derived scheme quantities
        kappa (int): appearance count in [1, n + 1]

    Returns:
        int: eta

    Raises:
        ValueError: if kappa is out of range
    """
    n, ell, c = derived.n, derived.ell, derived.c
    if not 1 <= kappa <= n + 1:
        raise ValueError(f"kappa={kappa} must lie in [1, {n + 1}]")
    c1, c2 = divmod(kappa - 1, c)
    levels = c1 * ell - c1 * (c1 - 1) // 2
    return n * (ell - 1) // 2 + c * levels + c2 * (ell - c1)


@dataclass(frozen=True)
class QBounds:
    """
    Lower and upper bounds on Q.

    Attributes:
        q_lb, q_ub: the bounds (equal when x = 0)
        c1, c2: level split of tau - 1 appearances used by the upper bound
        eta_lb, eta_ub: eta at k_a k_b and at tau
        delta: number of unknown block products
    """
    q_lb: int
    q_ub: int
    c1: int
    c2: int
    eta_lb: int
    eta_ub: int
    delta: int

    @property
    def q_over_delta(self) -> Tuple[float, float]:
        return self.q_lb / self.delta, self.q_ub / self.delta

    def to_dict(self) -> dict:
        low, high = self.q_over_delta
        return {'Q_lb': self.q_lb, 'Q_ub': self.q_ub, 'c1': self.c1, 'c2': self.c2,
                'eta_lb': self.eta_lb, 'eta_ub': self.eta_ub, 'Delta': self.delta,
                'Q_lb/Delta': round(low, 6), 'Q_ub/Delta': round(high, 6)}


def q_bounds(derived: DerivedParams) -> QBounds:
    """
    Closed-form bounds on Q.

    Q_ub = eta(tau) + 1 and Q_lb = eta(k_a k_b) + ceil(s_m y / k_a) + 1.

    Returns:
        QBounds: exact integers; q_lb == q_ub when x = 0
    """
    unknowns = derived.unknowns_per_class
    eta_lb = eta_max_products(derived, unknowns)
    eta_ub = eta_max_products(derived, derived.tau)
    c1, c2 = divmod(derived.tau - 1, derived.c)
    q_lb = eta_lb + -(-derived.s_m * derived.y // derived.k_a) + 1
    return QBounds(q_lb=q_lb, q_ub=eta_ub + 1, c1=c1, c2=c2, eta_lb=eta_lb, eta_ub=eta_ub,
                   delta=derived.delta)


def coprime_q(derived: DerivedParams) -> Fraction:
    """
    Q for coprime n and k_a with x = 0.

    Q = Delta + s_m (n + k_a k_b - 1) / 2 - s_m, so Q / Delta is close to
    1 + s_m / n when s_m is small.

    Raises:
        ValueError: if n and k_a share a factor or x > 0
    """
    if derived.c != 1 or derived.x != 0:
        raise ValueError(f"closed form needs gcd(n, k_a) = 1 and x = 0 "
                         f"(got c={derived.c}, x={derived.x})")
    return (derived.delta + Fraction(derived.s_m * (derived.n + derived.unknowns_per_class - 1), 2)
            - derived.s_m)


def coprime_q_gap(derived: DerivedParams) -> int:
    """
    Q_ub - Q_lb = s_m x - x (x - 1) / 2 for coprime n and k_a.

    Agrees with q_bounds whenever ceil(s_m y / k_a) = x.
    """
    if derived.c != 1:
        raise ValueError(f"closed form needs gcd(n, k_a) = 1 (got c={derived.c})")
    x = derived.x
    return derived.s_m * x - x * (x - 1) // 2


def _class_pattern(plan: EncodingPlan, index: AppearanceIndex, m: int,
                   target: int) -> Tuple[int, np.ndarray]:
    """
    Non-decodable ledger that withholds block target of class m.

    Every worker stops just before its class-m task, then every worker whose
    class-m task does not involve the target block finishes, and so do all
    but one of the workers holding the target uncoded (the one with the
    largest class-m location stays stopped). The target then appears in only
    k_b - 1 finished products.
    """
    locations = plan.location_table[:, m]
    counts = locations.copy()
    holders = index.u(target)
    kept_back = max(holders, key=lambda w: (locations[w], w)) if holders else None
    withheld = set(index.v(target)) | ({kept_back} if kept_back is not None else set())
    for worker in range(plan.n):
        if worker not in withheld:
            counts[worker] = plan.ell
    return int(counts.sum()), counts


def worst_pattern_ledger(plan: EncodingPlan, target_total: Optional[int] = None) -> ProgressLedger:
    """
    Largest non-decodable ledger of the withheld-block construction.

    Tries every block of every class and keeps the largest total; ties go to
    the lowest class and block. With target_total the ledger is trimmed down
    to that total, which keeps it non-decodable since decodability is
    monotone.

    Args:
        plan (EncodingPlan): the assignment
        target_total (Optional[int]): desired total, e.g. Q_lb - 1

    Returns:
        ProgressLedger: a non-decodable ledger

    Raises:
        ValueError: if target_total exceeds what the construction reaches
    """
    if np.any(plan.location_table < 0):
        raise ValueError("every worker must touch every class exactly once")
    classes = decompose_classes(plan.derived)
    index = appearance_sets(plan)
    best_total, best_counts = -1, None
    for m, members in enumerate(classes.classes):
        for target in members:
            total, counts = _class_pattern(plan, index, m, target)
            if total > best_total:
                best_total, best_counts = total, counts
    logger.debug(f"Worst withheld-block pattern holds {best_total} products")

    if target_total is not None:
        if target_total > best_total:
            raise ValueError(f"requested total {target_total} exceeds the construction's {best_total}")
        excess = best_total - target_total
        for worker in reversed(range(plan.n)):
            cut = min(excess, int(best_counts[worker]))
            best_counts[worker] -= cut
            excess -= cut
            if excess == 0:
                break
    return ProgressLedger(ell=plan.ell, counts=best_counts)


@dataclass(frozen=True)
class OracleResult:
    """
    Exact Q of a plan.

    Attributes:
        q: 1 + largest non-decodable ledger total
        mode: 'subset' or 'exhaustive'
        worst_class: class that is deficient in the maximizing ledger
        worst_counts: the maximizing non-decodable ledger
        borderline: a maximizing rank decision changed at a 10x tighter tolerance
    """
    q: int
    mode: str
    worst_class: int
    worst_counts: Tuple[int, ...]
    borderline: bool = False


class QOracle:
    """
    Brute-force Q for small plans.

    Subset mode (n <= 12): for each class, the best non-decodable ledger
    finishes a set S of workers and stops all others just before that
    class, so Q = 1 + max over classes and rank-deficient S of
    |S| ell + sum_{i not in S} loc(m, i).

    Exhaustive mode (n <= 6): enumerates all (ell + 1)^n ledgers.
    """

    def __init__(self, plan: EncodingPlan, rel_tol: Optional[float] = None,
                 subset_max_n: int = SUBSET_MAX_N, exhaustive_max_n: int = EXHAUSTIVE_MAX_N):
        if np.any(plan.location_table < 0):
            raise ValueError("every worker must touch every class exactly once")
        self.plan = plan
        self.rel_tol = rel_tol
        self.limits = {'subset': subset_max_n, 'exhaustive': exhaustive_max_n}
        self.systems = build_class_systems(plan)
        self.required = plan.derived.unknowns_per_class

    def _deficient_masks(self, m: int) -> Tuple[np.ndarray, np.ndarray]:
        """
        Rank deficiency of class m for every worker subset, indexed by bitmask.

        Returns:
            (deficient, borderline) boolean arrays of length 2^n
        """
        n = self.plan.n
        system = self.systems[m]
        column_of = {w: j for j, (w, _) in enumerate(system.columns)}
        g = system.g[:, [column_of[w] for w in range(n)]]

        deficient = np.ones(1 << n, dtype=bool)
        borderline = np.zeros(1 << n, dtype=bool)
        for size in range(self.required, n + 1):
            subsets = np.array(list(itertools.combinations(range(n), size)), dtype=np.intp)
            masks = (np.left_shift(1, subsets)).sum(axis=1)
            stack = np.transpose(g[:, subsets], (1, 0, 2))
            tol = self.rel_tol if self.rel_tol is not None else default_tolerance(*stack.shape[1:])
            ranks = batched_ranks(stack, tol)
            short = ranks < self.required
            deficient[masks] = short
            if np.any(short):
                tight = batched_ranks(stack[short], tol / 10)
                borderline[masks[short]] = tight != ranks[short]
        return deficient, borderline

    def _check_size(self, mode: str) -> None:
        if self.plan.n > self.limits[mode]:
            raise OracleTooLargeError(f"{mode} oracle supports n <= {self.limits[mode]}, "
                                      f"plan has n={self.plan.n}")
        if mode == 'exhaustive' and (self.plan.ell + 1) ** self.plan.n > EXHAUSTIVE_MAX_LEDGERS:
            raise OracleTooLargeError(f"{(self.plan.ell + 1) ** self.plan.n} ledgers exceed "
                                      f"{EXHAUSTIVE_MAX_LEDGERS}")

    @log_execution_time
    def run(self, mode: str = 'subset') -> OracleResult:
        """
        Compute Q exactly.

        Raises:
            OracleTooLargeError: if the plan exceeds the mode's size limit
            ValueError: on an unknown mode
        """
        if mode not in self.limits:
            raise ValueError(f"unknown oracle mode {mode!r}")
        self._check_size(mode)
        result = self._subset() if mode == 'subset' else self._exhaustive()
        if result.borderline:
            logger.warning("Oracle maximum relies on a borderline rank decision")
        logger.info(f"Q oracle ({mode}) = {result.q}")
        return result

    def _subset(self) -> OracleResult:
        n, ell = self.plan.n, self.plan.ell
        bits = np.arange(1 << n)
        members = ((bits[:, None] >> np.arange(n)) & 1).astype(bool)
        best = (-1, 0, None, False)
        for m in range(ell):
            deficient, borderline = self._deficient_masks(m)
            locations = self.plan.location_table[:, m]
            totals = np.where(members, ell, locations[None, :]).sum(axis=1)
            totals = np.where(deficient, totals, -1)
            mask = int(np.argmax(totals))
            if totals[mask] > best[0]:
                counts = np.where(members[mask], ell, locations)
                best = (int(totals[mask]), m, tuple(int(c) for c in counts), bool(borderline[mask]))
        total, m, counts, flagged = best
        return OracleResult(q=total + 1, mode='subset', worst_class=m, worst_counts=counts,
                            borderline=flagged)

    def _exhaustive(self) -> OracleResult:
        n, ell = self.plan.n, self.plan.ell
        ledgers = np.array(list(itertools.product(range(ell + 1), repeat=n)), dtype=np.int64)
        totals = ledgers.sum(axis=1)
        weights = np.left_shift(1, np.arange(n))

        infeasible = np.zeros(len(ledgers), dtype=bool)
        flagged = np.zeros(len(ledgers), dtype=bool)
        culprit = np.full(len(ledgers), -1)
        for m in range(ell):
            deficient, borderline = self._deficient_masks(m)
            finished = ledgers > self.plan.location_table[:, m][None, :]
            masks = (finished * weights).sum(axis=1)
            hit = deficient[masks] & ~infeasible
            culprit[hit] = m
            flagged |= deficient[masks] & borderline[masks]
            infeasible |= deficient[masks]

        scored = np.where(infeasible, totals, -1)
        index = int(np.argmax(scored))
        return OracleResult(q=int(scored[index]) + 1, mode='exhaustive',
                            worst_class=int(culprit[index]),
                            worst_counts=tuple(int(c) for c in ledgers[index]),
                            borderline=bool(flagged[index]))


def q_exact_oracle(plan: EncodingPlan, mode: str = 'subset', rel_tol: Optional[float] = None) -> int:
    """
    Exact Q of a small plan.

    Args:
        plan (EncodingPlan): the assignment
        mode (str): 'subset' (n <= 12) or 'exhaustive' (n <= 6)
        rel_tol (Optional[float]): rank tolerance

    Returns:
        int: Q

    Raises:
        OracleTooLargeError: if the plan is too large for the mode
    """
    return QOracle(plan, rel_tol).run(mode).q


