"""
Property Verifiers

Executable checks of the structural guarantees of an assignment plan. Each
verifier returns a PropertyReport with one CheckResult per property and a
counterexample for every failure, so that the CLI can print it and exit
non-zero.

Suites:
- verify_assignment_properties: worker layout, class coverage, coded balance,
  appearance counts and disjointness, per-class totals, mu_m audit
- verify_type_structure: consecutive B types of every A block and full rank
  of every k_b x k_b submatrix of R_i (x = 0 only)
- verify_resilience: every straggler choice of size s leaves every class
  system with full rank
- verify_q_bounds: worst-case pattern and oracle against the closed forms
"""

import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

import numpy as np

from ..decoder import SchemeDecoder
from ..encoding import EncodingPlan, appearance_sets, decompose_classes
from ..generator import UnsupportedOperationError, build_class_systems, extract_Ri
from ..linalg import batched_ranks
from ..utils.logging import log_execution_time
from .conditioning import straggler_subsets, survivor_columns
from .qmetric import OracleTooLargeError, QOracle, q_bounds, worst_pattern_ledger

logger = logging.getLogger(__name__)

RANK_TOL = 1e-10
RESILIENCE_CAP = 1_000_000
SAMPLE_SIZE = 100_000
CHUNK = 4096


@dataclass
class CheckResult:
    """Outcome of one property check."""
    name: str
    passed: bool
    checked: int = 0
    counterexample: Optional[Dict[str, Any]] = None
    exhaustive: bool = True

    def to_dict(self) -> dict:
        return {'name': self.name, 'passed': self.passed, 'checked': self.checked,
                'exhaustive': self.exhaustive, 'counterexample': self.counterexample}


@dataclass
class PropertyReport:
    """
    Results of one verifier suite.

    Attributes:
        suite: verifier name
        checks: one CheckResult per property
        mu: average coded appearances per class (assignment suite only)
    """
    suite: str
    checks: List[CheckResult] = field(default_factory=list)
    mu: Dict[int, Fraction] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def exhaustive(self) -> bool:
        return all(check.exhaustive for check in self.checks)

    @property
    def failures(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]

    def check(self, name: str) -> CheckResult:
        for result in self.checks:
            if result.name == name:
                return result
        raise KeyError(name)

    def add(self, name: str, counterexample: Optional[Dict[str, Any]], checked: int,
            exhaustive: bool = True) -> None:
        self.checks.append(CheckResult(name=name, passed=counterexample is None, checked=checked,
                                       counterexample=counterexample, exhaustive=exhaustive))
        if counterexample is not None:
            logger.warning(f"{self.suite}: {name} failed: {counterexample}")

    def to_dict(self) -> dict:
        return {
            'suite': self.suite,
            'passed': self.passed,
            'exhaustive': self.exhaustive,
            'mu': {int(m): str(value) for m, value in sorted(self.mu.items())},
            'checks': [check.to_dict() for check in self.checks],
        }


def _first(items) -> Optional[Dict[str, Any]]:
    return next(iter(items), None)


def _cyclic_run(positions: List[int], modulus: int) -> bool:
    """True if positions are start, start + 1, ... taken mod modulus."""
    return all((positions[0] + t) % modulus == pos for t, pos in enumerate(positions))


def verify_assignment_properties(plan: EncodingPlan) -> PropertyReport:
    """
    Check the worker layout and appearance structure of a plan.

    Args:
        plan (EncodingPlan): any plan, including hand-edited ones

    Returns:
        PropertyReport: per-check results plus mu_m for every class
    """
    derived = plan.derived
    classes = decompose_classes(derived)
    index = appearance_sets(plan)
    report = PropertyReport(suite='assignment')
    weight = derived.coded_weight_a

    def layout():
        for w in plan.workers:
            kinds = [t.is_coded for t in w.a_tasks]
            expected = [False] * derived.p + [True] * derived.ell_c
            if kinds != expected:
                yield {'worker': w.worker, 'coded_flags': kinds}
            for location, task in enumerate(w.coded_tasks):
                if task.weight != weight:
                    yield {'worker': w.worker, 'coded_task': location, 'weight': task.weight,
                           'expected': weight}

    def coded_supports():
        for w in plan.workers:
            for task in w.coded_tasks:
                members = classes.classes[task.class_id]
                if any(i not in members for i in task.support):
                    yield {'worker': w.worker, 'class': task.class_id, 'support': list(task.support)}
                    continue
                positions = [classes.position_of(i) for i in task.support]
                if not _cyclic_run(positions, derived.k_a):
                    yield {'worker': w.worker, 'class': task.class_id, 'positions': positions}

    def class_coverage():
        for w in plan.workers:
            seen = Counter(t.class_id for t in w.a_tasks)
            if sorted(seen) != list(range(plan.ell)) or any(c != 1 for c in seen.values()):
                yield {'worker': w.worker, 'class_counts': dict(sorted(seen.items()))}

    def group_locations():
        table = plan.location_table
        for g, members in enumerate(plan.groups):
            for m in range(plan.ell):
                found = sorted(int(table[w, m]) for w in members)
                if found != list(range(plan.ell)):
                    yield {'group': g, 'class': m, 'locations': found}

    def coded_balance():
        for m, members in enumerate(classes.classes):
            sizes = [len(index.v(i)) for i in members]
            if max(sizes) - min(sizes) > 1:
                yield {'class': m, 'coded_counts': dict(zip(members, sizes))}

    def uncoded_counts():
        for i in range(derived.delta_a):
            if len(index.u(i)) != derived.k_b:
                yield {'block': i, 'uncoded_workers': list(index.u(i)), 'expected': derived.k_b}

    def coded_counts():
        for i in range(derived.delta_a):
            if len(index.v(i)) < derived.s:
                yield {'block': i, 'coded_workers': list(index.v(i)), 'expected_at_least': derived.s}

    def disjoint():
        for i in range(derived.delta_a):
            both = sorted(set(index.u(i)) & set(index.v(i)))
            if both:
                yield {'block': i, 'workers_in_both': both}

    def class_totals():
        for m, members in enumerate(classes.classes):
            uncoded = set().union(*(index.u(i) for i in members))
            coded = set().union(*(index.v(i) for i in members))
            if len(uncoded) != derived.unknowns_per_class or len(coded) != derived.s_m or uncoded & coded:
                yield {'class': m, 'uncoded_workers': len(uncoded), 'coded_workers': len(coded),
                       'overlap': sorted(uncoded & coded)}

    target_mu = Fraction(derived.s_m * weight, derived.k_a)

    for m, members in enumerate(classes.classes):
        report.mu[m] = Fraction(sum(len(index.v(i)) for i in members), derived.k_a)

    def mu_audit():
        for m, members in enumerate(classes.classes):
            sizes = [len(index.v(i)) for i in members]
            mu = report.mu[m]
            low, high = math.floor(mu), math.ceil(mu)
            if mu != target_mu or any(not low <= size <= high for size in sizes):
                yield {'class': m, 'mu': str(mu), 'expected': str(target_mu), 'coded_counts': sizes}

    blocks = derived.delta_a
    report.add('worker_layout', _first(layout()), plan.n)
    report.add('coded_support', _first(coded_supports()), plan.n * derived.ell_c)
    report.add('class_coverage', _first(class_coverage()), plan.n)
    report.add('group_locations', _first(group_locations()), derived.c * plan.ell)
    report.add('coded_balance', _first(coded_balance()), plan.ell)
    report.add('uncoded_count', _first(uncoded_counts()), blocks)
    report.add('coded_count', _first(coded_counts()), blocks)
    report.add('appearance_disjoint', _first(disjoint()), blocks)
    report.add('class_worker_totals', _first(class_totals()), plan.ell)
    report.add('mu_audit', _first(mu_audit()), plan.ell)
    logger.info(f"Assignment properties: {len(report.checks) - len(report.failures)}"
                f"/{len(report.checks)} passed")
    return report


def verify_type_structure(plan: EncodingPlan, rel_tol: float = RANK_TOL) -> PropertyReport:
    """
    Check the B-type structure seen by every A block.

    Every block must be held by sigma workers whose types are sigma cyclically
    consecutive values mod k_b, and every k_b columns of its R_i matrix must
    be linearly independent.

    Raises:
        UnsupportedOperationError: if the plan has x > 0
    """
    derived = plan.derived
    if derived.x > 0:
        raise UnsupportedOperationError(f"type structure is only defined for x = 0 "
                                        f"(plan has x={derived.x})")
    k_b, sigma = derived.k_b, derived.sigma
    report = PropertyReport(suite='type_structure')
    matrices = [extract_Ri(plan, i) for i in range(derived.delta_a)]

    def consecutive_types():
        for ri in matrices:
            found = Counter(ri.types)
            if len(ri.types) != sigma or not any(
                    found == Counter((start + t) % k_b for t in range(sigma)) for start in range(k_b)):
                yield {'block': ri.submatrix, 'workers': list(ri.workers), 'types': list(ri.types)}

    def full_rank_subsets():
        for ri in matrices:
            columns = ri.matrix.shape[1]
            if columns < k_b:
                yield {'block': ri.submatrix, 'columns': columns}
                continue
            subsets = np.array(list(itertools.combinations(range(columns), k_b)), dtype=np.intp)
            stack = np.transpose(ri.matrix[:, subsets], (1, 0, 2))
            ranks = batched_ranks(stack, rel_tol)
            bad = np.nonzero(ranks < k_b)[0]
            if len(bad):
                yield {'block': ri.submatrix,
                       'workers': [ri.workers[j] for j in subsets[bad[0]]],
                       'rank': int(ranks[bad[0]])}

    subset_count = math.comb(sigma, k_b)
    report.add('consecutive_types', _first(consecutive_types()), derived.delta_a)
    report.add('ri_full_rank', _first(full_rank_subsets()), derived.delta_a * subset_count)
    logger.info(f"Type structure: {'pass' if report.passed else 'FAIL'} over "
                f"{derived.delta_a} blocks x {subset_count} subsets")
    return report


@log_execution_time
def verify_resilience(plan: EncodingPlan, s: Optional[int] = None, cap: int = RESILIENCE_CAP,
                      sample_size: int = SAMPLE_SIZE, seed: int = 0,
                      rel_tol: Optional[float] = None) -> PropertyReport:
    """
    Check that losing any s workers leaves every class decodable.

    All C(n, s) choices are checked when there are at most cap of them,
    otherwise sample_size random choices. With s = s_m - x the surviving
    systems are exactly the (k_a k_b) x tau column subsets of each class
    generator.

    Args:
        plan (EncodingPlan): the assignment
        s (Optional[int]): number of lost workers; defaults to s_m - x
        cap (int): largest exhaustive sweep
        sample_size (int): sampled sweep size beyond cap
        seed (int): sampling seed
        rel_tol (Optional[float]): rank tolerance

    Returns:
        PropertyReport: one 'resilience' check with the first failing choice
    """
    derived = plan.derived
    s = derived.s if s is None else s
    if not 0 <= s <= plan.n:
        raise ValueError(f"s={s} must lie in [0, {plan.n}]")
    report = PropertyReport(suite='resilience')

    systems = build_class_systems(plan)
    column_maps = []
    for system in systems:
        column_of = {w: j for j, (w, _) in enumerate(system.columns)}
        column_maps.append(np.array([column_of.get(w, -1) for w in range(plan.n)]))

    limit = cap if math.comb(plan.n, s) <= cap else sample_size
    stragglers, exhaustive = straggler_subsets(plan.n, s, limit, seed)
    survivors = survivor_columns(plan.n, stragglers)
    required = derived.unknowns_per_class

    counterexample = None
    for m, system in enumerate(systems):
        mapped = column_maps[m][survivors]
        if np.any(mapped < 0):
            row = int(np.nonzero(np.any(mapped < 0, axis=1))[0][0])
            counterexample = {'stragglers': stragglers[row].tolist(), 'class': m,
                              'reason': 'survivor without a task of this class'}
            break
        for start in range(0, len(mapped), CHUNK):
            chunk = mapped[start:start + CHUNK]
            stack = np.transpose(system.g[:, chunk], (1, 0, 2))
            ranks = batched_ranks(stack, rel_tol)
            bad = np.nonzero(ranks < required)[0]
            if len(bad):
                row = start + int(bad[0])
                counterexample = {'stragglers': stragglers[row].tolist(), 'class': m,
                                  'rank': int(ranks[bad[0]]), 'required': required}
                break
        if counterexample is not None:
            break

    report.add('resilience', counterexample, len(stragglers), exhaustive)
    logger.info(f"Resilience to {s} stragglers: {'pass' if report.passed else 'FAIL'} "
                f"({len(stragglers)} subsets, {'exhaustive' if exhaustive else 'sampled'})")
    return report


def verify_q_bounds(plan: EncodingPlan, oracle_max_n: int = 12,
                    rel_tol: Optional[float] = None) -> PropertyReport:
    """
    Check the closed-form Q bounds against the plan.

    The withheld-block pattern must hold at least Q_lb - 1 products and stay
    non-decodable; where the subset oracle runs, its Q must lie in
    [Q_lb, Q_ub] and equal both when x = 0.
    """
    bounds = q_bounds(plan.derived)
    report = PropertyReport(suite='q_bounds')
    decoder = SchemeDecoder(plan, rel_tol)

    pattern = worst_pattern_ledger(plan)
    problem = None
    if pattern.total < bounds.q_lb - 1:
        problem = {'pattern_total': pattern.total, 'needed': bounds.q_lb - 1}
    elif decoder.decodable(pattern):
        problem = {'pattern_total': pattern.total, 'counts': pattern.counts.tolist(),
                   'reason': 'pattern decodes'}
    report.add('worst_pattern', problem, 1)

    if plan.n <= oracle_max_n:
        try:
            result = QOracle(plan, rel_tol, subset_max_n=oracle_max_n).run('subset')
        except OracleTooLargeError as e:
            logger.warning(f"Q oracle skipped: {e}")
            return report
        problem = None
        if not bounds.q_lb <= result.q <= bounds.q_ub:
            problem = {'oracle_q': result.q, 'q_lb': bounds.q_lb, 'q_ub': bounds.q_ub,
                       'counts': list(result.worst_counts)}
        report.add('oracle_within_bounds', problem, 1)
    return report
