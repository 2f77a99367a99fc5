"""
Analysis module for the coded matrix multiplication toolkit.

This module computes the Q metric, conditioning sweeps and sparsity costs of
a plan, and verifies its structural guarantees.

Modules:
- qmetric: Closed-form Q bounds, worst-case ledgers and the Q oracle
- conditioning: Worst-case condition numbers over straggler choices
- sparsity: Expected per-worker flops against a dense-coded baseline
- properties: Property verifier suites and their reports
"""

from .qmetric import (OracleTooLargeError, QBounds, OracleResult, QOracle, eta_max_products,
                      q_bounds, coprime_q, coprime_q_gap, worst_pattern_ledger, q_exact_oracle)
from .conditioning import ConditioningReport, kappa_worst, straggler_subsets, survivor_columns
from .sparsity import SparsityCostReport, predicted_density, cost_ratio, sparsity_cost_model
from .properties import (CheckResult, PropertyReport, verify_assignment_properties,
                         verify_type_structure, verify_resilience, verify_q_bounds)

__all__ = ['OracleTooLargeError', 'QBounds', 'OracleResult', 'QOracle', 'eta_max_products',
           'q_bounds', 'coprime_q', 'coprime_q_gap', 'worst_pattern_ledger', 'q_exact_oracle',
           'ConditioningReport', 'kappa_worst', 'straggler_subsets', 'survivor_columns',
           'SparsityCostReport', 'predicted_density', 'cost_ratio', 'sparsity_cost_model',
           'CheckResult', 'PropertyReport', 'verify_assignment_properties',
           'verify_type_structure', 'verify_resilience', 'verify_q_bounds']
