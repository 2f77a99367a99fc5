"""
Baseline module for the coded matrix multiplication toolkit.

This module provides the polynomial-code comparison scheme: dense encoding,
Vandermonde decoding and its conditioning sweep.

Modules:
- poly_code: PolyCodePlan, poly_plan, poly_encode, poly_decode, poly_kappa_worst
"""

from .poly_code import (BaselineError, PolyCodePlan, poly_plan, poly_encode, poly_decode,
                        poly_kappa_worst, poly_condition)

__all__ = ['BaselineError', 'PolyCodePlan', 'poly_plan', 'poly_encode', 'poly_decode',
           'poly_kappa_worst', 'poly_condition']
