"""
Scheme module for the coded matrix multiplication toolkit.

This module validates user parameters and derives the scalar quantities of
the encoding algorithm.

Modules:
- params: SchemeParams, DerivedParams and derive_params
"""

from .params import SchemeParams, DerivedParams, SchemeError, derive_params, minimal_zeta

__all__ = ['SchemeParams', 'DerivedParams', 'SchemeError', 'derive_params', 'minimal_zeta']
