"""
Decoder module for the coded matrix multiplication toolkit.

This module tracks partial worker progress, decides decodability and
recovers A^T B from finished block products.

Modules:
- ledger: ProgressLedger and record_completion
- decode: SchemeDecoder and the module-level decode helpers
"""

from .ledger import LedgerError, ProgressLedger, record_completion
from .decode import (DecodeError, CompletedProduct, DecodabilityReport, RecoveredResult,
                     SchemeDecoder, compute_products, is_decodable, decode, decode_from_survivors)

__all__ = ['LedgerError', 'ProgressLedger', 'record_completion', 'DecodeError',
           'CompletedProduct', 'DecodabilityReport', 'RecoveredResult', 'SchemeDecoder',
           'compute_products', 'is_decodable', 'decode', 'decode_from_survivors']
