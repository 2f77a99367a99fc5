"""
Generator module for the coded matrix multiplication toolkit.

This module materializes the per-class generator matrices used for decoding
and rank analysis.

Modules:
- generator: BGenerator, ClassSystem, RiMatrix and their builders
"""

from .generator import (UnsupportedOperationError, BGenerator, ClassSystem, RiMatrix,
                        build_GB, build_class_system, build_class_systems, extract_Ri)

__all__ = ['UnsupportedOperationError', 'BGenerator', 'ClassSystem', 'RiMatrix', 'build_GB',
           'build_class_system', 'build_class_systems', 'extract_Ri']
