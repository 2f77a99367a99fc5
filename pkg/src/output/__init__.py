"""
Output module for the coded matrix multiplication toolkit.

This module writes run artifacts and their manifests.

Modules:
- export: RunExporter for plans, tables, reports, matrices and manifests
"""

from .export import MANIFEST_NAME, RunExporter, package_versions

__all__ = ['MANIFEST_NAME', 'RunExporter', 'package_versions']
