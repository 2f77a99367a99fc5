"""
Run Export Module

This module writes the artifacts of one CLI run into its output directory
and records a manifest beside them.

Key Features:
- Plan files, Matrix Market results, CSV tables and YAML reports
- manifest.yaml with config hash, seed, package versions and timestamp
- Deterministic artifact bytes for a fixed configuration and seed
- Output validation against the manifest
"""

import logging
import platform
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd
import scipy
import yaml

from ..encoding import EncodingPlan, save_plan
from ..linalg import Matrix, save_matrix

logger = logging.getLogger(__name__)

MANIFEST_NAME = 'manifest.yaml'


def package_versions() -> Dict[str, str]:
    """Versions of the numerical stack, recorded in every manifest."""
    return {
        'python': platform.python_version(),
        'numpy': np.__version__,
        'scipy': scipy.__version__,
        'pandas': pd.__version__,
        'pyyaml': yaml.__version__,
    }


class RunExporter:
    """
    Collects the artifacts of one run in a single directory.

    Every write is recorded so the manifest can list the produced files.
    Artifacts carry no timestamps; only the manifest does.
    """

    def __init__(self, output_dir: Optional[str] = None, subcommand: str = 'run'):
        """
        Initialize the exporter.

        Args:
            output_dir (Optional[str]): Directory for the artifacts.
                                      If None, uses './output'.
            subcommand (str): CLI subcommand that produced the run
        """
        self.output_path = Path(output_dir or './output')
        self.output_path.mkdir(parents=True, exist_ok=True)
        self.subcommand = subcommand
        self.files: Dict[str, str] = {}

        self.export_params = {
            'csv_float_format': '%.17g',
            'report_sort_keys': False,
        }

    def _record(self, name: str, path: Path) -> Path:
        self.files[name] = str(path)
        logger.info(f"Wrote {name}: {path}")
        return path

    def write_plan(self, plan: EncodingPlan, filename: str = 'plan.yaml') -> Path:
        return self._record('plan', save_plan(plan, self.output_path / filename))

    def write_table(self, name: str, frame: pd.DataFrame) -> Path:
        """
        Write a table as CSV.

        Args:
            name (str): artifact name, also the file stem
            frame (pd.DataFrame): table to write

        Returns:
            Path: written file
        """
        path = self.output_path / f"{name}.csv"
        frame.to_csv(path, index=False, float_format=self.export_params['csv_float_format'])
        return self._record(name, path)

    def write_report(self, name: str, report: Dict[str, Any]) -> Path:
        """Write a structured report as YAML."""
        path = self.output_path / f"{name}.yaml"
        with open(path, 'w', encoding='utf-8') as f:
            yaml.safe_dump(_plain(report), f, sort_keys=self.export_params['report_sort_keys'],
                           default_flow_style=False)
        return self._record(name, path)

    def write_matrix(self, name: str, matrix: Matrix, comment: str = '') -> Path:
        return self._record(name, save_matrix(self.output_path / f"{name}.mtx", matrix, comment))

    def write_manifest(self, config_hash: str, seed: int, extra: Optional[Dict[str, Any]] = None) -> Path:
        """
        Write manifest.yaml for the run.

        Args:
            config_hash (str): fingerprint of the effective configuration
            seed (int): scheme seed of the run
            extra (Optional[Dict[str, Any]]): additional run facts

        Returns:
            Path: manifest path
        """
        manifest = {
            'subcommand': self.subcommand,
            'created_at': datetime.now().isoformat(timespec='seconds'),
            'config_hash': config_hash,
            'seed': int(seed),
            'versions': package_versions(),
            'files': dict(sorted(self.files.items())),
        }
        if extra:
            manifest['run'] = _plain(extra)
        path = self.output_path / MANIFEST_NAME
        with open(path, 'w', encoding='utf-8') as f:
            yaml.safe_dump(manifest, f, sort_keys=False, default_flow_style=False)
        logger.info(f"Run manifest written: {path}")
        return path

    def validate_output(self) -> Dict[str, Any]:
        """
        Check that the manifest exists and every file it lists is present.

        Returns:
            Dict[str, Any]: {'valid', 'error', 'files'} validation results
        """
        path = self.output_path / MANIFEST_NAME
        if not path.exists():
            return {'valid': False, 'error': 'manifest not found', 'files': {}}
        with open(path, 'r', encoding='utf-8') as f:
            manifest = yaml.safe_load(f) or {}
        files = {name: Path(p).exists() for name, p in manifest.get('files', {}).items()}
        missing: List[str] = [name for name, found in files.items() if not found]
        return {'valid': not missing,
                'error': f"missing files: {missing}" if missing else None,
                'files': files}


def _plain(value: Any) -> Any:
    """Convert numpy scalars, tuples and fractions into YAML-safe values."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (bool, int, float, str)) or value is None:
        return value
    return str(value)
