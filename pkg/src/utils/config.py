"""
Toolkit Configuration

Settings for every subcommand come from three layers, later ones winning:
the built-in DEFAULT_CONFIG, the YAML file (config.yaml by default) and
CODED_MATMUL_* environment variables. CLI flags are applied on top by
main.py through Config.set.

validate() reports problems the way the rest of the toolkit reports step
results: a {'valid', 'errors', 'warnings'} dict, never an exception.
"""

import copy
import hashlib
import logging
import os
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import yaml

logger = logging.getLogger(__name__)


DEFAULT_CONFIG: Dict[str, Dict[str, Any]] = {
    'general': {
        'log_level': 'INFO',
        'log_dir': './logs',
        'output_dir': './output',
    },
    'scheme': {
        'n': 12,
        'k_a': 3,
        'k_b': 3,
        'x': 0,
        'seed': 0,
    },
    'linalg': {
        'rank_rel_tol': None,        # None = 1e-10 * max(rows, cols)
        'pad': False,
    },
    'matrices': {
        'rows': 240,
        'a_cols': 240,
        'b_cols': 60,
        'density': 0.02,
        'seed': 1,
        'a_path': None,
        'b_path': None,
    },
    'analysis': {
        'exhaustive_cap': 10_000_000,
        'sample_size': 100_000,
        'resilience_cap': 1_000_000,
        'oracle_subset_max_n': 12,
        'oracle_exhaustive_max_n': 6,
        'kappa_cap': 100_000,
    },
    'simulator': {
        'cost_model': 'unit',
        'straggler_count': 0,
        'straggler_factor': 0.2,
        'max_stragglers': 6,
        'overhead': 0.0,
    },
    'baseline': {
        'points': None,              # None = 1..n
    },
    'performance': {
        'max_workers': 4,
    },
}

COST_MODELS = ('unit', 'nnz', 'analytic')
LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL')

# variable -> (section, key, parser)
ENV_OVERRIDES: Dict[str, Tuple[str, str, Callable[[str], Any]]] = {
    'CODED_MATMUL_LOG_LEVEL': ('general', 'log_level', str.upper),
    'CODED_MATMUL_OUTPUT_DIR': ('general', 'output_dir', str),
    'CODED_MATMUL_SEED': ('scheme', 'seed', int),
    'CODED_MATMUL_MAX_WORKERS': ('performance', 'max_workers', int),
}

# sections each library module reads
MODULE_SECTIONS: Dict[str, List[str]] = {
    'scheme': ['scheme'],
    'linalg': ['linalg'],
    'matrices': ['matrices'],
    'analysis': ['analysis', 'linalg', 'performance'],
    'simulator': ['simulator', 'performance'],
    'baseline': ['baseline'],
}


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _is_count(value: Any, minimum: int) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) and value >= minimum


class Config:
    """
    Layered toolkit settings.

    Attributes:
        config_path: YAML file the settings were read from (may not exist)
        config: effective settings, section -> key -> value
    """

    def __init__(self, config_file: Optional[str] = None):
        """
        Args:
            config_file (Optional[str]): YAML file to read; config.yaml when None.
                A missing or unreadable file leaves the defaults in place.
        """
        self.config_file = config_file or 'config.yaml'
        self.config_path = Path(self.config_file)
        self.config = self._read_file()
        self._apply_env_overrides()

    def _read_file(self) -> Dict[str, Any]:
        settings = copy.deepcopy(DEFAULT_CONFIG)
        if not self.config_path.exists():
            logger.debug(f"No config file at {self.config_path}; using built-in defaults")
            return settings
        try:
            with open(self.config_path, 'r', encoding='utf-8') as f:
                loaded = yaml.safe_load(f) or {}
        except (OSError, yaml.YAMLError) as e:
            logger.warning(f"Ignoring unreadable config file {self.config_path}: {e}")
            return settings
        if not isinstance(loaded, dict):
            logger.warning(f"Ignoring config file {self.config_path}: top level is not a mapping")
            return settings

        for section, values in loaded.items():
            if isinstance(values, dict) and isinstance(settings.get(section), dict):
                settings[section].update(values)
            else:
                settings[section] = values
        logger.debug(f"Loaded configuration from {self.config_path}")
        return settings

    def _apply_env_overrides(self) -> None:
        for variable, (section, key, parse) in ENV_OVERRIDES.items():
            raw = os.getenv(variable)
            if raw is None:
                continue
            self.set(section, key, parse(raw))
            logger.info(f"Environment override {variable}: {section}.{key} = {raw}")

    def get(self, section: str, key: str, default: Any = None) -> Any:
        return self.config.get(section, {}).get(key, default)

    def set(self, section: str, key: str, value: Any) -> None:
        self.config.setdefault(section, {})[key] = value

    def get_section(self, section: str) -> Dict[str, Any]:
        """Copy of one section; empty when the section does not exist."""
        return dict(self.config.get(section, {}))

    def validate(self) -> Dict[str, Any]:
        """
        Check every section against the values the toolkit can run with.

        Parameter combinations (n > k_a k_b, x < s_m, ...) are left to
        derive_params, which reports them with the derived quantities.

        Returns:
            Dict[str, Any]: {'valid': bool, 'errors': [...], 'warnings': [...]}
        """
        errors: List[str] = []
        warnings: List[str] = []

        if str(self.get('general', 'log_level')).upper() not in LOG_LEVELS:
            errors.append(f"Invalid log_level: {self.get('general', 'log_level')}")

        for key in ('n', 'k_a', 'k_b'):
            if not _is_count(self.get('scheme', key), 1):
                errors.append(f"Invalid scheme.{key}: {self.get('scheme', key)}")
        if not _is_count(self.get('scheme', 'x'), 0):
            errors.append(f"Invalid scheme.x: {self.get('scheme', 'x')}")

        density = self.get('matrices', 'density')
        if not _is_number(density) or not 0 < density <= 1:
            errors.append(f"Invalid matrices.density: {density}")
        for key in ('a_path', 'b_path'):
            path = self.get('matrices', key)
            if path is not None and not Path(path).exists():
                errors.append(f"Matrix file not found: matrices.{key} = {path}")

        if self.get('simulator', 'cost_model') not in COST_MODELS:
            errors.append(f"Invalid simulator.cost_model: {self.get('simulator', 'cost_model')}")
        factor = self.get('simulator', 'straggler_factor')
        if not _is_number(factor) or factor < 0:
            errors.append(f"Invalid simulator.straggler_factor: {factor}")
        elif factor == 0:
            warnings.append("straggler_factor is 0: slow workers are treated as failed")

        tol = self.get('linalg', 'rank_rel_tol')
        if tol is not None and (not _is_number(tol) or tol <= 0):
            errors.append(f"Invalid linalg.rank_rel_tol: {tol}")

        if not _is_count(self.get('performance', 'max_workers'), 1):
            errors.append(f"Invalid performance.max_workers: {self.get('performance', 'max_workers')}")

        return {'valid': not errors, 'errors': errors, 'warnings': warnings}

    def save(self, config_file: Optional[str] = None) -> bool:
        """
        Write the effective settings as YAML.

        Args:
            config_file (Optional[str]): target path; the file they were read from when None

        Returns:
            bool: False if the file could not be written
        """
        target = Path(config_file) if config_file else self.config_path
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            with open(target, 'w', encoding='utf-8') as f:
                yaml.safe_dump(self.config, f, default_flow_style=False, sort_keys=True, indent=2)
        except OSError as e:
            logger.error(f"Could not write configuration to {target}: {e}")
            return False
        logger.info(f"Configuration saved to {target}")
        return True

    def fingerprint(self) -> str:
        """SHA-256 of the canonical YAML dump, recorded in run manifests."""
        canonical = yaml.safe_dump(self.config, sort_keys=True, default_flow_style=True)
        return hashlib.sha256(canonical.encode('utf-8')).hexdigest()

    def get_module_config(self, module_name: str) -> Dict[str, Any]:
        """Flattened view of the sections a library module reads (general for unknown names)."""
        merged: Dict[str, Any] = {}
        for section in MODULE_SECTIONS.get(module_name, ['general']):
            merged.update(self.get_section(section))
        return merged


def load_config(config_file: Optional[str] = None) -> Config:
    return Config(config_file)
