"""Tests for run artifact export."""

from fractions import Fraction

import numpy as np
import pandas as pd
import scipy.sparse as sp
import yaml

from src.encoding import load_plan
from src.linalg import load_matrix
from src.output import MANIFEST_NAME, RunExporter


def test_tables_and_reports(tmp_path):
    exporter = RunExporter(str(tmp_path), subcommand='q-bounds')
    exporter.write_table('sweep', pd.DataFrame({'n': [12], 'q': [44.0]}))
    exporter.write_report('bounds', {'q_lb': np.int64(44), 'mu': Fraction(4, 3),
                                     'ranks': np.arange(3), 'pair': (1, 2)})
    report = yaml.safe_load((tmp_path / 'bounds.yaml').read_text())
    assert report == {'q_lb': 44, 'mu': '4/3', 'ranks': [0, 1, 2], 'pair': [1, 2]}
    assert pd.read_csv(tmp_path / 'sweep.csv')['q'].tolist() == [44.0]


def test_plan_and_matrix(tmp_path, plan_5_2_2):
    exporter = RunExporter(str(tmp_path), subcommand='multiply')
    plan_path = exporter.write_plan(plan_5_2_2)
    matrix_path = exporter.write_matrix('result', sp.identity(3, format='csr'), comment='product')
    np.testing.assert_array_equal(load_plan(plan_path).location_table, plan_5_2_2.location_table)
    np.testing.assert_array_equal(load_matrix(matrix_path).toarray(), np.eye(3))
    assert set(exporter.files) == {'plan', 'result'}


def test_manifest(tmp_path):
    exporter = RunExporter(str(tmp_path), subcommand='derive')
    exporter.write_report('derived', {'ell': 6})
    exporter.write_manifest('abc123', seed=7, extra={'n': np.int64(24)})
    manifest = yaml.safe_load((tmp_path / MANIFEST_NAME).read_text())
    assert manifest['subcommand'] == 'derive'
    assert manifest['config_hash'] == 'abc123'
    assert manifest['seed'] == 7
    assert manifest['run'] == {'n': 24}
    assert set(manifest['versions']) >= {'numpy', 'scipy', 'pandas'}
    assert exporter.validate_output() == {'valid': True, 'error': None,
                                          'files': {'derived': True}}


def test_validate_without_manifest(tmp_path):
    assert not RunExporter(str(tmp_path)).validate_output()['valid']


def test_validate_missing_file(tmp_path):
    exporter = RunExporter(str(tmp_path))
    path = exporter.write_report('report', {'ok': True})
    exporter.write_manifest('hash', seed=0)
    path.unlink()
    result = exporter.validate_output()
    assert not result['valid']
    assert result['files'] == {'report': False}
    assert 'report' in result['error']
