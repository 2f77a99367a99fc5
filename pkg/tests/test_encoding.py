"""Tests for class decomposition, worker plans, payloads and plan files."""

import numpy as np
import pytest
import scipy.sparse as sp
import yaml
from hypothesis import given, settings

from src.encoding import (ATask, CODED, PlanFileError, appearance_sets, build_plan,
                          decompose_classes, dump_plan, encode_blocks, load_plan, plan_from_dict,
                          plan_to_dict, save_plan)
from src.linalg import DimensionError, density, partition_columns, random_sparse_matrix
from src.scheme import SchemeParams, derive_params
from tests.conftest import cached_plan, scheme_params


class TestClasses:
    def test_class_members(self):
        classes = decompose_classes(derive_params(SchemeParams(n=12, k_a=3, k_b=3)))
        assert classes.classes[0] == (0, 4, 8)
        assert classes.ell == 4

    def test_two_member_classes(self):
        classes = decompose_classes(derive_params(SchemeParams(n=5, k_a=2, k_b=2)))
        assert classes.classes[0] == (0, 5)

    def test_singleton_classes(self):
        classes = decompose_classes(derive_params(SchemeParams(n=7, k_a=1, k_b=3)))
        assert classes.classes == tuple((m,) for m in range(7))

    @settings(max_examples=50, deadline=None)
    @given(scheme_params(max_n=30, max_k=5))
    def test_partition_of_block_indices(self, params):
        derived = derive_params(params)
        classes = decompose_classes(derived)
        flat = sorted(i for members in classes.classes for i in members)
        assert flat == list(range(derived.delta_a))
        assert all(len(members) == derived.k_a for members in classes.classes)
        assert all(classes.class_of(i) == m
                   for m, members in enumerate(classes.classes) for i in members)


class TestWorkerPlans:
    def test_worker_zero_with_three_classes(self, plan_12_3_3):
        worker = plan_12_3_3.worker(0)
        assert worker.uncoded_indices == (0, 1, 2)
        assert [t.support for t in worker.coded_tasks] == [(3, 7, 11)]
        assert worker.b.support == (0, 1)

    def test_worker_zero_with_five_classes(self, plan_5_2_2):
        worker = plan_5_2_2.worker(0)
        assert worker.uncoded_indices == (0, 1, 2, 3)
        assert [t.support for t in worker.coded_tasks] == [(4, 9)]
        assert worker.b.support == (0, 1)

    def test_relaxed_matrix_vector_worker(self, plan_5_3_1_x1):
        worker = plan_5_3_1_x1.worker(0)
        assert worker.uncoded_indices == (0, 1, 2)
        assert [t.support for t in worker.coded_tasks] == [(3, 8), (4, 9)]
        assert worker.b.support == (0,)

    def test_b_supports_wrap_cyclically(self):
        plan = cached_plan(12, 2, 5)
        assert plan.worker(0).b.support == (0, 1, 2)
        assert plan.worker(3).b.support == (3, 4, 0)
        assert plan.worker(3).b.type_id == 3

    def test_layout(self, grid_plan):
        derived = grid_plan.derived
        for worker in grid_plan.workers:
            kinds = [t.kind for t in worker.a_tasks]
            assert kinds.count(CODED) == derived.ell_c
            assert kinds[derived.p:] == [CODED] * derived.ell_c
            assert sorted(t.class_id for t in worker.a_tasks) == list(range(derived.ell))
            assert all(t.weight == derived.coded_weight_a for t in worker.coded_tasks)
            assert len(worker.b.support) == derived.zeta

    def test_coefficients_in_range(self, grid_plan):
        for worker in grid_plan.workers:
            values = np.array([c for t in worker.coded_tasks for c in t.coefficients]
                              + list(worker.b.coefficients))
            assert np.all(np.abs(values) <= 1.0)

    def test_uncoded_coefficients_are_one(self, plan_8_3_2):
        for worker in plan_8_3_2.workers:
            assert all(t.coefficients == (1.0,) for t in worker.a_tasks if not t.is_coded)

    def test_deterministic_per_seed(self):
        params = SchemeParams(n=8, k_a=3, k_b=2, seed=99)
        assert dump_plan(build_plan(params)) == dump_plan(build_plan(params))

    def test_seed_changes_coefficients(self):
        a = build_plan(SchemeParams(n=8, k_a=3, k_b=2, seed=1))
        b = build_plan(SchemeParams(n=8, k_a=3, k_b=2, seed=2))
        assert a.worker(0).coded_tasks[0].support == b.worker(0).coded_tasks[0].support
        assert a.worker(0).coded_tasks[0].coefficients != b.worker(0).coded_tasks[0].coefficients

    def test_location_table(self, plan_12_3_3):
        table = plan_12_3_3.location_table
        assert table.shape == (12, 4)
        assert table[0].tolist() == [0, 1, 2, 3]
        assert np.all(np.sort(table, axis=1) == np.arange(4))

    def test_replace_task(self, plan_12_3_3):
        task = ATask(kind=CODED, class_id=3, support=(0, 7, 11), coefficients=(0.5, 0.5, 0.5))
        mutated = plan_12_3_3.replace_task(0, 3, task)
        assert mutated.worker(0).a_tasks[3].support == (0, 7, 11)
        assert plan_12_3_3.worker(0).a_tasks[3].support == (3, 7, 11)


class TestAppearances:
    def test_equal_sizes_without_relaxation(self, plan_12_3_3):
        index = appearance_sets(plan_12_3_3)
        assert all(len(index.u(i)) == 3 and len(index.v(i)) == 3 for i in range(12))

    def test_relaxed_sizes(self, plan_5_3_1_x1):
        index = appearance_sets(plan_5_3_1_x1)
        assert len(index.u(0)) == 1
        assert len(index.v(0)) == 2
        assert len(index.v(5)) == 1
        assert len(index.v(10)) == 1

    @settings(max_examples=40, deadline=None)
    @given(scheme_params())
    def test_class_coded_totals(self, params):
        plan = build_plan(params)
        derived = plan.derived
        index = appearance_sets(plan)
        for members in decompose_classes(derived).classes:
            total = sum(len(index.v(i)) for i in members)
            assert total == derived.ell_c * derived.c * derived.coded_weight_a
            sizes = [len(index.v(i)) for i in members]
            assert max(sizes) - min(sizes) <= 1
            assert min(sizes) >= derived.s

    @settings(max_examples=40, deadline=None)
    @given(scheme_params())
    def test_uncoded_and_coded_holders_disjoint(self, params):
        plan = build_plan(params)
        index = appearance_sets(plan)
        for i in range(plan.derived.delta_a):
            assert len(index.u(i)) == plan.derived.k_b
            assert not set(index.u(i)) & set(index.v(i))


class TestPayloads:
    def test_unit_coefficients_project(self, plan_12_3_3, rng):
        task = ATask(kind=CODED, class_id=3, support=(3, 7, 11), coefficients=(1.0, 0.0, 0.0))
        plan = plan_12_3_3.replace_task(0, 3, task)
        a = partition_columns(rng.standard_normal((6, 24)), 12)
        b = partition_columns(rng.standard_normal((6, 6)), 3)
        payload = encode_blocks(a, b, plan)[0]
        np.testing.assert_array_equal(payload.a_blocks[3], a.block(3))

    def test_uncoded_payload_shares_nnz(self, plan_12_3_3):
        a = partition_columns(random_sparse_matrix(40, 24, 0.1, seed=1), 12)
        b = partition_columns(random_sparse_matrix(40, 6, 0.1, seed=2), 3)
        payloads = encode_blocks(a, b, plan_12_3_3, max_workers=2)
        assert len(payloads) == 12
        for payload in payloads:
            worker = plan_12_3_3.worker(payload.worker)
            for location, task in enumerate(worker.a_tasks):
                if not task.is_coded:
                    assert payload.a_blocks[location].nnz == a.block(task.support[0]).nnz
            assert sp.issparse(payload.b_block)

    def test_coded_payload_is_combination(self, plan_8_3_2, rng):
        a_dense = rng.standard_normal((5, 24))
        b_dense = rng.standard_normal((5, 4))
        a, b = partition_columns(a_dense, 24), partition_columns(b_dense, 2)
        payload = encode_blocks(a, b, plan_8_3_2)[1]
        worker = plan_8_3_2.worker(1)
        task = worker.coded_tasks[0]
        expected = sum(c * a.block(i) for i, c in zip(task.support, task.coefficients))
        np.testing.assert_allclose(payload.a_blocks[plan_8_3_2.derived.p], expected)
        expected_b = sum(c * b.block(j) for j, c in zip(worker.b.support, worker.b.coefficients))
        np.testing.assert_allclose(payload.b_block, expected_b)

    def test_density_report(self, plan_5_2_2):
        a = partition_columns(random_sparse_matrix(30, 10, 0.2, seed=3), 10)
        b = partition_columns(random_sparse_matrix(30, 2, 0.2, seed=4), 2)
        report = encode_blocks(a, b, plan_5_2_2)[0].density_report()
        assert report['worker'] == 0
        assert len(report['a_density']) == 5
        assert report['a_density'][0] == density(a.block(0))

    def test_partition_mismatch(self, plan_12_3_3):
        a = partition_columns(np.zeros((4, 12)), 6)
        b = partition_columns(np.zeros((4, 3)), 3)
        with pytest.raises(DimensionError):
            encode_blocks(a, b, plan_12_3_3)


class TestPlanFiles:
    def test_save_twice_is_byte_identical(self, plan_8_3_2_x1, tmp_path):
        first = save_plan(plan_8_3_2_x1, tmp_path / 'a.yaml').read_bytes()
        second = save_plan(plan_8_3_2_x1, tmp_path / 'b.yaml').read_bytes()
        assert first == second

    def test_loaded_plan_keeps_tasks(self, plan_12_3_3, tmp_path):
        loaded = load_plan(save_plan(plan_12_3_3, tmp_path / 'plan.yaml'))
        assert loaded.workers == plan_12_3_3.workers
        assert loaded.derived == plan_12_3_3.derived
        assert dump_plan(loaded) == dump_plan(plan_12_3_3)

    def test_non_finite_coefficients_stay_floats(self, plan_12_3_3, tmp_path):
        task = ATask(kind=CODED, class_id=3, support=(3, 7, 11),
                     coefficients=(float('inf'), float('nan'), float('-inf')))
        mutated = plan_12_3_3.replace_task(0, 3, task)
        path = save_plan(mutated, tmp_path / 'plan.yaml')

        raw = yaml.safe_load(path.read_text(encoding='utf-8'))
        written = raw['workers'][0]['a_tasks'][3]['coefficients']
        assert all(isinstance(c, float) for c in written)

        loaded = load_plan(path).worker(0).a_tasks[3].coefficients
        assert np.isposinf(loaded[0])
        assert np.isnan(loaded[1])
        assert np.isneginf(loaded[2])

    def test_header_and_version(self, plan_5_2_2):
        text = dump_plan(plan_5_2_2)
        assert text.startswith('# coded matrix multiplication plan')
        assert yaml.safe_load(text)['format_version'] == 1

    def test_wrong_version(self, plan_5_2_2):
        data = plan_to_dict(plan_5_2_2)
        data['format_version'] = 99
        with pytest.raises(PlanFileError, match='version'):
            plan_from_dict(data)

    def test_wrong_worker_count(self, plan_5_2_2):
        data = plan_to_dict(plan_5_2_2)
        data['workers'] = data['workers'][:-1]
        with pytest.raises(PlanFileError):
            plan_from_dict(data)

    def test_illegal_parameters(self, plan_5_2_2):
        data = plan_to_dict(plan_5_2_2)
        data['params']['n'] = 4
        with pytest.raises(PlanFileError, match='invalid plan parameters'):
            plan_from_dict(data)

    def test_support_out_of_range(self, plan_5_2_2):
        data = plan_to_dict(plan_5_2_2)
        data['workers'][0]['a_tasks'][4]['support'] = [4, 10]
        with pytest.raises(PlanFileError, match='out of range'):
            plan_from_dict(data)

    def test_unparseable_file(self, tmp_path):
        path = tmp_path / 'broken.yaml'
        path.write_text('workers: [unclosed\n', encoding='utf-8')
        with pytest.raises(PlanFileError):
            load_plan(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_plan(tmp_path / 'none.yaml')
