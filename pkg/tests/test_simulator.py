"""Tests for the timeline simulator, cost models and sweeps."""

import numpy as np
import pytest

from src.analysis import q_bounds
from src.baseline import poly_encode, poly_plan
from src.decoder import SchemeDecoder
from src.encoding import encode_blocks
from src.linalg import partition_columns, random_sparse_matrix
from src.simulator import (SWEEP_COLUMNS, CostModel, SimulationCase, SimulationError,
                           SpeedProfile, TaskCosts, compare_overall, poly_time_to_decode,
                           run_case, simulate_poly_timeline, simulate_timeline, time_to_decode)
from tests.conftest import cached_plan


def _unit(plan):
    return CostModel('unit').scheme_costs(plan)


class TestSpeedProfile:

    def test_first_workers_are_slowed(self):
        speeds = SpeedProfile.with_stragglers(6, count=2, factor=0.25)
        np.testing.assert_array_equal(speeds.speeds, [0.25, 0.25, 1, 1, 1, 1])
        assert speeds.stragglers == (0, 1)

    def test_seeded_choice_is_reproducible(self):
        first = SpeedProfile.with_stragglers(10, count=3, seed=7)
        second = SpeedProfile.with_stragglers(10, count=3, seed=7)
        assert first.stragglers == second.stragglers
        assert len(set(first.stragglers)) == 3

    def test_explicit_workers(self):
        speeds = SpeedProfile.with_stragglers(5, factor=0.0, workers=[4, 2])
        assert speeds.stragglers == (2, 4)
        assert speeds.speeds[4] == 0.0

    @pytest.mark.parametrize('kwargs', [
        dict(n=4, count=1, factor=1.5),
        dict(n=4, count=5),
        dict(n=4, workers=[4]),
    ])
    def test_rejected(self, kwargs):
        with pytest.raises(SimulationError):
            SpeedProfile.with_stragglers(**kwargs)

    def test_negative_speed(self):
        with pytest.raises(SimulationError):
            SpeedProfile(speeds=np.array([1.0, -1.0]))


class TestCostModels:

    def test_unknown_model(self):
        with pytest.raises(SimulationError, match='unknown cost model'):
            CostModel('wallclock')

    def test_analytic_needs_density(self):
        with pytest.raises(SimulationError):
            CostModel('analytic')

    def test_nnz_needs_payloads(self, plan_5_2_2):
        with pytest.raises(SimulationError):
            CostModel('nnz').scheme_costs(plan_5_2_2)

    def test_unit_baseline_costs_ell(self):
        costs = CostModel('unit').baseline_costs(poly_plan(5, 2, 2), ell=5)
        np.testing.assert_array_equal(costs.costs, np.full((5, 1), 5.0))

    def test_analytic_coded_tasks_scale_with_weight(self, plan_5_2_2):
        costs = CostModel('analytic', density=0.01, rows=100, a_cols=50, b_cols=20)
        table = costs.scheme_costs(plan_5_2_2).costs
        compared = 0
        for worker in plan_5_2_2.workers:
            uncoded = [j for j, t in enumerate(worker.a_tasks) if not t.is_coded]
            for j, task in enumerate(worker.a_tasks):
                if task.is_coded and uncoded:
                    assert table[worker.worker, j] == pytest.approx(
                        task.weight * table[worker.worker, uncoded[0]])
                    compared += 1
        assert compared > 0

    def test_nnz_costs_follow_payloads(self, plan_5_2_2):
        a = random_sparse_matrix(40, 20, 0.1, seed=1)
        b = random_sparse_matrix(40, 4, 0.1, seed=2)
        payloads = encode_blocks(partition_columns(a, plan_5_2_2.derived.delta_a),
                                 partition_columns(b, plan_5_2_2.derived.k_b), plan_5_2_2)
        costs = CostModel('nnz').scheme_costs(plan_5_2_2, payloads)
        assert costs.costs.shape == (5, 5)
        assert np.all(costs.costs >= 0)
        assert costs.per_worker.shape == (5,)


class TestTimeline:

    def test_uniform_unit_times(self, plan_5_2_2):
        timeline = simulate_timeline(plan_5_2_2, SpeedProfile.uniform(5), _unit(plan_5_2_2))
        assert len(timeline) == 25
        frame = timeline.to_frame()
        for worker, events in frame.groupby('worker'):
            np.testing.assert_array_equal(events['time'], np.arange(1, 6))
            np.testing.assert_array_equal(events['location'], np.arange(5))
        np.testing.assert_array_equal(timeline.finish_times, np.full(5, 5.0))

    def test_events_are_ordered(self, plan_8_3_2):
        speeds = SpeedProfile(speeds=np.linspace(0.3, 1.0, 8))
        timeline = simulate_timeline(plan_8_3_2, speeds, _unit(plan_8_3_2), overhead=0.1)
        assert np.all(np.diff(timeline.times) >= 0)
        assert timeline.ledger_at(len(timeline)).total == 8 * plan_8_3_2.ell

    def test_faster_workers_halve_times(self, plan_8_3_2):
        speeds = SpeedProfile.with_stragglers(8, count=2)
        slow = simulate_timeline(plan_8_3_2, speeds, _unit(plan_8_3_2))
        fast = simulate_timeline(plan_8_3_2, speeds.scaled(2.0), _unit(plan_8_3_2))
        np.testing.assert_allclose(fast.times, slow.times / 2)

    def test_failed_workers_produce_no_events(self, plan_5_2_2):
        speeds = SpeedProfile.with_stragglers(5, factor=0.0, workers=[3])
        timeline = simulate_timeline(plan_5_2_2, speeds, _unit(plan_5_2_2))
        assert 3 not in timeline.workers
        assert np.isinf(timeline.finish_times[3])
        assert len(timeline) == 20

    def test_cost_shape_mismatch(self, plan_5_2_2):
        with pytest.raises(SimulationError):
            simulate_timeline(plan_5_2_2, SpeedProfile.uniform(5),
                              TaskCosts(model='unit', costs=np.ones((5, 4))))

    def test_speed_count_mismatch(self, plan_5_2_2):
        with pytest.raises(SimulationError):
            simulate_timeline(plan_5_2_2, SpeedProfile.uniform(4), _unit(plan_5_2_2))


class TestTimeToDecode:

    @pytest.mark.parametrize('params', [(5, 2, 2, 0), (8, 3, 2, 1), (12, 3, 3, 0)])
    def test_shortest_decodable_prefix(self, params):
        plan = cached_plan(*params)
        decoder = SchemeDecoder(plan)
        speeds = SpeedProfile.with_stragglers(plan.n, count=2, factor=0.3, seed=3)
        timeline = simulate_timeline(plan, speeds, _unit(plan))
        result = time_to_decode(timeline, plan, decoder)
        assert result.decodable
        assert decoder.decodable(timeline.ledger_at(result.products_used))
        assert not decoder.decodable(timeline.ledger_at(result.products_used - 1))
        assert result.products_used <= q_bounds(plan.derived).q_ub
        assert result.time == timeline.times[result.products_used - 1]

    def test_tolerated_failure(self, plan_5_2_2):
        speeds = SpeedProfile.with_stragglers(5, factor=0.0, workers=[0])
        result = run_case(SimulationCase('proposed', plan_5_2_2, _unit(plan_5_2_2)), speeds)
        assert result.decodable
        assert result.time <= 5.0

    def test_too_many_failures(self, plan_5_2_2):
        speeds = SpeedProfile.with_stragglers(5, factor=0.0, workers=[0, 1])
        result = run_case(SimulationCase('proposed', plan_5_2_2, _unit(plan_5_2_2)), speeds)
        assert not result.decodable
        assert result.products_used == 15


class TestBaseline:

    def test_unit_time_is_ell(self):
        plan = poly_plan(5, 2, 2)
        costs = CostModel('unit').baseline_costs(plan, ell=5)
        timeline = simulate_poly_timeline(plan, SpeedProfile.uniform(5), costs)
        assert poly_time_to_decode(timeline, plan).time == 5.0

    def test_waits_for_a_straggler(self):
        plan = poly_plan(5, 2, 2)
        costs = CostModel('unit').baseline_costs(plan, ell=5)
        speeds = SpeedProfile.with_stragglers(5, count=2, factor=0.2)
        result = poly_time_to_decode(simulate_poly_timeline(plan, speeds, costs), plan)
        assert result.time == pytest.approx(25.0)
        assert result.products_used == plan.tau

    def test_never_decodes(self):
        plan = poly_plan(5, 2, 2)
        costs = CostModel('unit').baseline_costs(plan, ell=5)
        speeds = SpeedProfile.with_stragglers(5, count=2, factor=0.0)
        result = poly_time_to_decode(simulate_poly_timeline(plan, speeds, costs), plan)
        assert not result.decodable
        assert result.products_used == 3

    def test_nnz_costs(self, rng):
        plan = poly_plan(5, 2, 2)
        a = partition_columns(random_sparse_matrix(30, 8, 0.2, seed=4), 2)
        b = partition_columns(random_sparse_matrix(30, 4, 0.2, seed=5), 2)
        costs = CostModel('nnz').baseline_costs(plan, poly_encode(a, b, plan))
        assert costs.costs.shape == (5, 1)


class TestCompareOverall:

    def _cases(self, params=(12, 3, 3, 0)):
        plan = cached_plan(*params)
        baseline = poly_plan(plan.n, plan.derived.k_a, plan.derived.k_b)
        return [SimulationCase('proposed', plan, _unit(plan)),
                SimulationCase('polynomial', baseline,
                               CostModel('unit').baseline_costs(baseline, ell=plan.ell))]

    def test_table_layout(self):
        frame = compare_overall(self._cases(), straggler_counts=range(4), straggler_factor=0.2)
        assert list(frame.columns) == SWEEP_COLUMNS
        assert len(frame) == 8
        assert frame['scheme'].tolist()[:2] == ['proposed', 'polynomial']
        assert set(frame['cost_model']) == {'unit'}

    def test_proposed_never_slower_under_unit_costs(self):
        frame = compare_overall(self._cases(), straggler_counts=range(7), straggler_factor=0.2)
        times = frame.pivot(index='straggler_count', columns='scheme', values='decode_time')
        assert np.all(times['proposed'] <= times['polynomial'])

    @pytest.mark.slow
    def test_sparse_inputs_favour_proposed_under_nnz_costs(self):
        plan = cached_plan(24, 4, 5, 0)
        a = random_sparse_matrix(600, 480, 0.02, seed=11)
        b = random_sparse_matrix(600, 100, 0.02, seed=12)
        model = CostModel('nnz')
        payloads = encode_blocks(partition_columns(a, plan.derived.delta_a),
                                 partition_columns(b, plan.derived.k_b), plan)
        baseline = poly_plan(24, 4, 5)
        encoded = poly_encode(partition_columns(a, 4), partition_columns(b, 5), baseline)
        cases = [SimulationCase('proposed', plan, model.scheme_costs(plan, payloads)),
                 SimulationCase('polynomial', baseline,
                                model.baseline_costs(baseline, encoded, ell=plan.ell))]

        frame = compare_overall(cases, straggler_counts=range(7), straggler_factor=0.2)
        times = frame.pivot(index='straggler_count', columns='scheme', values='decode_time')
        assert np.all(times['proposed'] < times['polynomial'])
        # the baseline waits on a slow worker once more than s_m = 4 are slow
        poly = times['polynomial']
        assert np.allclose(poly.loc[0:4], poly.loc[0])
        assert poly.loc[5] > poly.loc[4]
        assert poly.loc[6] > poly.loc[4]

    def test_threads_match_serial(self):
        serial = compare_overall(self._cases(), straggler_counts=range(3), seed=5)
        threaded = compare_overall(self._cases(), straggler_counts=range(3), seed=5, max_workers=3)
        assert serial.equals(threaded)

    def test_mismatched_worker_counts(self):
        plan = cached_plan(12, 3, 3, 0)
        baseline = poly_plan(10, 3, 3)
        cases = [SimulationCase('proposed', plan, _unit(plan)),
                 SimulationCase('polynomial', baseline, CostModel('unit').baseline_costs(baseline))]
        with pytest.raises(SimulationError):
            compare_overall(cases)

    def test_nothing_to_compare(self):
        with pytest.raises(SimulationError):
            compare_overall([])
