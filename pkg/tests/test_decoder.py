"""Tests for progress ledgers, decodability and recovery."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from src.analysis import worst_pattern_ledger
from src.decoder import (DecodeError, LedgerError, ProgressLedger, SchemeDecoder,
                         compute_products, decode, decode_from_survivors, is_decodable,
                         record_completion)
from src.encoding import encode_blocks
from src.linalg import partition_columns, random_sparse_matrix
from tests.conftest import cached_plan


def _operands(plan, rng, rows=8, a_width=2, b_width=2):
    derived = plan.derived
    a = rng.standard_normal((rows, derived.delta_a * a_width))
    b = rng.standard_normal((rows, derived.k_b * b_width))
    payloads = encode_blocks(partition_columns(a, derived.delta_a),
                             partition_columns(b, derived.k_b), plan)
    return a, b, payloads


class TestLedger:
    def test_fresh_record(self):
        ledger = record_completion(ProgressLedger.fresh(5, 5), 0)
        assert ledger.counts.tolist() == [1, 0, 0, 0, 0]
        assert ledger.total == 1

    def test_record_is_not_in_place(self):
        fresh = ProgressLedger.fresh(3, 2)
        record_completion(fresh, 1)
        assert fresh.total == 0

    def test_worker_finishes(self):
        ledger = ProgressLedger.fresh(2, 3)
        for _ in range(3):
            ledger = record_completion(ledger, 1)
        assert ledger.is_finished(1)
        with pytest.raises(LedgerError):
            record_completion(ledger, 1)

    def test_worker_out_of_range(self):
        with pytest.raises(LedgerError):
            ProgressLedger.fresh(2, 3).record(2)

    def test_counts_validated(self):
        with pytest.raises(LedgerError):
            ProgressLedger(ell=2, counts=[0, 3])
        with pytest.raises(LedgerError):
            ProgressLedger(ell=2, counts=[-1, 0])

    def test_survivors_and_dominance(self):
        ledger = ProgressLedger.from_survivors(4, 3, [0, 2])
        assert ledger.counts.tolist() == [3, 0, 3, 0]
        assert ProgressLedger.full(4, 3).dominates(ledger)
        assert not ledger.dominates(ProgressLedger.full(4, 3))
        assert ledger.completed(0, 2) and not ledger.completed(1, 0)


class TestDecodability:
    def test_all_finished(self, grid_plan):
        report = is_decodable(ProgressLedger.full(grid_plan.n, grid_plan.ell), grid_plan)
        assert report.decodable
        assert report.deficient_classes == ()

    def test_nothing_finished(self, plan_5_2_2):
        report = is_decodable(ProgressLedger.fresh(5, 5), plan_5_2_2)
        assert not report.decodable
        assert report.ranks == (0,) * 5

    def test_three_lost_workers(self, plan_12_3_3):
        counts = np.full(12, 4)
        counts[[0, 10, 11]] = 0
        report = is_decodable(ProgressLedger(ell=4, counts=counts), plan_12_3_3)
        assert report.decodable
        assert report.equations == (9, 9, 9, 9)

    def test_largest_non_decodable_ledger(self, plan_5_2_2):
        ledger = worst_pattern_ledger(plan_5_2_2)
        assert ledger.total == 22
        assert not is_decodable(ledger, plan_5_2_2).decodable

    def test_every_ledger_of_23_products_decodes(self, plan_5_2_2):
        decoder = SchemeDecoder(plan_5_2_2)
        for missing in itertools.product(range(3), repeat=5):
            if sum(missing) > 2:
                continue
            counts = 5 - np.array(missing)
            assert decoder.decodable(ProgressLedger(ell=5, counts=counts)), counts

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.integers(0, 4), min_size=12, max_size=12), st.integers(0, 11))
    def test_monotone(self, counts, worker):
        plan = cached_plan(12, 3, 3)
        decoder = SchemeDecoder(plan)
        ledger = ProgressLedger(ell=4, counts=counts)
        if ledger.is_finished(worker):
            return
        if decoder.decodable(ledger):
            assert decoder.decodable(record_completion(ledger, worker))

    def test_report_dict(self, plan_5_2_2):
        report = SchemeDecoder(plan_5_2_2).is_decodable(ProgressLedger.full(5, 5))
        data = report.to_dict()
        assert data['decodable'] is True
        assert data['required_rank'] == 4
        assert data['class_equations'] == [5] * 5

    def test_ledger_shape_mismatch(self, plan_5_2_2):
        with pytest.raises(DecodeError):
            SchemeDecoder(plan_5_2_2).is_decodable(ProgressLedger.full(4, 5))


class TestRecovery:
    def test_first_tau_workers(self, plan_12_3_3, rng):
        a, b, payloads = _operands(plan_12_3_3, rng)
        ledger = ProgressLedger.from_survivors(12, 4, range(9))
        recovered = decode(ledger, compute_products(payloads, ledger), plan_12_3_3)
        direct = a.T @ b
        assert np.linalg.norm(recovered.product - direct) <= 1e-10 * np.linalg.norm(direct)
        assert len(recovered.blocks) == 36
        assert len(recovered.residuals) == 4

    def test_every_survivor_set_of_threshold_size(self, plan_12_3_3, rng):
        a, b, payloads = _operands(plan_12_3_3, rng, rows=5, a_width=1, b_width=1)
        products = compute_products(payloads, ProgressLedger.full(12, 4))
        decoder = SchemeDecoder(plan_12_3_3)
        direct = a.T @ b
        for survivors in itertools.combinations(range(12), 9):
            recovered = decoder.decode_from_survivors(products, survivors)
            assert np.linalg.norm(recovered.product - direct) <= 1e-8 * np.linalg.norm(direct)

    def test_survivor_sets_with_dense_blocks(self, plan_12_3_3, rng):
        a, b, payloads = _operands(plan_12_3_3, rng, rows=120, a_width=10, b_width=40)
        assert a.shape == b.shape == (120, 120)
        products = compute_products(payloads, ProgressLedger.full(12, 4))
        decoder = SchemeDecoder(plan_12_3_3)
        direct = a.T @ b
        for survivors in itertools.combinations(range(12), 9):
            recovered = decoder.decode_from_survivors(products, survivors)
            assert np.linalg.norm(recovered.product - direct) <= 1e-6 * np.linalg.norm(direct)

    def test_matrix_vector_single_straggler(self, plan_5_3_1_x1, rng):
        a = rng.standard_normal((10, 15))
        x = rng.standard_normal((10, 1))
        payloads = encode_blocks(partition_columns(a, 15), partition_columns(x, 1), plan_5_3_1_x1)
        products = compute_products(payloads, ProgressLedger.full(5, 5))
        for lost in range(5):
            survivors = [w for w in range(5) if w != lost]
            recovered = decode_from_survivors(plan_5_3_1_x1, products, survivors)
            np.testing.assert_allclose(recovered.product, a.T @ x, atol=1e-9)

    def test_sparse_inputs_relaxed_plan(self, plan_8_3_2_x1):
        derived = plan_8_3_2_x1.derived
        a = random_sparse_matrix(30, 48, 0.3, seed=11)
        b = random_sparse_matrix(30, 4, 0.3, seed=12)
        payloads = encode_blocks(partition_columns(a, derived.delta_a),
                                 partition_columns(b, derived.k_b), plan_8_3_2_x1)
        ledger = ProgressLedger.full(8, 8)
        products = compute_products(payloads, ledger)
        recovered = decode(ledger, products, plan_8_3_2_x1, shape=(48, 4))
        direct = (a.T @ b).toarray()
        np.testing.assert_allclose(recovered.product, direct, atol=1e-10)

    def test_too_few_survivors(self, plan_12_3_3, rng):
        _, _, payloads = _operands(plan_12_3_3, rng)
        products = compute_products(payloads, ProgressLedger.full(12, 4))
        with pytest.raises(DecodeError, match='fewer than the recovery threshold'):
            decode_from_survivors(plan_12_3_3, products, range(8))

    def test_rank_deficient_ledger(self, plan_5_2_2, rng):
        _, _, payloads = _operands(plan_5_2_2, rng)
        ledger = ProgressLedger.from_survivors(5, 5, [0, 1, 2])
        with pytest.raises(DecodeError, match='not decodable'):
            decode(ledger, compute_products(payloads, ledger), plan_5_2_2)

    def test_missing_product(self, plan_5_2_2, rng):
        _, _, payloads = _operands(plan_5_2_2, rng)
        ledger = ProgressLedger.full(5, 5)
        products = compute_products(payloads, ledger)[1:]
        with pytest.raises(DecodeError, match='no product'):
            decode(ledger, products, plan_5_2_2)

    def test_threaded_decoder_matches(self, plan_12_3_3, rng):
        _, _, payloads = _operands(plan_12_3_3, rng)
        ledger = ProgressLedger.full(12, 4)
        products = compute_products(payloads, ledger)
        serial = SchemeDecoder(plan_12_3_3).decode(ledger, products)
        threaded = SchemeDecoder(plan_12_3_3, max_workers=3).decode(ledger, products)
        np.testing.assert_allclose(serial.product, threaded.product)
