"""Tests for parameter validation and derivation."""

import logging
import math

import pytest
from hypothesis import given, settings

from src.scheme import SchemeError, SchemeParams, derive_params, minimal_zeta
from tests.conftest import scheme_params


@pytest.mark.parametrize('n, k_a, k_b, x, expected', [
    (24, 4, 5, 0, dict(delta_a=24, delta=120, ell=6, c=4, p=5, s_m=4, tau=20, omega=2, zeta=3, y=0)),
    (24, 4, 5, 2, dict(y=2, zeta=3, tau=22, s=2)),
    (12, 3, 3, 0, dict(delta_a=12, ell=4, c=3, p=3, ell_c=1, s_m=3, zeta=2)),
    (5, 2, 2, 0, dict(delta_a=10, delta=20, ell=5, p=4, ell_c=1, s_m=1, tau=4, zeta=2)),
    (8, 3, 2, 1, dict(s_m=2, y=1, tau=7)),
])
def test_derived_values(n, k_a, k_b, x, expected):
    derived = derive_params(SchemeParams(n=n, k_a=k_a, k_b=k_b, x=x))
    for key, value in expected.items():
        assert getattr(derived, key) == value, key


def test_coded_weights_of_relaxed_code():
    derived = derive_params(SchemeParams(n=24, k_a=4, k_b=5, x=2))
    assert derived.coded_weight_a == 2
    assert derived.unknowns_per_class == 20


def test_matrix_vector_case():
    derived = derive_params(SchemeParams(n=5, k_a=3, k_b=1, x=1))
    assert derived.zeta == 1
    assert derived.delta == derived.delta_a == 15
    assert derived.coded_weight_a == 2


@settings(max_examples=200, deadline=None)
@given(scheme_params(max_n=40, max_k=6))
def test_exact_division_audit(params):
    derived = derive_params(params)
    assert derived.n * derived.p == derived.delta
    assert derived.ell * derived.c == derived.n
    assert derived.c == math.gcd(derived.n, derived.k_a)
    assert derived.p + derived.ell_c == derived.ell
    assert 1 <= derived.zeta <= derived.k_b
    assert 0 <= derived.y < derived.k_a
    assert derived.s == derived.s_m - derived.x >= 1


@settings(max_examples=100, deadline=None)
@given(scheme_params(max_n=40, max_k=6))
def test_zeta_is_minimal_resilient_weight(params):
    derived = derive_params(params)
    assert derived.zeta == minimal_zeta(derived.k_b, derived.omega)
    bound = [1 + m - -(-m // derived.omega) for m in range(1, derived.k_b + 1)]
    assert derived.zeta == max(bound)


@settings(max_examples=50, deadline=None)
@given(scheme_params())
def test_optimal_threshold_without_relaxation(params):
    derived = derive_params(SchemeParams(n=params.n, k_a=params.k_a, k_b=params.k_b))
    assert derived.y == 0
    assert derived.tau == derived.k_a * derived.k_b


@pytest.mark.parametrize('kwargs', [
    dict(n=4, k_a=2, k_b=2),
    dict(n=3, k_a=2, k_b=2),
    dict(n=5, k_a=2, k_b=2, x=1),
    dict(n=5, k_a=2, k_b=2, x=-1),
    dict(n=0, k_a=1, k_b=1),
    dict(n=5, k_a=True, k_b=2),
    dict(n=5.0, k_a=2, k_b=2),
    dict(n=5, k_a=2, k_b=2, seed=-1),
    dict(n=5, k_a=2, k_b=2, seed=2 ** 64),
    dict(n=2 * 10 ** 6, k_a=2, k_b=2),
    dict(n=5, k_a=2, k_b=2, zeta_override=3),
    dict(n=5, k_a=2, k_b=2, zeta_override=0),
])
def test_illegal_parameters_rejected(kwargs):
    with pytest.raises(SchemeError):
        derive_params(SchemeParams(**kwargs))


def test_no_margin_message():
    with pytest.raises(SchemeError, match='no straggler margin'):
        derive_params(SchemeParams(n=4, k_a=2, k_b=2))


def test_zeta_override_below_minimum_warns(caplog):
    with caplog.at_level(logging.WARNING):
        derived = derive_params(SchemeParams(n=12, k_a=2, k_b=5, zeta_override=2))
    assert derived.zeta == 2
    assert 'below the resilient minimum' in caplog.text


def test_scheme_error_is_value_error():
    assert issubclass(SchemeError, ValueError)
