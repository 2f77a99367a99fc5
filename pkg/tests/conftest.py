"""Shared fixtures: small scheme configurations and their plans."""

import logging
from functools import lru_cache

import numpy as np
import pytest
from hypothesis import strategies as st

from src.encoding import EncodingPlan, build_plan
from src.scheme import SchemeParams

# (n, k_a, k_b, x) configurations small enough for exhaustive checks
GRID = [
    (5, 2, 2, 0),
    (5, 3, 1, 1),
    (8, 3, 2, 0),
    (8, 3, 2, 1),
    (12, 3, 3, 0),
    (12, 2, 5, 0),
]

LARGE_GRID = [
    (24, 4, 5, 0),
    (24, 4, 5, 2),
]


@lru_cache(maxsize=None)
def cached_plan(n: int, k_a: int, k_b: int, x: int = 0, seed: int = 0) -> EncodingPlan:
    return build_plan(SchemeParams(n=n, k_a=k_a, k_b=k_b, x=x, seed=seed))


@pytest.fixture(params=GRID, ids=lambda p: 'n{}-ka{}-kb{}-x{}'.format(*p))
def grid_plan(request) -> EncodingPlan:
    return cached_plan(*request.param)


@pytest.fixture
def plan_5_2_2() -> EncodingPlan:
    return cached_plan(5, 2, 2, 0)


@pytest.fixture
def plan_5_3_1_x1() -> EncodingPlan:
    return cached_plan(5, 3, 1, 1)


@pytest.fixture
def plan_8_3_2() -> EncodingPlan:
    return cached_plan(8, 3, 2, 0)


@pytest.fixture
def plan_8_3_2_x1() -> EncodingPlan:
    return cached_plan(8, 3, 2, 1)


@pytest.fixture
def plan_12_3_3() -> EncodingPlan:
    return cached_plan(12, 3, 3, 0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def reset_logging():
    """Drop handlers installed by setup_logging so later tests log normally."""
    yield
    root = logging.getLogger()
    for handler in list(root.handlers):
        handler.close()
    root.handlers.clear()


@st.composite
def scheme_params(draw, max_n: int = 16, max_k: int = 4) -> SchemeParams:
    """Legal (n, k_a, k_b, x) tuples."""
    k_a = draw(st.integers(1, max_k))
    k_b = draw(st.integers(1, max_k))
    n = draw(st.integers(k_a * k_b + 1, max(max_n, k_a * k_b + 1)))
    s_m = n - k_a * k_b
    x = draw(st.integers(0, s_m - 1))
    seed = draw(st.integers(0, 2 ** 32))
    return SchemeParams(n=n, k_a=k_a, k_b=k_b, x=x, seed=seed)
