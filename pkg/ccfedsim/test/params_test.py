import math

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from ccfedsim import params
from ccfedsim.exceptions import DimensionError, NonFiniteError
from ccfedsim.params import ParamVec

finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)
vectors = st.lists(finite, min_size=1, max_size=8)
pairs = st.integers(1, 8).flatmap(
    lambda n: st.tuples(st.lists(finite, min_size=n, max_size=n), st.lists(finite, min_size=n, max_size=n))
)


def test_add_sub_scale():
    a = ParamVec([1.0, 2.0])
    b = ParamVec([0.5, -1.0])
    assert (a + b).tolist() == [1.5, 1.0]
    assert (a - b).tolist() == [0.5, 3.0]
    assert (2 * a).tolist() == [2.0, 4.0]
    assert (-a).tolist() == [-1.0, -2.0]


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        params.add(ParamVec([1.0]), ParamVec([1.0, 2.0]))
    with pytest.raises(DimensionError):
        params.dot(ParamVec([1.0]), ParamVec([1.0, 2.0]))


def test_non_finite_rejected():
    with pytest.raises(NonFiniteError):
        ParamVec([1.0, float("nan")])
    with pytest.raises(NonFiniteError):
        params.scale(ParamVec([1.0]), float("inf"))
    # overflow produces inf, which is rejected as well
    with pytest.raises(NonFiniteError):
        params.scale(ParamVec([1e300]), 1e300)


def test_values_are_read_only():
    v = ParamVec([1.0, 2.0])
    with pytest.raises(ValueError):
        v.values[0] = 3.0
    copy = v.to_numpy()
    copy[0] = 3.0
    assert v.tolist() == [1.0, 2.0]


def test_cosine_of_zero_vector():
    with pytest.raises(ValueError):
        params.cosine(ParamVec([0.0, 0.0]), ParamVec([1.0, 0.0]))


def test_mean_with_divisor():
    vs = [ParamVec([1.0, 1.0]), ParamVec([3.0, 5.0])]
    assert params.mean(vs).tolist() == [2.0, 3.0]
    assert params.mean(vs, divisor=4).tolist() == [1.0, 1.5]
    with pytest.raises(ValueError):
        params.mean([])


@given(pairs)
def test_l2_dist_sq_symmetric(pair):
    a, b = pair
    x, y = ParamVec(a), ParamVec(b)
    assert params.l2_dist_sq(x, y) == params.l2_dist_sq(y, x)
    assert params.l2_dist_sq(x, x) == 0.0


@given(vectors, st.floats(min_value=1e-3, max_value=1e3))
def test_cosine_scale_invariant(a, c):
    x = ParamVec(a)
    assume(params.norm_sq(x) > 1e-6)
    assert math.isclose(params.cosine(x, params.scale(x, c)), 1.0, abs_tol=1e-12)
    assert math.isclose(params.cosine(x, params.scale(x, -c)), -1.0, abs_tol=1e-12)


@given(pairs)
def test_cosine_bounded(pair):
    a, b = pair
    x, y = ParamVec(a), ParamVec(b)
    assume(params.norm_sq(x) > 1e-6 and params.norm_sq(y) > 1e-6)
    assert -1.0 <= params.cosine(x, y) <= 1.0


def test_total_is_left_to_right():
    vs = [ParamVec([1e16]), ParamVec([1.0]), ParamVec([-1e16])]
    expected = np.float64(1e16) + np.float64(1.0) - np.float64(1e16)
    assert params.total(vs).tolist() == [float(expected)]


def test_dot_and_norm_are_left_to_right():
    values = np.random.default_rng(0).standard_normal(1000) * np.logspace(0, 12, 1000)
    x = ParamVec(values)
    ones = ParamVec(np.ones(1000))
    expected = np.float64(0.0)
    for v in values:
        expected = expected + v
    assert params.dot(x, ones) == float(expected)
    expected = np.float64(0.0)
    for v in values:
        expected = expected + v * v
    assert params.norm_sq(x) == float(expected)
    assert params.l2_dist_sq(x, ParamVec.zeros(1000)) == float(expected)
