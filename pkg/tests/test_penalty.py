import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from shsopt.engine import ConfigurationError, ObjectiveSpec
from shsopt.penalty import ConstraintSet, penalize


def zero_spec(dim=1):
    return ObjectiveSpec("zero", np.full(dim, -10.0), np.full(dim, 10.0), lambda x: 0.0)


def test_single_inequality_example():
    spec = penalize(zero_spec(), ConstraintSet(inequality=[lambda x: x[0] - 1.0], penalty_weight=10.0))
    assert spec.evaluate(np.array([3.0])) == 40.0
    assert spec.evaluate(np.array([0.5])) == 0.0


def test_equality_tolerance():
    cs = ConstraintSet(equality=[lambda x: x[0]], penalty_weight=1.0, equality_tolerance=0.5)
    spec = penalize(zero_spec(), cs)
    assert spec.evaluate(np.array([0.4])) == 0.0
    assert spec.evaluate(np.array([2.5])) == pytest.approx(4.0)


def test_bounds_and_dimension_preserved():
    base = zero_spec(3)
    spec = penalize(base, ConstraintSet())
    np.testing.assert_array_equal(spec.lower, base.lower)
    np.testing.assert_array_equal(spec.upper, base.upper)
    assert spec.dim == 3


def test_invalid_configuration():
    with pytest.raises(ConfigurationError):
        penalize(zero_spec(), ConstraintSet(penalty_weight=0.0))
    with pytest.raises(ConfigurationError):
        penalize(zero_spec(), ConstraintSet(equality_tolerance=-1.0))


def _quadratic():
    return ObjectiveSpec(
        "q", np.full(2, -5.0), np.full(2, 5.0), lambda x: float(x @ x), batch=lambda X: np.sum(X**2, axis=1)
    )


@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(1.0, 1e3), st.floats(1.5, 10.0))
def test_nonnegative_feasible_invariant_and_monotone(a, b, rho, factor):
    g = lambda x: x[0] + x[1] - 1.0  # noqa: E731
    x = np.array([a, b])
    base = _quadratic()
    lo = penalize(base, ConstraintSet(inequality=[g], penalty_weight=rho))
    hi = penalize(base, ConstraintSet(inequality=[g], penalty_weight=rho * factor))
    assert lo.evaluate(x) >= base.evaluate(x)
    if g(x) <= 0:
        assert lo.evaluate(x) == base.evaluate(x)
    else:
        assert hi.evaluate(x) > lo.evaluate(x)


def test_vectorized_batch_agrees():
    cs = ConstraintSet(
        inequality=[lambda X: X[..., 0] - 1.0],
        equality=[lambda X: X[..., 0] + X[..., 1]],
        penalty_weight=3.0,
        vectorized=True,
    )
    spec = penalize(_quadratic(), cs)
    X = np.random.default_rng(0).uniform(-5, 5, size=(20, 2))
    np.testing.assert_allclose(spec.evaluate_many(X), [spec.evaluate(x) for x in X], rtol=1e-14)
