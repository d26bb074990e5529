import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from swarmloc.errors import UsageError
from swarmloc.metrics import TrialErrorSet, bias2, cdf_curve, cdf_quantile, median_error, mse, rms


def test_hand_example():
    s = TrialErrorSet([(3.0, 4.0), (0.0, 0.0)], (0.0, 0.0))
    assert mse(s) == pytest.approx(12.5)
    assert rms(s) == pytest.approx(np.sqrt(12.5))
    assert bias2(s) == pytest.approx(1.5**2 + 2.0**2)
    np.testing.assert_allclose(s.errors(), [5.0, 0.0])


@settings(max_examples=50, deadline=None)
@given(arrays(float, st.tuples(st.integers(1, 50), st.just(2)), elements=st.floats(-1e4, 1e4)))
def test_bias_never_exceeds_mse(est):
    s = TrialErrorSet(est, (100.0, -50.0))
    assert bias2(s) <= mse(s) * (1 + 1e-9) + 1e-9
    assert rms(s) ** 2 == pytest.approx(mse(s), rel=1e-12, abs=1e-12)
    assert mse(s) == pytest.approx(np.mean(s.errors() ** 2), rel=1e-9, abs=1e-9)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0, 1e5), min_size=1, max_size=200))
def test_cdf_properties(errors):
    z, F = cdf_curve(errors)
    assert np.all(np.diff(z) >= 0)
    assert np.all(np.diff(F) >= 0)
    assert F[-1] == 1.0 and F[0] >= 1 / len(errors)
    for zi, Fi in zip(z, F):
        assert Fi == pytest.approx(np.mean(np.asarray(errors) <= zi))


def test_cdf_with_failures_and_median():
    z, F = cdf_curve([1.0, np.inf, 3.0, 2.0])
    assert np.isinf(z[-1]) and F[-1] == 1.0
    assert median_error([1.0, np.inf, 3.0, 2.0]) == 2.0
    assert cdf_quantile(z, F, 0.9) == np.inf


def test_empty_and_nan():
    with pytest.raises(UsageError):
        mse(TrialErrorSet(np.empty((0, 2)), (0, 0)))
    with pytest.raises(UsageError):
        cdf_curve([])
    with pytest.raises(UsageError):
        cdf_curve([1.0, np.nan])
