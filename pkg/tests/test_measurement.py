import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from swarmloc.errors import DomainError, UsageError
from swarmloc.measurement import (
    SPEED_OF_LIGHT,
    NoiseModel,
    RangeDifferenceSet,
    path_loss_delta_db,
    range_variances,
    snr_at_su_db,
    synthesize,
    toa_variance_s2,
    true_range_difference,
)
from swarmloc.scenario import DeployConfig, Point, Scenario, deploy_network

# frozen from a 30-digit mpmath evaluation
TOA_VAR_6MHZ = 3.51809665424783928e-16
SIGMA0_M_AT_MINUS10DB = 17.78175353361394


def test_true_range_difference_examples():
    assert true_range_difference((0, 0), (3000, 4000), (0, 0)) == 5000
    assert true_range_difference((0, 5), (10, 0), (-10, 0)) == 0
    assert true_range_difference((8000, 1000), (0, 10000), (0, 0)) == pytest.approx(3979.33683, abs=0.01)


coord = st.floats(-5e4, 5e4, allow_nan=False)


@given(st.tuples(coord, coord), st.tuples(coord, coord), st.tuples(coord, coord))
def test_reverse_triangle_bound(e, su, bs):
    d = true_range_difference(e, su, bs)
    assert abs(d) <= math.dist(su, bs) + 1e-6


def test_path_loss_examples():
    assert path_loss_delta_db(500.0, 500.0, 1.5) == 0.0
    assert path_loss_delta_db(10_000.0, 1000.0, 1.5) == pytest.approx(43.7466022531853, abs=1e-3)
    assert path_loss_delta_db(10_000.0, 1000.0, 10.0) == pytest.approx(38.35, abs=1e-2)
    assert path_loss_delta_db(100.0, 1000.0, 1.5) < 0


@pytest.mark.parametrize("args", [(0.0, 1.0, 1.5), (1.0, -2.0, 1.5), (1.0, 1.0, 0.0)])
def test_path_loss_domain(args):
    with pytest.raises(DomainError):
        path_loss_delta_db(*args)


def test_snr_examples():
    assert snr_at_su_db(-10, 0) == -10
    assert snr_at_su_db(-10, 43.75) == pytest.approx(-53.75)
    assert snr_at_su_db(0, 0) == 0


def test_toa_variance_examples():
    assert toa_variance_s2(6e6, 1.0) == pytest.approx(TOA_VAR_6MHZ, abs=1e-19)
    assert toa_variance_s2(6e6, 1.0) == pytest.approx(3.5184e-16, abs=1e-19)
    assert toa_variance_s2(6e6, 10.0) == pytest.approx(TOA_VAR_6MHZ / 10, rel=1e-12)
    assert toa_variance_s2(12e6, 3.0) == pytest.approx(toa_variance_s2(6e6, 3.0) / 4, rel=1e-12)


@pytest.mark.parametrize("snr", [0.0, -1.0])
def test_toa_variance_rejects_nonpositive_snr(snr):
    with pytest.raises(DomainError):
        toa_variance_s2(6e6, snr)


def _single(su, emitter=(8000.0, 1000.0)):
    return Scenario(bs=Point(0, 0), sus=(Point(*su),), pu=Point(60_000, 0), half_width=20_000, emitter=Point(*emitter))


def test_variance_at_equal_distance_is_twice_reference():
    # an SU as far from the emitter as the BS sees no path-loss delta
    s = _single((16000.0, 0.0), emitter=(8000.0, 0.0))
    var = range_variances(s, NoiseModel())
    assert var[0] == pytest.approx(2 * SIGMA0_M_AT_MINUS10DB**2, rel=1e-9)


def test_variance_nondecreasing_in_distance_ratio():
    emitter = (8000.0, 0.0)
    sus = [(8000.0 + r, 0.0) for r in (100.0, 1000.0, 5000.0, 8000.0, 12000.0, 20000.0)]
    s = Scenario(bs=Point(0, 0), sus=tuple(Point(*p) for p in sus), pu=Point(60_000, 0), half_width=30_000,
                 emitter=Point(*emitter))
    var = range_variances(s, NoiseModel())
    assert np.all(np.diff(var) >= 0)


def test_synthesize_zero_noise_is_exact(scenario100):
    m = synthesize(scenario100, NoiseModel(noise_enabled=False), np.random.default_rng(0))
    expected = [true_range_difference(scenario100.emitter, su, scenario100.bs) for su in scenario100.sus]
    np.testing.assert_allclose(m.values, expected, rtol=0, atol=1e-9)
    assert np.all(m.variances_m2 > 0)
    again = synthesize(scenario100, NoiseModel(noise_enabled=False), np.random.default_rng(99))
    assert again.digest() == m.digest()


def test_synthesize_is_deterministic(scenario100):
    a = synthesize(scenario100, NoiseModel(), np.random.default_rng(5))
    b = synthesize(scenario100, NoiseModel(), np.random.default_rng(5))
    assert a.digest() == b.digest()
    assert synthesize(scenario100, NoiseModel(), np.random.default_rng(6)).digest() != a.digest()


def test_empirical_variance_matches_declared(scenario10):
    rng = np.random.default_rng(2024)
    draws = np.array([synthesize(scenario10, NoiseModel(), rng).values for _ in range(10_000)])
    declared = range_variances(scenario10, NoiseModel())
    np.testing.assert_allclose(draws.var(axis=0, ddof=1), declared, rtol=0.05)


def test_variance_units():
    s = _single((16000.0, 0.0), emitter=(8000.0, 0.0))
    var_s = toa_variance_s2(6e6, 10 ** (-10 / 10))
    assert range_variances(s, NoiseModel())[0] == pytest.approx(2 * SPEED_OF_LIGHT**2 * var_s)


def test_synthesize_errors():
    s = deploy_network(DeployConfig(n_sus=3))
    with pytest.raises(UsageError):
        synthesize(s, NoiseModel(), np.random.default_rng(0))
    with pytest.raises(DomainError, match="SU 0"):
        synthesize(_single((8000.0, 1000.0)), NoiseModel(), np.random.default_rng(0))
    with pytest.raises(DomainError, match="SU 0"):
        synthesize(_single((0.0, 0.0)), NoiseModel(), np.random.default_rng(0))
    with pytest.raises(DomainError, match="base station"):
        synthesize(_single((100.0, 0.0), emitter=(0.0, 0.0)), NoiseModel(), np.random.default_rng(0))


def test_range_difference_set_validation_and_csv(tmp_path):
    with pytest.raises(UsageError):
        RangeDifferenceSet([1.0, 2.0], [1.0])
    with pytest.raises(UsageError):
        RangeDifferenceSet([1.0], [-1.0])
    m = RangeDifferenceSet([1.5, -2.25, 1e-7], [4.0, 9.0, 0.5])
    m.to_csv(tmp_path / "m.csv")
    assert (tmp_path / "m.csv").read_text().splitlines()[0] == "su_index,value_m,variance_m2"
    back = RangeDifferenceSet.from_csv(tmp_path / "m.csv")
    assert back.digest() == m.digest()


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_noise_free_is_pure_function_of_geometry(seed):
    s = deploy_network(DeployConfig(n_sus=5, seed=seed)).with_emitter((8000, 1000))
    a = synthesize(s, NoiseModel(noise_enabled=False), np.random.default_rng(seed))
    b = synthesize(s, NoiseModel(noise_enabled=False), np.random.default_rng(seed + 1))
    assert a.digest() == b.digest()
