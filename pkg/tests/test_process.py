import math

import numpy as np
import pytest

from psra_queue import ConfigError, DelayDistribution, PsraProcess
from oracles import bernoulli_sum_enum, normal_cdf


def gaussian_proc(sigma, rate=1.0, survival=1.0):
    return PsraProcess(rate, DelayDistribution.gaussian(sigma), survival)


def uniform_proc(half_width, rate=1.0, survival=1.0):
    return PsraProcess(rate, DelayDistribution.uniform(half_width), survival)


# ----------------------------------------------------------------------
# window probabilities
# ----------------------------------------------------------------------

def test_window_probability_outside_support():
    assert uniform_proc(2.0).arrival_probability(100, 0.0, 1.0) == 0.0


def test_window_probability_against_erf():
    # customer 0, sigma 0.5, window (0, 1]: Phi(2) - Phi(0)
    want = normal_cdf(2.0) - normal_cdf(0.0)
    got = gaussian_proc(0.5).arrival_probability(0, 0.0, 1.0)
    assert got == pytest.approx(want, abs=1e-12)
    assert got == pytest.approx(0.47724987, abs=1e-8)


def test_window_probability_peak_bound():
    # p_i <= peak * T / sigma for every index and window
    rng = np.random.default_rng(3)
    for _ in range(200):
        sigma = rng.uniform(0.05, 3.0)
        proc = gaussian_proc(sigma) if rng.random() < 0.5 else uniform_proc(sigma)
        t = rng.uniform(-5, 5)
        T = rng.uniform(0.05, 3.0)
        i = rng.integers(-10, 10, size=30)
        p = proc.arrival_probability(i, t, T)
        bound = proc.delay.peak * T / proc.delay.sigma
        assert np.all(p <= bound + 1e-12)


def test_window_probability_survival_not_applied():
    a = gaussian_proc(0.5, survival=1.0).arrival_probability(0, 0.0, 1.0)
    b = gaussian_proc(0.5, survival=0.25).arrival_probability(0, 0.0, 1.0)
    assert a == b


# ----------------------------------------------------------------------
# instantaneous rate
# ----------------------------------------------------------------------

def test_rate_reference_values():
    assert gaussian_proc(0.2).instantaneous_rate(0.0) == pytest.approx(1.994726, abs=1e-6)
    assert gaussian_proc(0.5).instantaneous_rate(0.5) == pytest.approx(0.985616, abs=1e-6)


def test_rate_linear_in_survival():
    rng = np.random.default_rng(4)
    for t in rng.uniform(-2, 2, size=10):
        full = gaussian_proc(0.3).instantaneous_rate(t)
        half = gaussian_proc(0.3, survival=0.5).instantaneous_rate(t)
        assert half == pytest.approx(0.5 * full, rel=1e-12)


def test_rate_periodicity():
    for lam in (1.0, 2.5):
        proc = gaussian_proc(0.4, rate=lam)
        for t in (-0.3, 0.0, 0.17):
            a = proc.instantaneous_rate(t)
            b = proc.instantaneous_rate(t + 1.0 / lam)
            assert a == pytest.approx(b, abs=1e-12)


# ----------------------------------------------------------------------
# slot-count distribution
# ----------------------------------------------------------------------

def test_two_coin_slot_count():
    # support [-1/2, 1/2], unit window: exactly two indices with p = 1/2
    d = uniform_proc(0.5).slot_count_dist(0.0, 1.0)
    assert d.probs == pytest.approx([0.25, 0.5, 0.25], abs=1e-15)
    assert d.mean == pytest.approx(1.0, abs=1e-15)
    assert d.variance == pytest.approx(0.5, abs=1e-15)


def test_slot_count_reference_mean():
    d = gaussian_proc(0.2).slot_count_dist(0.0, 0.9)
    assert d.mean == pytest.approx(0.808534, abs=1e-6)


def test_slot_count_matches_enumeration():
    rng = np.random.default_rng(5)
    for _ in range(25):
        if rng.random() < 0.5:
            proc = uniform_proc(rng.uniform(0.4, 1.5),
                                survival=rng.uniform(0.3, 1.0))
        else:
            proc = gaussian_proc(rng.uniform(0.05, 0.08),
                                 survival=rng.uniform(0.3, 1.0))
        t = rng.uniform(-2, 2)
        T = rng.uniform(0.3, 1.5)
        i_lo, i_hi, _ = proc.active_index_range(t, T, 1e-9)
        p = proc.survival * proc.arrival_probability(
            np.arange(i_lo, i_hi + 1), t, T)
        assert len(p) <= 12
        got = proc.slot_count_dist(t, T).probs
        want = bernoulli_sum_enum(p)
        assert np.max(np.abs(got - want[: len(got)])) < 1e-12


def test_slot_count_normalization_and_dispersion():
    rng = np.random.default_rng(6)
    for _ in range(50):
        sigma = rng.uniform(0.1, 3.0)
        proc = gaussian_proc(sigma, survival=rng.uniform(0.2, 1.0))
        d = proc.slot_count_dist(rng.uniform(-1, 1), rng.uniform(0.2, 2.0))
        assert np.all(d.probs >= 0)
        assert d.probs.sum() + d.truncation_residual == pytest.approx(1.0, abs=1e-12)
        assert d.variance <= d.mean + 1e-15


def test_slot_count_eps_validation():
    with pytest.raises(ConfigError):
        gaussian_proc(0.5).slot_count_dist(0.0, 1.0, eps=1e-3)


def test_active_index_range_certificate():
    # the p_i left out beyond the certified range really do sum below eps
    proc = gaussian_proc(0.7)
    i_lo, i_hi, tail = proc.active_index_range(0.3, 0.9, eps=1e-9)
    assert tail < 1e-9
    wide = np.arange(i_lo - 200, i_hi + 201)
    p = proc.arrival_probability(wide, 0.3, 0.9)
    outside = p[(wide < i_lo) | (wide > i_hi)]
    assert outside.sum() < 1e-9


# ----------------------------------------------------------------------
# moments
# ----------------------------------------------------------------------

def test_slot_moments_reference():
    mean, _ = gaussian_proc(0.5).slot_moments(0.5, 0.9)
    assert mean == pytest.approx(0.901346, abs=1e-6)


def test_slot_moments_variance_below_mean():
    rng = np.random.default_rng(7)
    for _ in range(50):
        proc = gaussian_proc(rng.uniform(0.1, 2.0), survival=rng.uniform(0.2, 1.0))
        mean, var = proc.slot_moments(rng.uniform(-1, 1), rng.uniform(0.2, 2.0))
        assert var <= mean + 1e-15


def test_slot_mean_exact_for_unit_window():
    # with T = 1/rate the window probabilities telescope to exactly rate*T
    for sigma in (2.0, 5.0):
        mean, _ = gaussian_proc(sigma).slot_moments(0.0, 1.0)
        assert mean == pytest.approx(1.0, abs=1e-6)


def test_slot_mean_telescoping_on_grid():
    for t in np.linspace(0.0, 1.0, 7):
        mean, _ = gaussian_proc(2.0).slot_moments(float(t), 1.0)
        assert mean == pytest.approx(1.0, abs=1e-6)


# ----------------------------------------------------------------------
# covariance of adjacent windows
# ----------------------------------------------------------------------

def test_covariance_zero_when_no_index_straddles():
    # support well inside one window: no customer can reach both.  The
    # boundary between windows must fall midway between schedule points,
    # hence the t = 0.25 phase.
    assert uniform_proc(0.25).slot_covariance(0.25, 1.0) == 0.0


def test_covariance_single_straddling_index():
    # support [-1/2, 1/2]: only the boundary customer splits across windows,
    # with mass 1/2 on each side
    assert uniform_proc(0.5).slot_covariance(0.0, 1.0) == pytest.approx(-0.25, abs=1e-14)


def test_covariance_never_positive():
    rng = np.random.default_rng(8)
    for _ in range(200):
        sigma = rng.uniform(0.05, 3.0)
        proc = gaussian_proc(sigma) if rng.random() < 0.5 else uniform_proc(sigma)
        proc = PsraProcess(proc.rate, proc.delay, rng.uniform(0.2, 1.0))
        assert proc.slot_covariance(rng.uniform(-2, 2), rng.uniform(0.1, 2.0)) <= 0.0


def test_covariance_scales_with_survival_squared():
    full = gaussian_proc(1.0).slot_covariance(0.0, 1.0)
    half = gaussian_proc(1.0, survival=0.5).slot_covariance(0.0, 1.0)
    assert half == pytest.approx(0.25 * full, rel=1e-12)


# ----------------------------------------------------------------------
# distance to the Poisson law
# ----------------------------------------------------------------------

def test_tv_distance_range():
    rng = np.random.default_rng(9)
    for _ in range(20):
        proc = gaussian_proc(rng.uniform(0.2, 3.0), survival=rng.uniform(0.3, 1.0))
        tv = proc.tv_distance_to_poisson(rng.uniform(-1, 1), rng.uniform(0.3, 1.5))
        assert 0.0 <= tv <= 2.0


def test_tv_distance_decreases_with_spread():
    assert (gaussian_proc(2.0).tv_distance_to_poisson(0.0, 1.0)
            < gaussian_proc(0.3).tv_distance_to_poisson(0.0, 1.0))


def test_tv_distance_frozen_values():
    # frozen from an independent convolution oracle
    assert gaussian_proc(0.3).tv_distance_to_poisson(0.0, 1.0) == pytest.approx(0.395504, abs=1e-5)
    assert gaussian_proc(2.0).tv_distance_to_poisson(0.0, 1.0) == pytest.approx(0.085216, abs=1e-5)


# ----------------------------------------------------------------------
# sampling
# ----------------------------------------------------------------------

def test_sample_arrivals_sorted_and_in_window():
    proc = gaussian_proc(1.0, survival=0.7)
    arr = proc.sample_arrivals(10.0, 60.0, np.random.default_rng(11))
    assert np.all(np.diff(arr) >= 0)
    assert np.all((arr >= 10.0) & (arr < 60.0))


def test_sample_arrivals_rate_conservation():
    proc = gaussian_proc(1.0, survival=0.9)
    arr = proc.sample_arrivals(0.0, 1e6, np.random.default_rng(12))
    n = 1e6
    band = 4 * math.sqrt(n * 0.9 * 0.1 + n * 0.9)
    assert abs(len(arr) - 0.9e6) < band


def test_sample_arrivals_all_deleted_by_seed():
    # with survival 1/2 only indices 999..1002 can reach [1000, 1001);
    # this seed deletes all four, leaving the window empty
    proc = uniform_proc(2.0, survival=0.5)
    assert proc.active_index_range(1000.0, 1.0, 1e-9) == (999, 1002, 0.0)
    arr = proc.sample_arrivals(1000.0, 1001.0, np.random.default_rng(0))
    assert len(arr) == 0


def test_sample_arrivals_regression():
    # frozen from the first run with this seed
    proc = gaussian_proc(0.5, survival=0.8)
    arr = proc.sample_arrivals(0.0, 5.0, np.random.default_rng(777))
    want = [0.316228792206, 0.765162305486, 2.593457654024,
            2.929040799075, 3.187360783455, 4.78899182921]
    assert arr == pytest.approx(want, abs=1e-9)


def test_sample_arrivals_requires_proper_window():
    with pytest.raises(ConfigError):
        gaussian_proc(1.0).sample_arrivals(2.0, 1.0, np.random.default_rng(1))


def test_process_validation():
    with pytest.raises(ConfigError):
        PsraProcess(0.0, DelayDistribution.gaussian(1.0))
    with pytest.raises(ConfigError):
        PsraProcess(1.0, DelayDistribution.gaussian(1.0), survival=0.0)
    with pytest.raises(ConfigError):
        PsraProcess(1.0, DelayDistribution.gaussian(1.0), survival=1.2)
