import numpy as np
import pytest
from scipy.stats import poisson

from psra_queue import (
    DelayDistribution,
    DomainError,
    PsraProcess,
    gid1_stationary,
    independence_approx_mean,
    md1_mean_queue,
)


def gaussian_proc(sigma):
    return PsraProcess(1.0, DelayDistribution.gaussian(sigma))


# ----------------------------------------------------------------------
# M/D/1 closed form
# ----------------------------------------------------------------------

def test_md1_values():
    assert md1_mean_queue(0.5) == 0.75
    assert md1_mean_queue(0.9) == pytest.approx(4.95, abs=1e-12)


@pytest.mark.parametrize("rho", [1.0, 1.5, 0.0, -0.2])
def test_md1_domain(rho):
    with pytest.raises(DomainError):
        md1_mean_queue(rho)


# ----------------------------------------------------------------------
# GI/D/1 stationary recursion
# ----------------------------------------------------------------------

def test_empty_system():
    st = gid1_stationary(np.array([1.0]))
    assert st.probs[0] == 1.0
    assert st.mean == 0.0
    assert st.traffic_intensity == 0.0


def test_matches_md1_for_poisson_arrivals():
    rho = 0.9
    q = poisson.pmf(np.arange(60), rho)
    st = gid1_stationary(q)
    assert st.mean == pytest.approx(md1_mean_queue(rho), abs=1e-3)
    assert st.probs[0] == pytest.approx(1 - rho, abs=1e-9)


def test_matches_independence_mean_for_scheduled_arrivals():
    proc = gaussian_proc(0.5)
    q = proc.slot_count_dist(0.0, 0.9)
    st = gid1_stationary(q)
    assert st.mean == pytest.approx(3.03548, abs=1e-3)
    assert st.mean == pytest.approx(independence_approx_mean(proc, 0.0, 0.9),
                                    abs=1e-6)


def test_normalization_and_clamping():
    rng = np.random.default_rng(13)
    for _ in range(10):
        proc = gaussian_proc(rng.uniform(0.2, 1.5))
        t, T = rng.uniform(0, 1), rng.uniform(0.3, 0.95)
        st = gid1_stationary(proc.slot_count_dist(t, T))
        assert st.probs.sum() + st.residual == pytest.approx(1.0, abs=1e-12)
        assert abs(st.residual) < 1e-9
        assert st.max_clamped < 1e-10
        assert st.probs[0] == pytest.approx(1 - st.traffic_intensity, abs=1e-9)
        assert st.mean == pytest.approx(
            independence_approx_mean(proc, t, T), abs=1e-6)


def test_recursion_error_cases():
    with pytest.raises(DomainError):
        gid1_stationary(np.array([0.0, 1.0]))       # Q_0 = 0
    with pytest.raises(DomainError):
        gid1_stationary(np.array([0.0, 0.0, 0.5, 0.5]))  # mean 2.5 >= 1


# ----------------------------------------------------------------------
# independence-approximation mean
# ----------------------------------------------------------------------

def test_reference_values():
    assert independence_approx_mean(gaussian_proc(0.5), 0.0, 0.9) == pytest.approx(3.03548, abs=1e-5)
    assert independence_approx_mean(gaussian_proc(1.0), 0.5, 0.9) == pytest.approx(3.84452, abs=1e-5)


def test_diverges_at_unit_load():
    with pytest.raises(DomainError):
        independence_approx_mean(gaussian_proc(0.5), 0.0, 1.2)


def test_wide_spread_limit_reaches_md1():
    # the gap to the M/D/1 value closes like 1/sigma: still visible at
    # sigma = 10, below 1e-4 by sigma = 15000
    v10 = independence_approx_mean(gaussian_proc(10.0), 0.5, 0.9)
    assert v10 == pytest.approx(4.835790, abs=1e-4)
    assert abs(v10 - md1_mean_queue(0.9)) > 0.1
    v = independence_approx_mean(gaussian_proc(15000.0), 0.5, 0.9)
    assert v == pytest.approx(md1_mean_queue(0.9), abs=1e-4)


def test_approaches_md1_for_each_load():
    for rho in (0.5, 0.7, 0.9):
        v = independence_approx_mean(gaussian_proc(2000.0), 0.5, rho)
        assert v == pytest.approx(md1_mean_queue(rho), abs=1e-2)
