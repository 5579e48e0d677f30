"""Pre-scheduled random arrivals (PSRA).

The process places customer ``i`` (``i`` ranging over all integers) at time
``i / rate + xi_i`` where the ``xi_i`` are i.i.d. delays, and then keeps each
arrival independently with probability ``survival``.  All window statistics
follow from the per-customer probabilities

    p_i(t, t+T) = F(t + T - i/rate) - F(t - i/rate)

with ``F`` the delay distribution function: the count of arrivals in a
window is a Poisson-binomial over the kept ``survival * p_i``, adjacent
windows are negatively correlated, and for widely spread delays the count
converges to a Poisson law of mean ``survival * rate * T``.

Sums over the integer schedule are truncated with certified tail bounds:
every operation states the total weight its truncation may discard.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr
from scipy.stats import poisson

from .delays import GAUSSIAN, DelayDistribution
from .errors import ConfigError

_SQRT_2PI = math.sqrt(2.0 * math.pi)


def _std_normal_pdf(x: float) -> float:
    return math.exp(-0.5 * x * x) / _SQRT_2PI


@dataclass(frozen=True)
class SlotCountDistribution:
    """Distribution of the number of arrivals in one window.

    ``probs[n]`` is the probability of ``n`` arrivals.  ``mean`` and
    ``variance`` are the exact Poisson-binomial moments of the retained
    index set; ``truncation_residual`` is the pmf mass dropped when trailing
    near-zero entries were trimmed, and ``excluded_index_mass`` is a certified
    upper bound on the success probability carried by schedule indices left
    out of the computation.
    """

    probs: np.ndarray
    mean: float
    variance: float
    truncation_residual: float
    excluded_index_mass: float

    @property
    def n_max(self) -> int:
        return len(self.probs) - 1


@dataclass(frozen=True)
class PsraProcess:
    """Scheduled arrivals at spacing ``1/rate`` with i.i.d. delays.

    ``survival`` in (0, 1] is the probability that a scheduled arrival is
    kept; deletions are independent across customers.  Analytic operations
    are pure; sampling requires a caller-owned generator.
    """

    rate: float
    delay: DelayDistribution
    survival: float = 1.0

    def __post_init__(self):
        if self.rate <= 0:
            raise ConfigError(f"rate must be positive, got {self.rate}")
        if not 0.0 < self.survival <= 1.0:
            raise ConfigError(f"survival must be in (0, 1], got {self.survival}")

    @property
    def effective_rate(self) -> float:
        """Long-run kept-arrival rate."""
        return self.survival * self.rate

    # ------------------------------------------------------------------
    # window probabilities and certified index truncation
    # ------------------------------------------------------------------

    def arrival_probability(self, i, t: float, T: float):
        """Probability that customer ``i`` arrives in ``(t, t+T]``.

        Deletions are not applied here; multiply by ``survival`` for the
        kept-arrival probability.  Bounded by ``peak * T / sigma``.
        """
        if T <= 0:
            raise ConfigError(f"window length must be positive, got {T}")
        i = np.asarray(i, dtype=float)
        lo = t - i / self.rate
        hi = lo + T
        if self.delay.family == GAUSSIAN:
            s = self.delay.sigma
            # evaluate on the smaller-magnitude side to avoid cancellation
            p = np.where(lo > 0, ndtr(-lo / s) - ndtr(-hi / s),
                         ndtr(hi / s) - ndtr(lo / s))
        else:
            p = self.delay.cdf(hi) - self.delay.cdf(lo)
        p = np.maximum(p, 0.0)
        return p if p.ndim else float(p)

    def _gauss_window_tail(self, d: float) -> float:
        # Upper bound for sum of p_i over indices whose schedule time is at
        # least d beyond a window edge (spacing 1/rate, monotone tail):
        # sum_k Phi(-(d + k/rate)/sigma) <= Phi(-d/sigma) + rate*sigma*G(d/sigma)
        # with G(x) = integral_x^inf Phi(-v) dv = pdf(x) - x*Phi(-x).
        if d <= 0:
            return math.inf
        s = self.delay.sigma
        x = d / s
        g = _std_normal_pdf(x) - x * ndtr(-x)
        return float(ndtr(-x) + self.rate * s * max(g, 0.0))

    def active_index_range(self, t: float, T: float, eps: float = 1e-12):
        """Indices whose window probabilities are kept.

        Returns ``(i_lo, i_hi, tail_bound)`` where ``tail_bound`` certifies
        that the ``p_i`` of all omitted indices sum to less than ``eps``
        (exactly zero for compact support).
        """
        if T <= 0:
            raise ConfigError(f"window length must be positive, got {T}")
        if not np.isfinite(self.delay.sigma):
            raise ConfigError("active index set cannot be bounded: "
                              "delay scale is not finite")
        lam = self.rate
        if self.delay.family != GAUSSIAN:
            R = self.delay.support_radius
            i_lo = math.floor(lam * (t - R)) + 1
            i_hi = math.ceil(lam * (t + T + R)) - 1
            return i_lo, max(i_hi, i_lo), 0.0
        s = self.delay.sigma
        r = 8.0 * s
        for _ in range(200):
            i_lo = math.floor(lam * (t - r))
            i_hi = math.ceil(lam * (t + T + r))
            tail = (self._gauss_window_tail(t - (i_lo - 1) / lam)
                    + self._gauss_window_tail((i_hi + 1) / lam - (t + T)))
            if tail < eps:
                return i_lo, i_hi, tail
            r += 4.0 * s
        raise ConfigError(f"could not certify index truncation below eps={eps}")

    def _kept_probs(self, t: float, T: float, eps: float):
        i_lo, i_hi, tail = self.active_index_range(t, T, eps)
        i = np.arange(i_lo, i_hi + 1)
        return self.survival * self.arrival_probability(i, t, T), self.survival * tail

    # ------------------------------------------------------------------
    # rate and moments
    # ------------------------------------------------------------------

    def instantaneous_rate(self, t: float) -> float:
        """Arrival rate at time ``t``: survival * sum_i pdf(t - i/rate).

        Periodic in ``t`` with period ``1/rate``; the truncated schedule tail
        carries less than 1e-12 of the sum.
        """
        lam = self.rate
        if self.delay.family != GAUSSIAN:
            R = self.delay.support_radius
            i = np.arange(math.floor(lam * (t - R)), math.ceil(lam * (t + R)) + 1)
            return self.survival * float(np.sum(self.delay.pdf(t - i / lam)))
        s = self.delay.sigma
        r = 8.0 * s
        while True:
            # density analogue of the window-tail bound:
            # sum_k f(r + k/lam) <= f(r) + lam * Phi(-r/sigma), per side
            tail = 2.0 * (float(self.delay.pdf(r)) + lam * float(ndtr(-r / s)))
            if tail < 1e-12:
                break
            r += 4.0 * s
        i = np.arange(math.floor(lam * (t - r)), math.ceil(lam * (t + r)) + 1)
        return self.survival * float(math.fsum(self.delay.pdf(t - i / lam)))

    def slot_moments(self, t: float, T: float) -> tuple[float, float]:
        """Mean and variance of the kept-arrival count in ``(t, t+T]``."""
        p, _ = self._kept_probs(t, T, eps=1e-12)
        mean = math.fsum(p)
        variance = math.fsum(p * (1.0 - p))
        return mean, variance

    def slot_covariance(self, t: float, T: float) -> float:
        """Covariance of kept counts in ``(t, t+T]`` and ``(t+T, t+2T]``.

        Always nonpositive: a customer landing in one window cannot land in
        the other, so shared indices anti-correlate the counts.
        """
        i_lo1, i_hi1, tail1 = self.active_index_range(t, T, 1e-12)
        i_lo2, i_hi2, tail2 = self.active_index_range(t + T, T, 1e-12)
        i = np.arange(min(i_lo1, i_lo2), max(i_hi1, i_hi2) + 1)
        p1 = self.arrival_probability(i, t, T)
        p2 = self.arrival_probability(i, t + T, T)
        g = self.survival
        return -g * g * math.fsum(p1 * p2)

    # ------------------------------------------------------------------
    # slot-count distribution and its Poisson comparison
    # ------------------------------------------------------------------

    def slot_count_dist(self, t: float, T: float, eps: float = 1e-9) -> SlotCountDistribution:
        """Poisson-binomial law of the kept-arrival count in ``(t, t+T]``.

        ``eps`` bounds the total success probability of omitted schedule
        indices; must lie in (0, 1e-6].  The pmf is built by the forward
        convolution q <- q*(1-p) shifted-add q*p over the kept indices, so
        cost grows with the square of the kept-index count.
        """
        if not 0.0 < eps <= 1e-6:
            raise ConfigError(f"eps must be in (0, 1e-6], got {eps}")
        p, excluded = self._kept_probs(t, T, eps)
        q = np.zeros(len(p) + 1)
        q[0] = 1.0
        for x in p:
            q[1:] = q[1:] * (1.0 - x) + q[:-1] * x
            q[0] *= 1.0 - x
        # trim the all-but-empty trailing block (keeps at least n=0..1)
        keep = len(q)
        while keep > 2 and q[keep - 1] < 1e-17 and q[keep - 2] < 1e-17:
            keep -= 1
        trimmed = q[:keep]
        residual = max(0.0, 1.0 - math.fsum(trimmed))
        return SlotCountDistribution(
            probs=trimmed,
            mean=math.fsum(p),
            variance=math.fsum(p * (1.0 - p)),
            truncation_residual=residual,
            excluded_index_mass=excluded,
        )

    def tv_distance_to_poisson(self, t: float, T: float) -> float:
        """Total variation sum |q_n - Poisson_n| against mean survival*rate*T.

        Unnormalized convention with range [0, 2]; both tails are cut below
        1e-12 and re-added as an upper bound, so the result is exact to that
        level.
        """
        dist = self.slot_count_dist(t, T, eps=1e-12)
        mu = self.survival * self.rate * T
        n_hi = max(dist.n_max, int(poisson.isf(1e-13, mu)) + 1)
        n = np.arange(n_hi + 1)
        pois = poisson.pmf(n, mu)
        q = np.zeros(n_hi + 1)
        q[: dist.n_max + 1] = dist.probs
        pois_tail = float(poisson.sf(n_hi, mu))
        return float(np.abs(q - pois).sum() + dist.truncation_residual + pois_tail)

    # ------------------------------------------------------------------
    # sampling
    # ------------------------------------------------------------------

    def sample_schedule(self, i_lo: int, i_hi: int, rng: np.random.Generator):
        """Draw one delay and one survival flag per index in ``[i_lo, i_hi]``.

        Returns ``(indices, times, survived)``.  Delays are drawn first and
        survival flags second, each as a single block, so the realization is
        a reproducible function of the generator state.
        """
        idx = np.arange(i_lo, i_hi + 1)
        xi = self.delay.sample(rng, size=len(idx))
        times = idx / self.rate + xi
        if self.survival < 1.0:
            survived = rng.random(len(idx)) < self.survival
        else:
            survived = np.ones(len(idx), dtype=bool)
        return idx, times, survived

    def sample_arrivals(self, t0: float, t1: float, rng: np.random.Generator) -> np.ndarray:
        """Sorted kept-arrival times landing in ``[t0, t1)``.

        Schedule indices are drawn out to a margin where the omitted indices
        contribute expected mass below 1e-9.
        """
        if not t0 < t1:
            raise ConfigError(f"need t0 < t1, got [{t0}, {t1})")
        i_lo, i_hi, _ = self.active_index_range(t0, t1 - t0, eps=1e-9)
        _, times, survived = self.sample_schedule(i_lo, i_hi, rng)
        kept = times[survived & (times >= t0) & (times < t1)]
        return np.sort(kept)
