"""Occupancy bookkeeping for compact-support delays at unit schedule spacing.

With unit spacing, unit service slots, and delays supported on
``[-L, L]`` (integer ``L``), customer ``j + m`` has arrived by time ``j``
exactly when its delay is below ``-m``.  Only offsets ``m`` in
``{-L+1, ..., L-1}`` are uncertain, so the state of the system at time ``j``
is the queue length together with the set of arrived offsets; its size
``|I|`` is Poisson-binomial over the arrival-by-offset probabilities

    q_m = F(-m)           (uniform delays: q_m = (L - m) / 2L).

Offsets here index the *scheduled slot relative to now*; for the symmetric
densities used in practice this gives the same distribution as indexing by
signed delay, and it reproduces the uniform weight factors
``w_m = q_m / (1 - q_m) = (L - m) / (L + m)`` directly.

Writing ``P(|I| = k) = P(|I| = 0) * e_k(w)`` with ``e_k`` the elementary
symmetric polynomials makes the combinatorics those of the canonical
partition function of a Fermi system with one level per offset; the module
evaluates it two independent ways (a stable forward recursion and the
power-sum expansion over integer partitions) so each can check the other.

At critical load the queue obeys ``n(j) = alpha + |I_j|`` where ``alpha``
is conserved during busy periods and steps up by one whenever the queue
empties; a busy period that ends with value ``alpha`` therefore terminates
on the event ``|I| = -alpha``, and its mean length is approximated by the
unconditioned return time ``1 / P(|I| = -alpha)``.  Thinning arrivals with
survival ``rho < 1`` lets ``alpha`` also step down, at rate ``1 - rho``,
which turns ``alpha`` into a birth-death chain whose stationary law weights
the conditional occupancy means into the correlated mean-queue estimate.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .delays import UNIFORM_COMPACT, DelayDistribution
from .errors import ConfigError, DomainError

POWER_SUM_MAX_HALF_WIDTH = 12


@dataclass(frozen=True)
class OccupancyModel:
    """Arrival-by-offset probabilities ``q_m`` for offsets -L+1 .. L-1."""

    half_width: int
    arrival_probs: np.ndarray

    def __post_init__(self):
        L = self.half_width
        if not (isinstance(L, (int, np.integer)) and L >= 1):
            raise ConfigError(f"half_width must be a positive integer, got {L}")
        q = np.asarray(self.arrival_probs, dtype=float)
        if q.shape != (2 * L - 1,):
            raise ConfigError(f"need {2 * L - 1} offset probabilities for "
                              f"half_width {L}, got shape {q.shape}")
        if np.any(q <= 0.0) or np.any(q >= 1.0):
            raise ConfigError("interior offsets must have 0 < q_m < 1")
        object.__setattr__(self, "arrival_probs", q)

    @classmethod
    def uniform(cls, half_width: int) -> "OccupancyModel":
        m = np.arange(-half_width + 1, half_width)
        return cls(half_width, (half_width - m) / (2.0 * half_width))

    @classmethod
    def from_delay(cls, delay: DelayDistribution) -> "OccupancyModel":
        if delay.family != UNIFORM_COMPACT:
            raise ConfigError("occupancy models need compact-support delays")
        L = delay.half_width
        if L != int(L):
            raise ConfigError(f"occupancy models need an integer support "
                              f"half-width, got {L}")
        L = int(L)
        m = np.arange(-L + 1, L)
        return cls(L, np.asarray(delay.cdf(-m.astype(float))))

    @property
    def offsets(self) -> np.ndarray:
        return np.arange(-self.half_width + 1, self.half_width)

    @property
    def weights(self) -> np.ndarray:
        """Occupancy weights w_m = q_m / (1 - q_m)."""
        q = self.arrival_probs
        return q / (1.0 - q)


@dataclass(frozen=True)
class OccupancyDist:
    """pmf of the arrived-customer count |I|, k = 0 .. 2L-1."""

    probs: np.ndarray

    @property
    def mean(self) -> float:
        return float(np.arange(len(self.probs)) @ self.probs)


@dataclass(frozen=True)
class AlphaChain:
    """Birth-death law of the conserved queue offset alpha.

    ``up_rates[i]`` is the probability per slot of alpha stepping up out of
    ``states[i]`` (the chance the queue empties there); ``down_rate`` is the
    thinning rate 1 - rho.  ``stationary`` solves detailed balance.
    """

    states: np.ndarray
    up_rates: np.ndarray
    down_rate: float
    stationary: np.ndarray


def occupancy_dist_dp(model: OccupancyModel) -> OccupancyDist:
    """Evaluate P(|I| = k) = P_0 * e_k(w) by the forward e-recursion.

    The recursion ``e_k <- e_k + w_m e_{k-1}`` over offsets has all-positive
    terms, so it is stable for any weights; this is the primary evaluator.
    """
    w = model.weights
    e = np.zeros(len(w) + 1)
    e[0] = 1.0
    for wi in w:
        e[1:] = e[1:] + wi * e[:-1]
    p0 = float(np.prod(1.0 - model.arrival_probs))
    return OccupancyDist(p0 * e)


def _partitions(n: int, min_part: int = 1):
    # integer partitions of n as nondecreasing tuples; () for n = 0
    if n == 0:
        yield ()
        return
    for first in range(min_part, n + 1):
        for rest in _partitions(n - first, first):
            yield (first,) + rest


def occupancy_dist_power_sum(model: OccupancyModel) -> OccupancyDist:
    """Evaluate P(|I| = k) through the power-sum partition expansion.

    Expands ``e_k`` in the power sums ``S_j = sum_m w_m^j`` with the
    alternating partition coefficients

        e_k = sum over partitions (j_1 <= ... <= j_l) of k of
              (-1)^(k-l) / (j_1 ... j_l * prod_i mult_i!) * prod_m S_{j_m}.

    The terms alternate in sign and grow combinatorially, so the evaluator
    refuses half widths above :data:`POWER_SUM_MAX_HALF_WIDTH`; use
    :func:`occupancy_dist_dp` there.  Agrees with the recursion to 1e-9
    inside the cap.
    """
    L = model.half_width
    if L > POWER_SUM_MAX_HALF_WIDTH:
        raise DomainError(
            f"power-sum expansion is numerically unreliable beyond "
            f"half_width {POWER_SUM_MAX_HALF_WIDTH} (got {L}); "
            f"use occupancy_dist_dp")
    w = model.weights
    kmax = 2 * L - 1
    S = {j: float(np.sum(w ** j)) for j in range(1, kmax + 1)}
    p0 = float(np.prod(1.0 - model.arrival_probs))
    probs = np.empty(kmax + 1)
    for k in range(kmax + 1):
        total = 0.0
        for parts in _partitions(k):
            l = len(parts)
            denom = 1.0
            for j in parts:
                denom *= j
            for mult in np.bincount(parts).tolist() if parts else []:
                denom *= math.factorial(mult)
            term = (-1.0) ** (k - l) / denom
            for j in parts:
                term *= S[j]
            total += term
        probs[k] = p0 * total
    return OccupancyDist(probs)


def empty_probability_exact(half_width: int) -> Fraction:
    """P(|I| = 0) for uniform delays, in exact rational arithmetic.

    Computes the product of the per-offset miss probabilities; for uniform
    delays this collapses to (2L)! / (2L)^(2L).
    """
    L = int(half_width)
    out = Fraction(1)
    for m in range(-L + 1, L):
        out *= 1 - Fraction(L - m, 2 * L)
    return out


def mean_return_time(model: OccupancyModel, alpha: int) -> float:
    """Approximate mean busy-period length for periods ending at ``alpha``.

    Uses the unconditioned return time 1 / P(|I| = -alpha).  Reliable when
    P(|I| = -alpha) is small against 1/(2L); a diagnostic warning is issued
    otherwise (the value then overestimates the true mean length).
    Returns inf when the occupancy probability is zero.
    """
    L = model.half_width
    if not -L + 1 <= alpha <= 0:
        raise ConfigError(f"alpha must lie in [{-L + 1}, 0], got {alpha}")
    p = float(occupancy_dist_dp(model).probs[-alpha])
    if p <= 0.0:
        return math.inf
    if p >= 1.0 / (2.0 * L):
        warnings.warn(
            f"P(|I|={-alpha}) = {p:.4g} is not small against 1/(2L) = "
            f"{1.0 / (2 * L):.4g}; the unconditioned return time "
            f"overestimates the busy-period length", RuntimeWarning,
            stacklevel=2)
    return 1.0 / p


def min_alpha_for_horizon(model: OccupancyModel, operations: int) -> int:
    """Smallest starting ``alpha`` whose busy periods outlast the horizon.

    Scans ``alpha`` upward from ``-L+1`` and returns the first value whose
    approximate return time exceeds ``operations`` (the number of service
    slots in the planning day).  Returns 1 when no ``alpha <= 0`` qualifies:
    with ``alpha >= 1`` the queue never empties, so the return time is
    infinite at the cost of a permanently longer queue.
    """
    if operations < 1:
        raise ConfigError(f"operations must be >= 1, got {operations}")
    probs = occupancy_dist_dp(model).probs
    for alpha in range(-model.half_width + 1, 1):
        p = float(probs[-alpha])
        if p <= 0.0 or 1.0 / p > operations:
            return alpha
    return 1


def alpha_chain(model: OccupancyModel, rho: float,
                floor: int | None = None) -> AlphaChain:
    """Stationary law of ``alpha`` under thinning with survival ``rho``.

    Up-rate out of ``alpha`` is P(|I| = -alpha), down-rate is 1 - rho.
    The state space is ``{floor, ..., 0}`` with ``floor`` defaulting to
    ``-L+1``; lower floors (down to ``-(2L-1)``) are accepted for
    experimentation.
    """
    if not 0.0 < rho < 1.0:
        raise DomainError(f"alpha chain requires 0 < rho < 1, got {rho}")
    L = model.half_width
    if floor is None:
        floor = -L + 1
    if not -(2 * L - 1) <= floor <= 0:
        raise ConfigError(f"floor must lie in [{-(2 * L - 1)}, 0], got {floor}")
    states = np.arange(floor, 1)
    probs = occupancy_dist_dp(model).probs
    up = probs[-states]
    mu = 1.0 - rho
    weights = np.empty(len(states))
    weights[0] = 1.0
    for i in range(1, len(states)):
        weights[i] = weights[i - 1] * up[i - 1] / mu
    pi = weights / math.fsum(weights)
    return AlphaChain(states=states, up_rates=up, down_rate=mu, stationary=pi)


def conditional_occupancy_mean(dist: OccupancyDist, alpha: int) -> float:
    """Mean of |I| restricted to the states reachable at offset ``alpha``.

    Only occupancies with ``alpha + |I| >= 0`` occur, so the mean is taken
    over ``k >= -alpha`` and renormalized to a proper expectation.
    """
    if alpha > 0:
        raise ConfigError(f"alpha must be <= 0, got {alpha}")
    k = np.arange(len(dist.probs))
    sel = k >= -alpha
    mass = float(np.sum(dist.probs[sel]))
    if mass <= 0.0:
        raise DomainError(f"no occupancy mass on k >= {-alpha}")
    return float((k[sel] @ dist.probs[sel]) / mass)


def correlated_mean_queue(model: OccupancyModel, rho: float,
                          floor: int | None = None) -> float:
    """Mean queue with slot correlations kept: sum_alpha pi_alpha (alpha + E_alpha|I|)."""
    chain = alpha_chain(model, rho, floor=floor)
    dist = occupancy_dist_dp(model)
    return math.fsum(
        pi * (alpha + conditional_occupancy_mean(dist, int(alpha)))
        for alpha, pi in zip(chain.states, chain.stationary))


def stationary_queue_pmf_critical(model: OccupancyModel, alpha: int) -> np.ndarray:
    """Queue-length pmf at critical load once ``alpha >= 1`` is locked in.

    The queue never empties, so P(n = k) = P(|I| = k - alpha) for
    k >= alpha and zero below.
    """
    if alpha < 1:
        raise ConfigError(f"the critical stationary law needs alpha >= 1, "
                          f"got {alpha}")
    probs = occupancy_dist_dp(model).probs
    out = np.zeros(alpha + len(probs))
    out[alpha:] = probs
    return out
