"""Single-server deterministic-service queue solvers.

Time is slotted by the service length: one customer is served per slot
whenever the queue is nonempty, and the number of arrivals per slot is drawn
from a fixed law ``Q``.  Treating the per-slot counts as independent gives
the discrete-time GI/D/1 model, whose stationary queue-length probabilities
satisfy

    P_0 = (P_0 + P_1) Q_0
    P_n = P_0 Q_n + sum_{k=1}^{n+1} P_k Q_{n-k+1}        (n >= 1)

Setting z -> 1 in the generating function P(z) = P_0 (1-z) / (1 - z/Q(z))
forces P_0 = 1 - mean(Q); that derived value seeds the forward recursion
solved here.  With Poisson slot counts the model is M/D/1 and the mean
queue has the closed form implemented by :func:`md1_mean_queue`.

Feeding the scheduled-arrival slot-count law into the recursion ignores the
negative correlation between adjacent slots, so these solvers overestimate
congestion when traffic is close to critical; the occupancy module provides
the correlated treatment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .process import PsraProcess, SlotCountDistribution


def md1_mean_queue(rho: float) -> float:
    """Mean M/D/1 queue length, rho(2 - rho) / (2(1 - rho)).

    Raises :class:`DomainError` for rho >= 1, where the queue diverges.
    """
    if not 0.0 < rho < 1.0:
        raise DomainError(f"M/D/1 queue requires 0 < rho < 1, got {rho}")
    return rho * (2.0 - rho) / (2.0 * (1.0 - rho))


@dataclass(frozen=True)
class QueueStationaryDist:
    """Stationary queue-length probabilities from the GI/D/1 recursion.

    ``residual`` is the mass not represented by ``probs`` (recursion tail
    past the truncation point); ``max_clamped`` records the largest negative
    round-off value that was clamped to zero.
    """

    probs: np.ndarray
    traffic_intensity: float
    residual: float
    max_clamped: float

    @property
    def mean(self) -> float:
        return float(np.arange(len(self.probs)) @ self.probs)


def gid1_stationary(slot_counts, n_max: int = 10_000) -> QueueStationaryDist:
    """Solve the GI/D/1 stationary recursion for a per-slot arrival law.

    ``slot_counts`` is a :class:`~psra_queue.process.SlotCountDistribution`
    or a bare pmf array.  The recursion runs until the probabilities fall
    below 1e-12 or ``n_max`` terms, whichever comes first; the result is
    rejected if the represented mass misses 1 by more than 1e-6 (the forward
    recursion divides by Q_0 at every step and can amplify round-off).
    """
    if isinstance(slot_counts, SlotCountDistribution):
        q = np.asarray(slot_counts.probs, dtype=float)
        rho = slot_counts.mean
    else:
        q = np.asarray(slot_counts, dtype=float)
        rho = float(np.arange(len(q)) @ q)
    if len(q) == 0 or q[0] <= 0.0:
        raise DomainError("recursion is unsolvable: zero-arrival slot "
                          "probability Q_0 must be positive")
    if rho >= 1.0:
        raise DomainError(f"stationary queue requires mean arrivals per slot "
                          f"< 1, got {rho}")
    q0 = float(q[0])

    def q_at(n: int) -> float:
        return float(q[n]) if n < len(q) else 0.0

    p = [1.0 - rho]
    if 1.0 - rho > 1e-12:
        p.append(p[0] * (1.0 - q0) / q0)
    max_clamped = 0.0
    while len(p) <= n_max:
        n = len(p) - 1
        conv = math.fsum(p[k] * q_at(n - k + 1) for k in range(1, n + 1))
        nxt = (p[n] - p[0] * q_at(n) - conv) / q0
        if nxt < 0.0:
            max_clamped = max(max_clamped, -nxt)
            nxt = 0.0
        p.append(nxt)
        if nxt < 1e-12:
            break
    probs = np.array(p)
    residual = 1.0 - math.fsum(p)
    if abs(residual) > 1e-6:
        raise DomainError(f"GI/D/1 recursion lost normalization "
                          f"(residual {residual:.3e}); the slot-count law is "
                          f"too close to critical for a stable forward solve")
    return QueueStationaryDist(
        probs=probs,
        traffic_intensity=rho,
        residual=residual,
        max_clamped=max_clamped,
    )


def independence_approx_mean(proc: PsraProcess, t: float, T: float) -> float:
    """Mean queue for scheduled arrivals, correlations between slots ignored.

    Closed form of the GI/D/1 mean when the slot-count law is the
    Poisson-binomial over p~_i = survival * p_i(t, t+T):

        [2 S - S^2 - S_2] / [2 (1 - S)],   S = sum p~_i,  S_2 = sum p~_i^2.
    """
    i_lo, i_hi, _ = proc.active_index_range(t, T, eps=1e-12)
    p = proc.survival * proc.arrival_probability(np.arange(i_lo, i_hi + 1), t, T)
    S = math.fsum(p)
    S2 = math.fsum(p * p)
    if S >= 1.0:
        raise DomainError(f"mean arrivals per service slot is {S:.6f} >= 1: "
                          f"queue diverges")
    return (2.0 * S - S * S - S2) / (2.0 * (1.0 - S))
