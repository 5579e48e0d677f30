"""Slotted Monte-Carlo simulation of the deterministic-service queue.

One replication samples every scheduled arrival (with deletions) across the
horizon plus a margin, bins the kept arrivals into service slots of length
``service_time``, and iterates the queue

    n(j+1) = n(j) - [n(j) > 0] + m(j)

with ``n(j)`` measured immediately before the service at slot ``j`` and
``m(j)`` the arrivals landing in slot ``j``.  The queue starts empty.

Two ways to set the load below 1 are supported and behave differently:
thinning (unit spacing and service, ``survival = rho``) keeps the
occupancy bookkeeping exact, while window loading (``survival = 1`` and
``service_time = rho / rate``) matches the analytic table conventions.

For compact-support delays at unit load the run can additionally track the
arrived-customer count ``|I_j|`` and the conserved offset
``alpha(j) = n(j) - |I_j|``; because the queue starts empty while earlier
customers may already have arrived, ``alpha`` starts at ``-|I_0|`` and
climbs by one at every empty-queue slot, which is exactly the regime the
occupancy solvers describe.

Everything is a deterministic function of the config seed.  Replications
draw their generators from independently spawned seed streams and may run
concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .delays import GAUSSIAN
from .errors import ConfigError
from .process import PsraProcess


@dataclass(frozen=True)
class SimConfig:
    """One simulation request.

    ``warmup`` and ``index_margin`` default to automatic choices: warmup is
    20 schedule spacings per unit of delay spread (capped below the
    horizon), and the margin extends the sampled schedule until omitted
    indices carry expected in-window mass below 1e-9.
    """

    process: PsraProcess
    service_time: float
    horizon: int
    seed: int
    warmup: int | None = None
    index_margin: int | None = None
    track_occupancy: bool = False
    keep_trajectory: bool = False

    def __post_init__(self):
        if self.service_time <= 0:
            raise ConfigError(f"service_time must be positive, "
                              f"got {self.service_time}")
        if self.horizon < 1:
            raise ConfigError(f"horizon must be >= 1, got {self.horizon}")
        if self.warmup is not None and not 0 <= self.warmup < self.horizon:
            raise ConfigError(f"warmup must lie in [0, horizon), "
                              f"got {self.warmup}")

    def resolved_warmup(self) -> int:
        if self.warmup is not None:
            return self.warmup
        d = self.process.delay
        spread = max(d.sigma, 0.0 if d.half_width is None else d.half_width)
        auto = math.ceil(20.0 * max(spread * self.process.rate, 1.0))
        return min(auto, self.horizon // 5)


@dataclass(frozen=True)
class SimResult:
    """Statistics of one run or of pooled replications.

    Trajectory-sized arrays (``counts``, ``queue``, ``occupancy``,
    ``alpha``) are kept only for single runs; pooled results carry the
    scalar statistics, the per-replication means, and the concatenated
    busy-period tables.
    """

    mean_queue: float
    mean_queue_se: float
    queue_pmf: np.ndarray
    mean_arrivals_per_slot: float
    lag1_autocovariance: float
    lag1_autocovariance_se: float
    total_slots: int
    horizon: int
    warmup: int
    n_reps: int
    rep_means: np.ndarray
    total_arrivals: int
    total_services: int
    initial_queue: int
    final_queue: int
    counts: np.ndarray | None = None
    queue: np.ndarray | None = None
    occupancy: np.ndarray | None = None
    alpha: np.ndarray | None = None
    busy_period_alphas: np.ndarray | None = None
    busy_period_lengths: np.ndarray | None = None


@dataclass(frozen=True)
class BusyPeriodStat:
    mean_length: float
    count: int


def _batch_se(x: np.ndarray, n_batches: int = 100) -> float:
    # batch-means standard error; batches must dominate the correlation time
    n = len(x)
    if n < 4:
        return float("nan")
    b = min(n_batches, n // 2)
    m = n // b
    means = x[: b * m].reshape(b, m).mean(axis=1)
    return float(means.std(ddof=1) / math.sqrt(b))


def empirical_autocovariance(counts, lag: int, n_blocks: int = 50) -> tuple[float, float]:
    """Biased-normalized sample autocovariance with a block-jackknife error.

    Returns ``(value, se)``.  The series mean is held fixed across jackknife
    replicates (its own variability is second order here).
    """
    x = np.asarray(counts, dtype=float)
    if lag < 1:
        raise ConfigError(f"lag must be >= 1, got {lag}")
    if len(x) <= 10 * lag:
        raise ConfigError(f"series of length {len(x)} is too short for "
                          f"lag {lag}")
    xm = x.mean()
    z = (x[:-lag] - xm) * (x[lag:] - xm)
    value = float(z.mean())
    b = max(2, min(n_blocks, len(z) // 10))
    m = len(z) // b
    zz = z[: b * m]
    block_sums = zz.reshape(b, m).sum(axis=1)
    total = zz.sum()
    loo = (total - block_sums) / (len(zz) - m)
    se = math.sqrt((b - 1) / b * float(np.sum((loo - loo.mean()) ** 2)))
    return value, se


def _run(config: SimConfig, seed_seq: np.random.SeedSequence) -> SimResult:
    proc = config.process
    T = config.service_time
    H = config.horizon
    warmup = config.resolved_warmup()
    track = config.track_occupancy

    if track:
        d = proc.delay
        if d.family == GAUSSIAN or d.half_width is None:
            raise ConfigError("occupancy tracking requires compact-support "
                              "delays")
        if abs(proc.rate * T - 1.0) > 1e-9:
            raise ConfigError("occupancy tracking requires one scheduled "
                              "arrival per service slot (rate * service_time "
                              "= 1)")
        half_idx = proc.rate * d.half_width
        if abs(half_idx - round(half_idx)) > 1e-9:
            raise ConfigError("occupancy tracking requires the delay support "
                              "to span a whole number of schedule spacings")
        half_idx = int(round(half_idx))

    rng = np.random.default_rng(seed_seq)
    if config.index_margin is None:
        i_lo, i_hi, _ = proc.active_index_range(0.0, H * T, eps=1e-9)
    else:
        need_lo, need_hi, _ = proc.active_index_range(0.0, H * T, eps=1e-9)
        margin = int(config.index_margin)
        if -margin > need_lo or math.ceil(proc.rate * H * T) + margin < need_hi:
            raise ConfigError(f"index_margin {margin} leaves boundary "
                              f"arrivals unsampled; need at least "
                              f"{max(-need_lo, need_hi - math.ceil(proc.rate * H * T))}")
        i_lo = -margin
        i_hi = math.ceil(proc.rate * H * T) + margin

    idx, times, survived = proc.sample_schedule(i_lo, i_hi, rng)
    kept_times = times[survived]
    slots = np.floor(kept_times / T).astype(np.int64)
    in_window = (slots >= 0) & (slots < H)
    m = np.bincount(slots[in_window], minlength=H).astype(np.int64)

    # n(j+1) = max(n(j) - 1, 0) + m(j) solved in closed form: with
    # C(j) = sum_{k<j} (m(k) - 1), n(j) = C(j) + max(0, max_{k<j} (1 - C(k)))
    x = m - 1
    C = np.concatenate(([0], np.cumsum(x)))
    running = np.maximum.accumulate(1 - C[:H])
    n = np.empty(H + 1, dtype=np.int64)
    n[0] = 0
    n[1:] = C[1:] + np.maximum(running, 0)

    measured = n[warmup:H]
    pmf = np.bincount(measured) / len(measured)
    mean_queue = float(measured.mean())
    se = _batch_se(measured)
    m_measured = m[warmup:]
    if len(m_measured) > 10:
        lag1, lag1_se = empirical_autocovariance(m_measured, 1)
    else:
        lag1, lag1_se = float("nan"), float("nan")

    occupancy = alpha = bp_alphas = bp_lengths = None
    if track:
        pre_window = int((slots < 0).sum())
        arrived_by = pre_window + np.concatenate(([0], np.cumsum(m)))
        surv_idx = idx[survived]
        certain = np.searchsorted(surv_idx, np.arange(H + 1) - half_idx,
                                  side="right")
        occupancy = arrived_by - certain
        alpha = n - occupancy
        zeros = np.flatnonzero(n == 0)
        bp_lengths = np.diff(zeros)
        bp_alphas = alpha[zeros[1:]]

    return SimResult(
        mean_queue=mean_queue,
        mean_queue_se=se,
        queue_pmf=pmf,
        mean_arrivals_per_slot=float(m_measured.mean()),
        lag1_autocovariance=lag1,
        lag1_autocovariance_se=lag1_se,
        total_slots=len(measured),
        horizon=H,
        warmup=warmup,
        n_reps=1,
        rep_means=np.array([mean_queue]),
        total_arrivals=int(m.sum()),
        total_services=int((n[:H] > 0).sum()),
        initial_queue=int(n[0]),
        final_queue=int(n[H]),
        counts=m.astype(np.int32),
        queue=n if config.keep_trajectory else None,
        occupancy=occupancy,
        alpha=alpha,
        busy_period_alphas=bp_alphas,
        busy_period_lengths=bp_lengths,
    )


def run_queue_sim(config: SimConfig) -> SimResult:
    """Run a single replication, fully determined by ``config.seed``."""
    return _run(config, np.random.SeedSequence(config.seed))


def replicate(config: SimConfig, n_reps: int) -> SimResult:
    """Pool ``n_reps`` independent replications of ``config``.

    Replication ``i`` draws from the seed stream spawned as child ``i`` of
    the config seed (replication 0 is the plain single-run stream, so
    ``n_reps=1`` reproduces :func:`run_queue_sim` exactly).  The pooled
    standard error is the spread of the replication means.
    """
    if n_reps < 1:
        raise ConfigError(f"n_reps must be >= 1, got {n_reps}")
    if n_reps == 1:
        return run_queue_sim(config)
    results = []
    for i in range(n_reps):
        if i == 0:
            seq = np.random.SeedSequence(config.seed)
        else:
            seq = np.random.SeedSequence(config.seed, spawn_key=(i,))
        results.append(_run(config, seq))

    rep_means = np.array([r.mean_queue for r in results])
    width = max(len(r.queue_pmf) for r in results)
    pmf = np.zeros(width)
    for r in results:
        pmf[: len(r.queue_pmf)] += r.queue_pmf
    pmf /= n_reps
    lag1s = np.array([r.lag1_autocovariance for r in results])
    bp_a = [r.busy_period_alphas for r in results if r.busy_period_alphas is not None]
    bp_l = [r.busy_period_lengths for r in results if r.busy_period_lengths is not None]
    return SimResult(
        mean_queue=float(rep_means.mean()),
        mean_queue_se=float(rep_means.std(ddof=1) / math.sqrt(n_reps)),
        queue_pmf=pmf,
        mean_arrivals_per_slot=float(np.mean([r.mean_arrivals_per_slot for r in results])),
        lag1_autocovariance=float(np.nanmean(lag1s)),
        lag1_autocovariance_se=float(np.nanstd(lag1s, ddof=1) / math.sqrt(n_reps)),
        total_slots=sum(r.total_slots for r in results),
        horizon=config.horizon,
        warmup=results[0].warmup,
        n_reps=n_reps,
        rep_means=rep_means,
        total_arrivals=sum(r.total_arrivals for r in results),
        total_services=sum(r.total_services for r in results),
        initial_queue=sum(r.initial_queue for r in results),
        final_queue=sum(r.final_queue for r in results),
        busy_period_alphas=np.concatenate(bp_a) if bp_a else None,
        busy_period_lengths=np.concatenate(bp_l) if bp_l else None,
    )


def busy_period_stats(result: SimResult) -> dict[int, BusyPeriodStat]:
    """Mean busy-period length grouped by the offset the period ends at.

    Needs occupancy tracking; meaningful for unit load, where each period
    ending at offset ``alpha`` is one sample of the return time that
    :func:`~psra_queue.occupancy.mean_return_time` approximates.  Returns an
    empty mapping when no period completed.
    """
    if result.busy_period_lengths is None:
        raise ConfigError("occupancy tracking was not enabled for this run")
    out: dict[int, BusyPeriodStat] = {}
    alphas = result.busy_period_alphas
    lengths = result.busy_period_lengths
    for a in np.unique(alphas):
        sel = lengths[alphas == a]
        out[int(a)] = BusyPeriodStat(float(sel.mean()), int(len(sel)))
    return out
