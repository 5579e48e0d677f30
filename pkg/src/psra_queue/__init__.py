"""Pre-scheduled random arrivals and the deterministic-service queues they feed."""

from .delays import GAUSSIAN, UNIFORM_COMPACT, DelayDistribution
from .errors import ConfigError, DomainError
from .occupancy import (
    AlphaChain,
    OccupancyDist,
    OccupancyModel,
    alpha_chain,
    conditional_occupancy_mean,
    correlated_mean_queue,
    empty_probability_exact,
    mean_return_time,
    min_alpha_for_horizon,
    occupancy_dist_dp,
    occupancy_dist_power_sum,
    stationary_queue_pmf_critical,
)
from .process import PsraProcess, SlotCountDistribution
from .queueing import (
    QueueStationaryDist,
    gid1_stationary,
    independence_approx_mean,
    md1_mean_queue,
)
from .simulate import (
    BusyPeriodStat,
    SimConfig,
    SimResult,
    busy_period_stats,
    empirical_autocovariance,
    replicate,
    run_queue_sim,
)

__version__ = "0.1.0"

__all__ = [
    "GAUSSIAN",
    "UNIFORM_COMPACT",
    "DelayDistribution",
    "ConfigError",
    "DomainError",
    "AlphaChain",
    "OccupancyDist",
    "OccupancyModel",
    "alpha_chain",
    "conditional_occupancy_mean",
    "correlated_mean_queue",
    "empty_probability_exact",
    "mean_return_time",
    "min_alpha_for_horizon",
    "occupancy_dist_dp",
    "occupancy_dist_power_sum",
    "stationary_queue_pmf_critical",
    "PsraProcess",
    "SlotCountDistribution",
    "QueueStationaryDist",
    "gid1_stationary",
    "independence_approx_mean",
    "md1_mean_queue",
    "BusyPeriodStat",
    "SimConfig",
    "SimResult",
    "busy_period_stats",
    "empirical_autocovariance",
    "replicate",
    "run_queue_sim",
    "__version__",
]
