"""Scheduled-arrival delay distributions.

Every arrival model in this package perturbs a deterministic schedule by
i.i.d. zero-mean delays.  A delay law is described by a unit-scale base
density ``f`` with peak value ``M``; the law at scale ``sigma`` is the
rescaling ``f(t / sigma) / sigma``, so its standard deviation is ``sigma``
and its density peak is ``M / sigma``.

Two families are built in:

* ``gaussian`` -- normal with standard deviation ``sigma``.
* ``uniform_compact`` -- uniform on ``[-half_width, half_width]``, the
  compact-support family used by the occupancy solvers (which additionally
  require an integer half width when the schedule spacing is 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

GAUSSIAN = "gaussian"
UNIFORM_COMPACT = "uniform_compact"

_GAUSSIAN_PEAK = 1.0 / math.sqrt(2.0 * math.pi)
_UNIFORM_PEAK = 1.0 / (2.0 * math.sqrt(3.0))


@dataclass(frozen=True)
class DelayDistribution:
    """Zero-mean delay law, immutable and safe to share between tasks.

    Do not call the constructor directly; use :meth:`gaussian` or
    :meth:`uniform`.
    """

    family: str
    sigma: float                 # standard deviation, time units
    half_width: float | None     # uniform support radius; None for gaussian
    peak: float                  # max of the unit-scale base density

    @classmethod
    def gaussian(cls, sigma: float) -> "DelayDistribution":
        if sigma <= 0:
            raise ValueError(f"sigma must be positive, got {sigma}")
        return cls(GAUSSIAN, float(sigma), None, _GAUSSIAN_PEAK)

    @classmethod
    def uniform(cls, half_width: float) -> "DelayDistribution":
        """Uniform on [-half_width, half_width]; sigma = half_width/sqrt(3)."""
        if half_width <= 0:
            raise ValueError(f"half_width must be positive, got {half_width}")
        return cls(UNIFORM_COMPACT, float(half_width) / math.sqrt(3.0),
                   float(half_width), _UNIFORM_PEAK)

    @property
    def support_radius(self) -> float:
        """Radius beyond which the density is exactly zero (inf if none)."""
        return self.half_width if self.half_width is not None else math.inf

    def pdf(self, t):
        """Density at ``t`` (scalar or array)."""
        t = np.asarray(t, dtype=float)
        if self.family == GAUSSIAN:
            z = t / self.sigma
            out = np.exp(-0.5 * z * z) * (_GAUSSIAN_PEAK / self.sigma)
        else:
            L = self.half_width
            out = np.where(np.abs(t) <= L, 1.0 / (2.0 * L), 0.0)
        return out if out.ndim else float(out)

    def cdf(self, t):
        """Distribution function at ``t`` (scalar or array)."""
        t = np.asarray(t, dtype=float)
        if self.family == GAUSSIAN:
            out = ndtr(t / self.sigma)
        else:
            L = self.half_width
            out = np.clip((t + L) / (2.0 * L), 0.0, 1.0)
        return out if out.ndim else float(out)

    def sample(self, rng: np.random.Generator, size=None):
        """Draw delays using the caller-owned generator ``rng``."""
        if self.family == GAUSSIAN:
            return rng.normal(0.0, self.sigma, size=size)
        L = self.half_width
        return rng.uniform(-L, L, size=size)
