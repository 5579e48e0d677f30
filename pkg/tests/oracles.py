"""Independent brute-force oracles shared by the test modules.

Everything here recomputes model quantities by direct enumeration or
quadrature, deliberately avoiding the recursions used inside the package.
"""

import itertools

import numpy as np


def bernoulli_sum_enum(ps):
    """pmf of a sum of independent Bernoulli(p_i) by full subset enumeration."""
    ps = np.asarray(ps, dtype=float)
    n = len(ps)
    assert n <= 16, "enumeration oracle limited to 2^16 subsets"
    bits = np.array(list(itertools.product((0, 1), repeat=n)), dtype=float)
    probs = np.where(bits == 1.0, ps, 1.0 - ps).prod(axis=1)
    out = np.zeros(n + 1)
    np.add.at(out, bits.sum(axis=1).astype(int), probs)
    return out


def normal_cdf(x):
    """Error-function route to the standard normal distribution function."""
    from math import erf, sqrt
    return 0.5 * (1.0 + erf(x / sqrt(2.0)))
