"""Published reference grids for the gaussian-delay arrival model.

Expected values for the three reproduction commands, each printed to six
decimals in the source material: the instantaneous arrival rate on a
(sigma, t) grid at unit schedule rate, the traffic intensity (mean arrivals
per service slot) at service time 0.9, and the mean queue under the
independence approximation at service time 0.9.  The ``--check`` mode of
the CLI compares freshly computed grids against these values.
"""

RATE_SIGMAS = (0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)
RATE_TIMES = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)
RATE_TOLERANCE = 1e-6

# rate(sigma, t), unit schedule rate, no deletions
RATE = {
    0.2: (1.994726, 1.760407, 1.210523, 0.651951, 0.292114, 0.175283,
          0.292114, 0.651951, 1.210523, 1.760407, 1.994726),
    0.3: (1.340089, 1.274318, 1.103259, 0.894087, 0.726696, 0.663191,
          0.726696, 0.894087, 1.103259, 1.274318, 1.340089),
    0.4: (1.085005, 1.068767, 1.026261, 0.973729, 0.931237, 0.915008,
          0.931237, 0.973729, 1.026261, 1.068767, 1.085005),
    0.5: (1.014384, 1.011637, 1.004445, 0.995555, 0.988363, 0.985616,
          0.988363, 0.995555, 1.004445, 1.011637, 1.014384),
    0.6: (1.00164, 1.001327, 1.000507, 0.999493, 0.998673, 0.99836,
          0.998673, 0.999493, 1.000507, 1.001327, 1.00164),
    0.7: (1.000126, 1.000102, 1.000039, 0.999961, 0.999898, 0.999874,
          0.999898, 0.999961, 1.000039, 1.000102, 1.000126),
    0.8: (1.000007, 1.000005, 1.000002, 0.999998, 0.999995, 0.999993,
          0.999995, 0.999998, 1.000002, 1.000005, 1.000007),
    0.9: (1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0),
    1.0: (1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0),
}

INTENSITY_SIGMAS = RATE_SIGMAS
INTENSITY_TIMES = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
INTENSITY_SERVICE_TIME = 0.9
INTENSITY_TOLERANCE = 1e-6

# intensity(sigma, t) = mean arrivals in (t, t + 0.9]
INTENSITY = {
    0.2: (0.808534, 0.808534, 0.850089, 0.907951, 0.954826, 0.9786,
          0.9786, 0.954826, 0.907951, 0.850089),
    0.3: (0.868214, 0.868214, 0.88048, 0.900153, 0.919615, 0.931537,
          0.931537, 0.919615, 0.900153, 0.88048),
    0.4: (0.892048, 0.892048, 0.895086, 0.900001, 0.904914, 0.907951,
          0.907951, 0.904914, 0.900001, 0.895086),
    0.5: (0.898654, 0.898654, 0.899168, 0.9, 0.900832, 0.901346,
          0.901346, 0.900832, 0.9, 0.899168),
    0.6: (0.899847, 0.899847, 0.899905, 0.9, 0.900095, 0.900153,
          0.900153, 0.900095, 0.9, 0.899905),
    0.7: (0.899988, 0.899988, 0.899993, 0.9, 0.900007, 0.900012,
          0.900012, 0.900007, 0.9, 0.899993),
    0.8: (0.899999, 0.899999, 0.9, 0.9, 0.9, 0.900001,
          0.900001, 0.9, 0.9, 0.9),
    0.9: (0.9, 0.9, 0.9, 0.9, 0.9, 0.9, 0.9, 0.9, 0.9, 0.9),
    1.0: (0.9, 0.9, 0.9, 0.9, 0.9, 0.9, 0.9, 0.9, 0.9, 0.9),
}

QUEUE_SIGMAS = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)
QUEUE_TIMES = RATE_TIMES
QUEUE_SERVICE_TIME = 0.9
QUEUE_TOLERANCE = 1e-4

# mean queue N(sigma, t) under the independence approximation, T = 0.9
QUEUE = {
    0.1: (0.89105, 0.89105, 1.00493, 1.04024, 1.02267, 1.00905,
          1.00905, 1.02267, 1.04024, 1.00493, 0.89105),
    0.2: (1.61425, 1.61425, 1.58187, 1.51872, 1.42902, 1.32201,
          1.32201, 1.42902, 1.51872, 1.58187, 1.61425),
    0.3: (2.26812, 2.26812, 2.21399, 2.10656, 1.95949, 1.83453,
          1.83453, 1.95949, 2.10656, 2.21399, 2.26812),
    0.4: (2.75253, 2.75253, 2.68673, 2.57205, 2.44587, 2.36133,
          2.36133, 2.44587, 2.57205, 2.68673, 2.75253),
    0.5: (3.03548, 3.03548, 2.9955, 2.92993, 2.86327, 2.82151,
          2.82151, 2.86327, 2.92993, 2.9955, 3.03548),
    0.6: (3.24502, 3.24502, 3.23019, 3.20614, 3.18205, 3.16714,
          3.16714, 3.18205, 3.20614, 3.23019, 3.24502),
    0.7: (3.43207, 3.43207, 3.42809, 3.42165, 3.41521, 3.41123,
          3.41123, 3.41521, 3.42165, 3.42809, 3.43207),
    0.8: (3.59488, 3.59488, 3.59405, 3.5927, 3.59134, 3.59051,
          3.59051, 3.59134, 3.5927, 3.59405, 3.59488),
    0.9: (3.73131, 3.73131, 3.73117, 3.73094, 3.73071, 3.73056,
          3.73056, 3.73071, 3.73094, 3.73117, 3.73131),
    1.0: (3.84462, 3.84462, 3.8446, 3.84457, 3.84454, 3.84452,
          3.84452, 3.84454, 3.84457, 3.8446, 3.84462),
}
