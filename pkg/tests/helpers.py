"""Shared oracles for the test suite (independent of the code paths they check)."""

import math

import numpy as np

from intertwine.chamber import Partition


def lambda_plus_cdf_12(y):
    """Closed-form CDF of the (2 -> 1) link at x = (1, 2), alpha = 0.

    Density log(2 / max(1, y)) on [0, 2]; integrates to y log 2 below 1 and
    y log(2/y) + y - 1 above."""
    y = np.asarray(y, dtype=float)
    out = np.where(y <= 1.0, y * math.log(2.0),
                   y * np.log(2.0 / np.clip(y, 1e-300, None)) + y - 1.0)
    return np.clip(out, 0.0, 1.0)


def partitions_up_to(max_weight, max_len):
    """All partitions of weight <= max_weight with at most max_len parts."""
    out = []

    def rec(prefix, remaining, cap):
        out.append(tuple(prefix))
        if len(prefix) == max_len:
            return
        for part in range(min(remaining, cap), 0, -1):
            rec(prefix + [part], remaining - part, part)

    rec([], max_weight, max_weight)
    return [Partition(p) for p in out]
