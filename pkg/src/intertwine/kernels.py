"""The three interlacing Markov links between adjacent chamber dimensions.

``density_L`` is the parameter-free link from dimension N+1 to N (uniform
re-weighting by a Vandermonde ratio on the interlacing cell).  The two
alpha-deformed links on the non-negative chamber are ``density_lambda_eq``
(dimension N to N, lower-interlacing cell) and ``density_lambda_plus``
(dimension N+1 to N), whose per-coordinate weight integrates y^alpha/z^(alpha+1)
over the overlap interval, with the conventions x_0 = 0 and y_{N+1} = inf.

Samplers draw exactly from these densities by rejection with product
envelopes; acceptance degrades with dimension, which is fine at the desk
scales (N <= 4) the verification harness uses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chamber import Domain, OrderedPoint, as_coords, vandermonde_rows

__all__ = [
    "KernelParams",
    "density_L",
    "density_lambda_eq",
    "density_lambda_plus",
    "sample_L",
    "sample_lambda_eq",
    "sample_lambda_plus",
    "sample_L_many",
    "sample_lambda_eq_many",
    "sample_lambda_plus_many",
    "sample_L_each",
    "sample_lambda_eq_each",
    "sample_lambda_plus_each",
]

RETRY_CAP = 10**7
_ALPHA_LOG_BRANCH = 1e-10


@dataclass(frozen=True)
class KernelParams:
    """Link parameters: alpha > -1 and the target dimension n."""

    alpha: float
    n: int

    def __post_init__(self):
        if not self.alpha > -1:
            raise ValueError(f"alpha={self.alpha} must be > -1")
        if self.n < 1:
            raise ValueError(f"n={self.n} must be >= 1")


def shifted_factorial(x: float, n: int) -> float:
    """(x)_n = x (x+1) ... (x+n-1); empty product for n = 0."""
    out = 1.0
    for k in range(n):
        out *= x + k
    return out


def _require_strict(x, nonneg: bool) -> np.ndarray:
    arr = as_coords(x)
    if np.any(np.diff(arr) <= 0):
        raise ValueError(f"x must be strictly increasing, got {arr}")
    if nonneg and arr[0] <= 0:
        raise ValueError(f"x must have x_1 > 0, got {arr}")
    return arr


def density_L(x, y) -> float:
    """N! Vandermonde(y)/Vandermonde(x) on the interlacing cell, else 0."""
    xa = _require_strict(x, nonneg=False)
    ya = as_coords(y, expected_dim=xa.size - 1)
    n = ya.size
    if np.any(np.diff(ya) < 0):
        return 0.0
    if not (np.all(xa[:-1] <= ya) and np.all(ya <= xa[1:])):
        return 0.0
    num = float(vandermonde_rows(ya[None, :])[0])
    den = float(vandermonde_rows(xa[None, :])[0])
    return math.factorial(n) * num / den


def density_lambda_eq(params: KernelParams, x, y) -> float:
    """(alpha+1)_N prod(y_k^a / x_k^(a+1)) Vdm(y)/Vdm(x) on the lower cell."""
    a = params.alpha
    xa = _require_strict(x, nonneg=True)
    n = xa.size
    ya = as_coords(y, expected_dim=n)
    if np.any(np.diff(ya) < 0) or ya[0] < 0:
        return 0.0
    if not (np.all(ya <= xa) and np.all(xa[:-1] <= ya[1:])):
        return 0.0
    if ya[0] == 0.0 and a < 0:
        return math.inf
    with np.errstate(divide="ignore"):
        ratio = float(np.prod(ya**a / xa ** (a + 1)))
    num = float(vandermonde_rows(ya[None, :])[0])
    den = float(vandermonde_rows(xa[None, :])[0])
    return shifted_factorial(a + 1, n) * ratio * num / den


def _interval_weight(alpha: float, y: float, a: float, b: float) -> float:
    """int_a^b y^alpha z^(-alpha-1) dz in closed form; 0 unless 0 < a < b."""
    if a <= 0 or a >= b:
        return 0.0
    if abs(alpha) < _ALPHA_LOG_BRANCH:
        return math.log(b / a)
    # (y/a)^alpha (1 - (a/b)^alpha)/alpha, written to avoid cancellation
    return (y / a) ** alpha * (-math.expm1(-alpha * math.log(b / a))) / alpha


def density_lambda_plus(params: KernelParams, x, y) -> float:
    """Density of the (N+1 -> N) alpha-link at y, with x strictly interior."""
    a = params.alpha
    xa = _require_strict(x, nonneg=True)
    n = xa.size - 1
    ya = as_coords(y, expected_dim=n)
    if np.any(np.diff(ya) < 0) or ya[0] < 0:
        return 0.0
    weight = 1.0
    for k in range(n):
        lo_ind = xa[k - 1] if k >= 1 else 0.0
        if not (lo_ind <= ya[k] <= xa[k + 1]):
            return 0.0
        upper = xa[k + 1] if k == n - 1 else min(xa[k + 1], ya[k + 1])
        weight *= _interval_weight(a, ya[k], max(xa[k], ya[k]), upper)
        if weight == 0.0:
            return 0.0
    num = float(vandermonde_rows(ya[None, :])[0])
    den = float(vandermonde_rows(xa[None, :])[0])
    return math.factorial(n) * shifted_factorial(a + 1, n) * num / den * weight


# ---------------------------------------------------------------------------
# exact rejection samplers (vectorized over rows; one stream per call)
# ---------------------------------------------------------------------------


def _rejection_fill(propose, accept_ratio, m: int, n: int, rng) -> np.ndarray:
    """Generic row-wise rejection loop with the package-wide retry cap."""
    out = np.empty((m, n))
    pending = np.ones(m, dtype=bool)
    attempts = np.zeros(m, dtype=np.int64)
    while pending.any():
        idx = np.flatnonzero(pending)
        y = propose(idx, rng)
        ratio = accept_ratio(idx, y)
        acc = rng.uniform(size=idx.size) < ratio
        out[idx[acc]] = y[acc]
        pending[idx[acc]] = False
        attempts[idx] += 1
        if np.any(attempts[pending] >= RETRY_CAP):
            raise RuntimeError(
                f"rejection sampler exceeded {RETRY_CAP} attempts for a row; "
                "input configuration is too degenerate"
            )
    return out


def _envelope_L(xs: np.ndarray) -> np.ndarray:
    """prod_{k<l} (x_{l+1} - x_k): bounds Vandermonde(y) on the cell."""
    m, np1 = xs.shape
    n = np1 - 1
    env = np.ones(m)
    for k in range(n):
        for l in range(k + 1, n):
            env *= xs[:, l + 1] - xs[:, k]
    return env


def sample_L_each(xs: np.ndarray, rng) -> np.ndarray:
    """One draw of the parameter-free link per row of xs (shape (m, N+1))."""
    xs = np.asarray(xs, dtype=float)
    m, np1 = xs.shape
    n = np1 - 1
    lo, hi = xs[:, :-1], xs[:, 1:]
    env = _envelope_L(xs)

    def propose(idx, rng):
        u = rng.uniform(size=(idx.size, n))
        return lo[idx] + u * (hi[idx] - lo[idx])

    def ratio(idx, y):
        return vandermonde_rows(y) / env[idx]

    return _rejection_fill(propose, ratio, m, n, rng)


def _envelope_lambda_eq(xs: np.ndarray) -> np.ndarray:
    """prod_{k<l} (x_l - x_{k-1}) with x_0 = 0: bounds Vdm(y) on the cell."""
    m, n = xs.shape
    env = np.ones(m)
    for k in range(n):
        low = xs[:, k - 1] if k >= 1 else 0.0
        for l in range(k + 1, n):
            env *= xs[:, l] - low
    return env


def sample_lambda_eq_each(alpha: float, xs: np.ndarray, rng) -> np.ndarray:
    """One draw of the (N -> N) alpha-link per row of xs (shape (m, N))."""
    if not alpha > -1:
        raise ValueError(f"alpha={alpha} must be > -1")
    xs = np.asarray(xs, dtype=float)
    if np.any(xs[:, 0] <= 0):
        raise ValueError("all rows need x_1 > 0")
    m, n = xs.shape
    lo = np.concatenate([np.zeros((m, 1)), xs[:, :-1]], axis=1)
    ap1 = alpha + 1.0
    lo_p, hi_p = lo**ap1, xs**ap1
    env = _envelope_lambda_eq(xs)

    def propose(idx, rng):
        u = rng.uniform(size=(idx.size, n))
        return (u * (hi_p[idx] - lo_p[idx]) + lo_p[idx]) ** (1.0 / ap1)

    def ratio(idx, y):
        return vandermonde_rows(y) / env[idx]

    return _rejection_fill(propose, ratio, m, n, rng)


def sample_lambda_plus_each(alpha: float, xs: np.ndarray, rng) -> np.ndarray:
    """One draw of the (N+1 -> N) alpha-link per row, via the two-step
    decomposition: parameter-free link first, then the equal-dimension link."""
    xs = np.asarray(xs, dtype=float)
    if np.any(xs[:, 0] <= 0):
        raise ValueError("all rows need x_1 > 0")
    z = sample_L_each(xs, rng)
    # the intermediate point is a.s. interior; repair float-boundary rows
    for _ in range(64):
        bad = (z[:, 0] <= 0) | np.any(np.diff(z, axis=1) <= 0, axis=1)
        if not bad.any():
            break
        z[bad] = sample_L_each(xs[bad], rng)
    else:
        raise RuntimeError("could not draw an interior intermediate point")
    return sample_lambda_eq_each(alpha, z, rng)


def sample_L_many(x, n_samples: int, rng) -> np.ndarray:
    xa = _require_strict(x, nonneg=False)
    return sample_L_each(np.tile(xa, (n_samples, 1)), rng)


def sample_lambda_eq_many(params: KernelParams, x, n_samples: int, rng) -> np.ndarray:
    xa = _require_strict(x, nonneg=True)
    return sample_lambda_eq_each(params.alpha, np.tile(xa, (n_samples, 1)), rng)


def sample_lambda_plus_many(params: KernelParams, x, n_samples: int, rng) -> np.ndarray:
    xa = _require_strict(x, nonneg=True)
    return sample_lambda_plus_each(params.alpha, np.tile(xa, (n_samples, 1)), rng)


def _domain_of(x) -> Domain:
    return x.domain if isinstance(x, OrderedPoint) else Domain.WHOLE_LINE


def sample_L(x, rng) -> OrderedPoint:
    """Exact single draw from the parameter-free link at x."""
    row = sample_L_many(x, 1, rng)[0]
    return OrderedPoint(tuple(np.sort(row)), _domain_of(x))


def sample_lambda_eq(params: KernelParams, x, rng) -> OrderedPoint:
    """Exact single draw from the (N -> N) alpha-link at x."""
    row = sample_lambda_eq_many(params, x, 1, rng)[0]
    return OrderedPoint(tuple(np.sort(row)), Domain.NON_NEGATIVE)


def sample_lambda_plus(params: KernelParams, x, rng) -> OrderedPoint:
    """Exact single draw from the (N+1 -> N) alpha-link at x."""
    row = sample_lambda_plus_many(params, x, 1, rng)[0]
    return OrderedPoint(tuple(np.sort(row)), Domain.NON_NEGATIVE)
