"""Statistical and exact checks for the kernel/diffusion identities.

Distribution-level identities (intertwinings, invariance, consistency,
boundary coherence) are certified by two-path Monte Carlo and an energy
distance permutation test; analytic identities (eigenfunctions, conjugation
identities, drift forms, kernel normalizations) are checked by exact
calculus and adaptive quadrature.  Every check returns a TestReport whose
metadata records seeds and sizes, and all randomness flows from named
streams derived from one master seed, so reruns are bit-identical.
"""

from __future__ import annotations

import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats
from scipy.integrate import IntegrationWarning, quad
from scipy.spatial.distance import cdist

from .chamber import BoundaryPoint, as_coords, embed_boundary, gamma_bar
from .diffusion import (PickrellParams, Scheme, SdeConfig, boundary_flow,
                        simulate_laguerre_matrix_paths, simulate_laguerre_paths,
                        simulate_pickrell_paths)
from .ensembles import EnsembleParams, sample_pickrell
from .kernels import (KernelParams, density_L, density_lambda_eq,
                      density_lambda_plus, sample_L_each, sample_L_many,
                      sample_lambda_eq_each, sample_lambda_eq_many,
                      sample_lambda_plus_each, sample_lambda_plus_many)
from .rng import generator, named_seed

__all__ = [
    "TestReport",
    "quad_1d",
    "quad_cell",
    "energy_perm_test",
    "ks_cdf_test",
    "check_intertwine_laguerre",
    "check_intertwine_pickrell",
    "check_shifted_intertwine",
    "check_invariance_pickrell",
    "check_consistency",
    "apply_generator_1d",
    "check_vandermonde_eigen",
    "check_h_transform_identities",
    "check_h_constants",
    "check_pickrell_drift_forms",
    "check_flow_convergence",
    "check_kernel_normalization",
    "check_decomposition",
    "flow_start_profile",
    "run_suite",
    "SUITES",
]

P_THRESHOLD = 0.01


@dataclass
class TestReport:
    """Outcome of one verification: statistic, optional p-value, verdict."""

    __test__ = False  # not a pytest class, despite the name

    name: str
    statistic: float
    threshold: float
    passed: bool
    p_value: float | None = None
    meta: dict = field(default_factory=dict)

    @classmethod
    def statistical(cls, name, statistic, p_value, threshold=P_THRESHOLD, meta=None):
        return cls(name=name, statistic=float(statistic), threshold=float(threshold),
                   passed=bool(p_value > threshold), p_value=float(p_value),
                   meta=dict(meta or {}))

    @classmethod
    def deterministic(cls, name, statistic, threshold, meta=None):
        return cls(name=name, statistic=float(statistic), threshold=float(threshold),
                   passed=bool(statistic <= threshold), p_value=None,
                   meta=dict(meta or {}))

    def to_dict(self) -> dict:
        def _round(v):
            if isinstance(v, (float, np.floating)):
                return float(f"{float(v):.9g}")
            if isinstance(v, np.integer):
                return int(v)
            return v

        return {
            "name": self.name,
            "statistic": _round(self.statistic),
            "p_value": None if self.p_value is None else _round(self.p_value),
            "threshold": _round(self.threshold),
            "passed": self.passed,
            "meta": {k: _round(v) if isinstance(v, float) else v for k, v in self.meta.items()},
        }


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------


def quad_1d(f, a: float, b: float, tol: float = 1e-10, points=None) -> float:
    """Adaptive quadrature of f on [a, b] to absolute tolerance tol."""
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        val, err = quad(f, a, b, epsabs=tol * 0.5, epsrel=1.49e-8, limit=500,
                        points=points)
    if err > 50.0 * max(tol, abs(val) * 1e-7):
        raise RuntimeError(f"quadrature did not converge: value={val}, err={err}")
    return float(val)


def quad_cell(f, bounds, tol: float = 1e-8) -> float:
    """Iterated quadrature over up to two coordinates.

    ``bounds`` is a list of (lo, hi) pairs, one per coordinate; entries of
    the inner pair may be callables of the first coordinate (interlacing
    cells have such staircase bounds).
    """
    if len(bounds) == 1:
        lo, hi = bounds[0]
        return quad_1d(lambda y: f(y), lo, hi, tol)
    if len(bounds) != 2:
        raise ValueError("quad_cell supports dimensions 1 and 2")
    (lo1, hi1), (lo2, hi2) = bounds

    def outer(y1):
        a = lo2(y1) if callable(lo2) else lo2
        b = hi2(y1) if callable(hi2) else hi2
        if not a < b:
            return 0.0
        return quad_1d(lambda y2: f(y1, y2), a, b, tol * 0.1)

    return quad_1d(outer, lo1, hi1, tol)


# ---------------------------------------------------------------------------
# two-sample machinery
# ---------------------------------------------------------------------------


def _as_rows(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    return arr


def energy_perm_test(a, b, n_perm: int, rng, threshold: float = P_THRESHOLD,
                     max_points: int = 2048, name: str = "energy_perm_test") -> TestReport:
    """Energy-distance two-sample permutation test.

    statistic = 2 E||a-b|| - E||a-a'|| - E||b-b'|| with plug-in (V-statistic)
    means, so identical samples score exactly 0; the p-value counts label
    permutations with a statistic at least as large.  Inputs larger than
    ``max_points`` per group are subsampled (exactness of the permutation
    test is unaffected; only power changes).
    """
    a = _as_rows(a)
    b = _as_rows(b)
    if a.shape[0] < 100 or b.shape[0] < 100:
        raise ValueError("energy test needs at least 100 points per sample")
    if a.shape[1] != b.shape[1]:
        raise ValueError("samples must share a dimension")
    full_na, full_nb = a.shape[0], b.shape[0]
    if a.shape[0] > max_points:
        a = a[rng.choice(a.shape[0], size=max_points, replace=False)]
    if b.shape[0] > max_points:
        b = b[rng.choice(b.shape[0], size=max_points, replace=False)]
    na, nb = a.shape[0], b.shape[0]
    n = na + nb
    pooled = np.vstack([a, b])
    dist = cdist(pooled, pooled).astype(np.float32)
    total = float(dist.sum())

    def stats_from_indicators(v):
        # with v the 0/1 label matrix, one GEMM gives all within/between sums
        u = v @ dist
        s_aa = np.einsum("ij,ij->i", v, u, dtype=np.float64)
        s_ab = u.sum(axis=1, dtype=np.float64) - s_aa
        s_bb = total - 2.0 * s_ab - s_aa
        return 2.0 * s_ab / (na * nb) - s_aa / (na * na) - s_bb / (nb * nb)

    v0 = np.zeros((1, n), dtype=np.float32)
    v0[0, :na] = 1.0
    observed = float(stats_from_indicators(v0)[0])
    idx = np.stack([rng.permutation(n)[:na] for _ in range(n_perm)])
    v = np.zeros((n_perm, n), dtype=np.float32)
    v[np.arange(n_perm)[:, None], idx] = 1.0
    perm_stats = stats_from_indicators(v)
    count = int((perm_stats >= observed).sum())
    p_value = (count + 1.0) / (n_perm + 1.0)
    meta = {"n_a": full_na, "n_b": full_nb, "n_a_used": na, "n_b_used": nb, "n_perm": n_perm}
    return TestReport.statistical(name, observed, p_value, threshold, meta)


def ks_cdf_test(name: str, samples, cdf, threshold: float = P_THRESHOLD, meta=None) -> TestReport:
    """One-sample Kolmogorov-Smirnov test against a callable CDF."""
    res = stats.kstest(np.asarray(samples, dtype=float).ravel(), cdf)
    m = dict(meta or {})
    m["n"] = int(np.asarray(samples).shape[0])
    return TestReport.statistical(name, res.statistic, res.pvalue, threshold, m)


def interiorize_rows(rows: np.ndarray, floor: float = 1e-12) -> np.ndarray:
    """Sorted copies with a positive floor and ties nudged apart.

    Simulated states can sit exactly on the chamber boundary (a
    discretization artifact of measure zero in the continuum); kernel
    densities need strictly interior inputs.
    """
    rows = np.sort(np.asarray(rows, dtype=float), axis=1)
    rows[:, 0] = np.maximum(rows[:, 0], floor)
    for k in range(1, rows.shape[1]):
        tie = rows[:, k] <= rows[:, k - 1]
        rows[tie, k] = rows[tie, k - 1] * (1.0 + 1e-12) + floor
    return rows


# ---------------------------------------------------------------------------
# intertwining / invariance / consistency checks
# ---------------------------------------------------------------------------


def check_intertwine_laguerre(alpha, n, x, t, n_samples, dt, seed, n_perm=500,
                              alpha_mismatch=0.0, name=None) -> TestReport:
    """Two-path check: evolve then project vs project then evolve.

    With ``alpha_mismatch`` nonzero the second path runs at a shifted
    parameter; the test is then expected to fail (sensitivity control).
    """
    xa = as_coords(x, expected_dim=n + 1)
    cfg = SdeConfig(dt=dt, t=t)
    ends, _, _ = simulate_laguerre_paths(alpha, n + 1, xa, cfg, n_samples,
                                         named_seed(seed, "pathA-evolve"))
    y_a = sample_lambda_plus_each(alpha, interiorize_rows(ends),
                                  generator(named_seed(seed, "pathA-kernel")))
    alpha_b = alpha + alpha_mismatch
    z = sample_lambda_plus_many(KernelParams(alpha_b, n), xa, n_samples,
                                generator(named_seed(seed, "pathB-kernel")))
    y_b, _, _ = simulate_laguerre_paths(alpha_b, n, z, cfg, n_samples,
                                        named_seed(seed, "pathB-evolve"))
    rep = energy_perm_test(y_a, y_b, n_perm, generator(named_seed(seed, "perm")),
                           name=name or f"intertwine-laguerre[N={n},alpha={alpha},t={t}]")
    rep.meta.update({"seed": seed, "dt": dt, "t": t, "alpha": alpha,
                     "alpha_mismatch": alpha_mismatch, "x": [float(v) for v in xa]})
    return rep


def check_intertwine_pickrell(s, alpha, n, x, t, n_samples, dt, seed, n_perm=500,
                              s_mismatch=0.0, name=None) -> TestReport:
    """Two-path check for the Pickrell semigroup through the (N+1 -> N) link."""
    xa = as_coords(x, expected_dim=n + 1)
    cfg = SdeConfig(dt=dt, t=t)
    ends, _, _ = simulate_pickrell_paths(PickrellParams(s, alpha, n + 1), xa, cfg,
                                         n_samples, named_seed(seed, "pathA-evolve"))
    y_a = sample_lambda_plus_each(alpha, interiorize_rows(ends),
                                  generator(named_seed(seed, "pathA-kernel")))
    z = sample_lambda_plus_many(KernelParams(alpha, n), xa, n_samples,
                                generator(named_seed(seed, "pathB-kernel")))
    y_b, _, _ = simulate_pickrell_paths(PickrellParams(s + s_mismatch, alpha, n), z, cfg,
                                        n_samples, named_seed(seed, "pathB-evolve"))
    rep = energy_perm_test(y_a, y_b, n_perm, generator(named_seed(seed, "perm")),
                           name=name or f"intertwine-pickrell[N={n},s={s},alpha={alpha},t={t}]")
    rep.meta.update({"seed": seed, "dt": dt, "t": t, "s": s, "alpha": alpha,
                     "s_mismatch": s_mismatch, "x": [float(v) for v in xa]})
    return rep


def check_shifted_intertwine(kind, s, alpha, n, x, t, n_samples, dt, seed,
                             n_perm=500, name=None) -> TestReport:
    """Parameter-shifted intertwinings of the Pickrell semigroups.

    kind='L':        evolve at alpha upstairs == evolve at alpha+1 downstairs,
                     through the parameter-free link (x has dimension N+1).
    kind='LambdaEq': evolve at alpha+1 == evolve at alpha, through the
                     equal-dimension alpha-link (x has dimension N).
    """
    cfg = SdeConfig(dt=dt, t=t)
    if kind == "L":
        xa = as_coords(x, expected_dim=n + 1)
        ends, _, _ = simulate_pickrell_paths(PickrellParams(s, alpha, n + 1), xa, cfg,
                                             n_samples, named_seed(seed, "pathA-evolve"))
        y_a = sample_L_each(interiorize_rows(ends), generator(named_seed(seed, "pathA-kernel")))
        z = sample_L_many(xa, n_samples, generator(named_seed(seed, "pathB-kernel")))
        y_b, _, _ = simulate_pickrell_paths(PickrellParams(s, alpha + 1.0, n), z, cfg,
                                            n_samples, named_seed(seed, "pathB-evolve"))
    elif kind == "LambdaEq":
        xa = as_coords(x, expected_dim=n)
        ends, _, _ = simulate_pickrell_paths(PickrellParams(s, alpha + 1.0, n), xa, cfg,
                                             n_samples, named_seed(seed, "pathA-evolve"))
        y_a = sample_lambda_eq_each(alpha, interiorize_rows(ends),
                                    generator(named_seed(seed, "pathA-kernel")))
        z = sample_lambda_eq_many(KernelParams(alpha, n), xa, n_samples,
                                  generator(named_seed(seed, "pathB-kernel")))
        y_b, _, _ = simulate_pickrell_paths(PickrellParams(s, alpha, n), z, cfg,
                                            n_samples, named_seed(seed, "pathB-evolve"))
    else:
        raise ValueError(f"unknown kind {kind!r}")
    rep = energy_perm_test(y_a, y_b, n_perm, generator(named_seed(seed, "perm")),
                           name=name or f"shifted-intertwine-{kind}[N={n},s={s},alpha={alpha},t={t}]")
    rep.meta.update({"seed": seed, "dt": dt, "t": t, "s": s, "alpha": alpha, "kind": kind})
    return rep


def check_invariance_pickrell(s, alpha, n, t, n_samples, dt, seed, n_perm=500,
                              s_mismatch=0.0, name=None) -> TestReport:
    """Evolved equilibrium samples must match fresh equilibrium samples."""
    params = EnsembleParams(s, alpha, n)
    pool = sample_pickrell(params, 2 * n_samples, generator(named_seed(seed, "ensemble")))
    order = generator(named_seed(seed, "split")).permutation(2 * n_samples)
    cfg = SdeConfig(dt=dt, t=t)
    evolved, _, _ = simulate_pickrell_paths(PickrellParams(s + s_mismatch, alpha, n),
                                            pool[order[:n_samples]], cfg, n_samples,
                                            named_seed(seed, "evolve"))
    rep = energy_perm_test(evolved, pool[order[n_samples:]], n_perm,
                           generator(named_seed(seed, "perm")),
                           name=name or f"invariance-pickrell[N={n},s={s},alpha={alpha},t={t}]")
    rep.meta.update({"seed": seed, "dt": dt, "t": t, "s": s, "alpha": alpha,
                     "s_mismatch": s_mismatch})
    return rep


def check_consistency(which, s, alpha, n, n_samples, seed, n_perm=500, name=None) -> TestReport:
    """Push equilibrium ensembles through a link and compare with the target.

    which='alpha-link': dimension N+1 ensemble through the (N+1 -> N)
        alpha-link equals the dimension N ensemble (same alpha).
    which='free-link':  dimension N+1 ensemble through the parameter-free
        link equals the dimension N ensemble at alpha+1.
    which='eq-link':    dimension N ensemble at alpha+1 through the
        equal-dimension alpha-link equals the dimension N ensemble at alpha.
    """
    rng_src = generator(named_seed(seed, "source"))
    rng_k = generator(named_seed(seed, "kernel"))
    rng_tgt = generator(named_seed(seed, "target"))
    if which == "alpha-link":
        src = sample_pickrell(EnsembleParams(s, alpha, n + 1), n_samples, rng_src)
        pushed = sample_lambda_plus_each(alpha, interiorize_rows(src), rng_k)
        target = sample_pickrell(EnsembleParams(s, alpha, n), n_samples, rng_tgt)
    elif which == "free-link":
        src = sample_pickrell(EnsembleParams(s, alpha, n + 1), n_samples, rng_src)
        pushed = sample_L_each(interiorize_rows(src), rng_k)
        target = sample_pickrell(EnsembleParams(s, alpha + 1.0, n), n_samples, rng_tgt)
    elif which == "eq-link":
        src = sample_pickrell(EnsembleParams(s, alpha + 1.0, n), n_samples, rng_src)
        pushed = sample_lambda_eq_each(alpha, interiorize_rows(src), rng_k)
        target = sample_pickrell(EnsembleParams(s, alpha, n), n_samples, rng_tgt)
    else:
        raise ValueError(f"unknown consistency identity {which!r}")
    rep = energy_perm_test(pushed, target, n_perm, generator(named_seed(seed, "perm")),
                           name=name or f"consistency-{which}[N={n},s={s},alpha={alpha}]")
    rep.meta.update({"seed": seed, "s": s, "alpha": alpha, "which": which})
    return rep


# ---------------------------------------------------------------------------
# exact generator-level identities
# ---------------------------------------------------------------------------


def generator_drift_coeffs(s, alpha, n, hat=False):
    """(c1, c0) of the first-order part c1 x + c0 of the one-particle
    generator x(1+x) d^2 + (c1 x + c0) d; ``hat`` selects the Siegmund dual."""
    if hat:
        return (2.0 * n + s, -alpha)
    return (2.0 - 2.0 * n - s, alpha + 1.0)


def apply_generator_1d(s, alpha, n, coeffs, x):
    """Apply the one-particle generator to a polynomial (ascending coeffs)."""
    p = np.polynomial.Polynomial(coeffs)
    c1, c0 = generator_drift_coeffs(s, alpha, n)
    x = np.asarray(x, dtype=float)
    d1 = p.deriv()(x)
    d2 = p.deriv(2)(x)
    out = x * (1.0 + x) * d2 + (c1 * x + c0) * d1
    return out if out.ndim else float(out)


class _PowerForm:
    """Function x^a (1+x)^b P(x); closed under the generators' calculus."""

    def __init__(self, a, b, poly):
        self.a = float(a)
        self.b = float(b)
        self.poly = poly if isinstance(poly, np.polynomial.Polynomial) else np.polynomial.Polynomial(poly)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return x**self.a * (1.0 + x) ** self.b * self.poly(x)

    def apply_generator(self, s, alpha, n, hat=False) -> "_PowerForm":
        xp = np.polynomial.Polynomial([0.0, 1.0])
        one_px = np.polynomial.Polynomial([1.0, 1.0])
        p = self.poly
        # f' = x^(a-1)(1+x)^(b-1) [a(1+x)P + b x P + x(1+x)P']
        p1 = self.a * one_px * p + self.b * xp * p + xp * one_px * p.deriv()
        a1, b1 = self.a - 1.0, self.b - 1.0
        p2 = a1 * one_px * p1 + b1 * xp * p1 + xp * one_px * p1.deriv()
        c1, c0 = generator_drift_coeffs(s, alpha, n, hat=hat)
        drift_poly = np.polynomial.Polynomial([c0, c1])
        # x(1+x) f'' and (c1 x + c0) f' both live at exponents (a-1, b-1)
        return _PowerForm(a1, b1, p2 + drift_poly * p1)


def h_transform_constants(s, alpha, n):
    """(c, d) with c = -2N - s and d = -alpha (2N + s + alpha - 1),
    stated at level N+1 (pass n = N)."""
    return (-2.0 * n - s, -alpha * (2.0 * n + s + alpha - 1.0))


def check_vandermonde_eigen(s, alpha, n, points, threshold: float = 1e-8,
                            name=None) -> TestReport:
    """The Vandermonde factor is an eigenfunction of the summed one-particle
    generators, with eigenvalue N(N-1)(-4N+2-3s)/6; exact-calculus check."""
    lam = n * (n - 1) * (-4.0 * n + 2.0 - 3.0 * s) / 6.0
    worst = 0.0
    for x in points:
        arr = as_coords(x, expected_dim=n)
        diff = arr[:, None] - arr[None, :]
        np.fill_diagonal(diff, np.inf)
        s1 = (1.0 / diff).sum(axis=1)
        q1 = (1.0 / diff**2).sum(axis=1)
        c1, c0 = generator_drift_coeffs(s, alpha, n)
        lhs = float(np.sum(arr * (1.0 + arr) * (s1**2 - q1) + (c1 * arr + c0) * s1))
        worst = max(worst, abs(lhs - lam) / max(1.0, abs(lam)))
    rep = TestReport.deterministic(name or f"vandermonde-eigenfunction[N={n},s={s}]",
                                   worst, threshold,
                                   {"s": s, "alpha": alpha, "n": n,
                                    "eigenvalue": lam, "n_points": len(points)})
    return rep


def check_h_transform_identities(s, alpha, n, points, threshold: float = 1e-8,
                                 name=None) -> TestReport:
    """Both conjugation identities behind the parameter shifts, checked by
    exact closed-form differentiation on polynomial test functions.

    (i)  dual(s,alpha) at level N+1 applied to m^-1 g equals
         c m^-1 g + m^-1 L(s,alpha+1) g, with m^-1 = x^(alpha+1)(1+x)^(-2N-s-alpha-1);
    (ii) L(s+2alpha-2, -alpha) at level N+1 applied to x^alpha g equals
         d x^alpha g + x^alpha L(s,alpha) g.
    """
    pts = np.asarray(points, dtype=float)
    if np.any(pts <= 0):
        raise ValueError("evaluation points must be positive")
    c_const, d_const = h_transform_constants(s, alpha, n)
    worst = 0.0
    for g_coeffs in ([1.0], [0.0, 1.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.0, 1.0]):
        g = np.polynomial.Polynomial(g_coeffs)
        # (i)
        m_inv_g = _PowerForm(alpha + 1.0, -(2.0 * n + s + alpha + 1.0), g)
        lhs = m_inv_g.apply_generator(s, alpha, n + 1, hat=True)(pts)
        lg = apply_generator_1d(s, alpha + 1.0, n, g_coeffs, pts)
        rhs = c_const * m_inv_g(pts) + _PowerForm(alpha + 1.0, -(2.0 * n + s + alpha + 1.0),
                                                  [1.0])(pts) * lg
        scale = np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
        worst = max(worst, float(np.max(np.abs(lhs - rhs) / scale)))
        # (ii)
        xag = _PowerForm(alpha, 0.0, g)
        lhs2 = xag.apply_generator(s + 2.0 * alpha - 2.0, -alpha, n + 1)(pts)
        lg2 = apply_generator_1d(s, alpha, n, g_coeffs, pts)
        rhs2 = d_const * xag(pts) + pts**alpha * lg2
        scale2 = np.maximum(1.0, np.maximum(np.abs(lhs2), np.abs(rhs2)))
        worst = max(worst, float(np.max(np.abs(lhs2 - rhs2) / scale2)))
    return TestReport.deterministic(name or f"h-transform-identities[N={n},s={s},alpha={alpha}]",
                                    worst, threshold,
                                    {"s": s, "alpha": alpha, "n": n, "n_points": pts.size})


def check_h_constants(seed, n_draws: int = 100, threshold: float = 1e-12,
                      name="h-transform-constants") -> TestReport:
    """d(s, alpha+1) - c(s + 2 alpha) = d(s, alpha) at random parameters."""
    rng = generator(named_seed(seed, name))
    worst = 0.0
    for _ in range(n_draws):
        s = rng.uniform(-3.0, 3.0)
        alpha = rng.uniform(-0.9, 3.0)
        n = int(rng.integers(1, 12))
        c_shift, _ = h_transform_constants(s + 2.0 * alpha, alpha, n)
        _, d_up = h_transform_constants(s, alpha + 1.0, n)
        _, d_base = h_transform_constants(s, alpha, n)
        worst = max(worst, abs(d_up - c_shift - d_base) / max(1.0, abs(d_base)))
    return TestReport.deterministic(name, worst, threshold, {"n_draws": n_draws, "seed": seed})


def check_pickrell_drift_forms(seed, n_draws: int = 100, threshold: float = 1e-10,
                               name="pickrell-drift-forms") -> TestReport:
    """The interaction form and the product form of the drift agree."""
    from .diffusion import pickrell_drift, pickrell_drift_interaction_form

    rng = generator(named_seed(seed, name))
    worst = 0.0
    for _ in range(n_draws):
        n = int(rng.integers(1, 5))
        params = PickrellParams(s=rng.uniform(-2, 3), alpha=rng.uniform(-0.9, 3), n=n)
        x = np.sort(rng.uniform(0.05, 5.0, size=n))
        x += np.arange(n) * 1e-3  # keep a safe gap
        d1 = pickrell_drift(params, x)
        d2 = pickrell_drift_interaction_form(params, x)
        worst = max(worst, float(np.max(np.abs(d1 - d2) / np.maximum(1.0, np.abs(d1)))))
    return TestReport.deterministic(name, worst, threshold, {"n_draws": n_draws, "seed": seed})


# ---------------------------------------------------------------------------
# kernel normalization / decomposition
# ---------------------------------------------------------------------------


def check_kernel_normalization(kind, alpha, x, tol: float = 1e-6, name=None) -> TestReport:
    """Total mass of a kernel density over its interlacing cell equals 1."""
    xa = as_coords(x)
    if kind == "L":
        n = xa.size - 1
        bounds = [(xa[k], xa[k + 1]) for k in range(n)]
        f = (lambda *ys: density_L(xa, ys))
    elif kind == "lambda_eq":
        n = xa.size
        params = KernelParams(alpha, n)
        lows = np.concatenate([[0.0], xa[:-1]])
        bounds = [(lows[k], xa[k]) for k in range(n)]
        f = (lambda *ys: density_lambda_eq(params, xa, ys))
    elif kind == "lambda_plus":
        n = xa.size - 1
        params = KernelParams(alpha, n)
        if n == 1:
            bounds = [(0.0, xa[1])]
        else:
            # y1 in [0, x_2]; y2 in [x_1, x_3] and above y1
            bounds = [(0.0, xa[1]), (lambda y1: max(y1, xa[0]), xa[2])]
        f = (lambda *ys: density_lambda_plus(params, xa, ys))
    else:
        raise ValueError(f"unknown kernel {kind!r}")
    if len(bounds) > 2:
        raise ValueError("normalization quadrature supports N <= 2")
    mass = quad_cell(f, bounds, tol=tol * 0.1)
    x_list = [float(v) for v in xa]
    return TestReport.deterministic(name or f"normalization-{kind}[alpha={alpha},x={x_list}]",
                                    abs(mass - 1.0), tol,
                                    {"alpha": alpha, "x": x_list, "mass": mass})


def check_decomposition(alpha, x=(1.0, 2.0), n_grid: int = 20, tol: float = 1e-6,
                        name=None) -> TestReport:
    """The (2 -> 1) alpha-link factors through the parameter-free link
    followed by the equal-dimension alpha-link; pointwise quadrature check."""
    xa = as_coords(x, expected_dim=2)
    params = KernelParams(alpha, 1)
    ys = np.linspace(xa[1] * 0.02, xa[1] * 0.98, n_grid)
    worst = 0.0
    for y in ys:
        direct = density_lambda_plus(params, xa, (y,))
        lo = max(xa[0], y)
        composed = 0.0
        if lo < xa[1]:
            composed = quad_1d(
                lambda z: density_L(xa, (z,)) * density_lambda_eq(params, (z,), (y,)),
                lo, xa[1], tol=tol * 1e-2)
        worst = max(worst, abs(direct - composed))
    return TestReport.deterministic(name or f"decomposition[alpha={alpha}]", worst, tol,
                                    {"alpha": alpha, "x": list(xa), "n_grid": n_grid})


# ---------------------------------------------------------------------------
# boundary flow
# ---------------------------------------------------------------------------


def flow_start_profile(omega: BoundaryPoint, n: int) -> np.ndarray:
    """A deterministic N-particle start whose boundary embedding realizes
    omega: the masses become spikes at N^2 alpha_i; the unassigned mass
    gamma_bar N^2 is spread over the remaining slots as a quadratic ramp
    (hard-edge-like shape; its embedded masses vanish as N grows).

    A linear ramp would put the top particles ~ 2 gamma_bar N^2 / N apart,
    close enough that the explicit Euler repulsion overshoots at dt = 1e-3;
    the quadratic shape keeps gaps safely above the overshoot threshold.
    """
    k = len(omega.alphas)
    if k > n:
        raise ValueError(f"need n >= {k} slots for the masses")
    spikes = [n * n * a for a in omega.alphas]
    m = n - k
    rem = n * n * gamma_bar(omega)
    if m == 0:
        if rem > 1e-9 * max(1.0, omega.gamma) * n * n:
            raise ValueError("no slots left for the unassigned mass")
        ramp = []
    else:
        scale = 6.0 * rem / (m * (m + 1.0) * (2.0 * m + 1.0))
        ramp = [scale * j * j for j in range(1, m + 1)]
    x = np.sort(np.asarray(spikes + ramp))
    for i in range(1, n):
        if x[i] <= x[i - 1]:
            x[i] = x[i - 1] + 1e-9 * (1.0 + x[i - 1])
    return x


def check_flow_convergence(alpha, n, omega_start: BoundaryPoint, t_grid, n_paths,
                           dt, seed, threshold: float = 0.15, method: str = "particles",
                           name=None) -> TestReport:
    """Scaled Laguerre ensembles track the deterministic boundary flow.

    statistic = max over the time grid of |mean scaled sum - gamma flow|
    plus the top-mass deviation; the reference flow starts from the realized
    embedding of the constructed particle start.

    ``method='matrix'`` evolves the collision-free matrix lift instead of
    the guarded particle scheme; its gamma fluctuations are free of the rare
    explicit-Euler ejection events the particle scheme shows at large N,
    which matters when comparing fluctuation variances across N.
    """
    x0 = flow_start_profile(omega_start, n)
    omega0 = embed_boundary(x0)
    t_grid = sorted(t_grid)
    if method == "particles":
        cfg = SdeConfig(dt=dt, t=t_grid[-1])
        _, snaps, info = simulate_laguerre_paths(alpha, n, x0, cfg, n_paths,
                                                 named_seed(seed, "paths"), snapshots_at=t_grid)
    elif method == "matrix":
        cfg = SdeConfig(dt=dt, t=t_grid[-1], scheme=Scheme.MATRIX_LIFT)
        _, snaps, info = simulate_laguerre_matrix_paths(alpha, n, x0, cfg, n_paths,
                                                        named_seed(seed, "paths"),
                                                        snapshots_at=t_grid)
        info = dict(info, guard_fraction=0.0)
    else:
        raise ValueError(f"unknown method {method!r}")
    worst = 0.0
    track = {}
    for ts in t_grid:
        rows = snaps[ts]
        flow = boundary_flow(omega0, ts)
        gamma_hat = float(rows.sum(axis=1).mean()) / n**2
        alpha1_hat = float(rows[:, -1].mean()) / n**2
        alpha1_flow = flow.alphas[0] if flow.alphas else 0.0
        dev = abs(gamma_hat - flow.gamma) + abs(alpha1_hat - alpha1_flow)
        worst = max(worst, dev)
        track[f"t={ts}"] = {"gamma_hat": gamma_hat, "gamma_flow": flow.gamma,
                            "alpha1_hat": alpha1_hat, "alpha1_flow": alpha1_flow,
                            "gamma_var": float(rows.sum(axis=1).var() / n**4)}
    rep = TestReport.deterministic(name or f"boundary-flow[N={n},gamma0={omega_start.gamma}]",
                                   worst, threshold,
                                   {"seed": seed, "alpha": alpha, "n": n, "dt": dt,
                                    "n_paths": n_paths, "guard_fraction": info["guard_fraction"],
                                    "track": track})
    return rep


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def _suite_identities(seed, sizes):
    reports = []
    rng = generator(named_seed(seed, "identity-points"))
    for s, a, n in [(1.0, 0.0, 2), (1.0, 0.5, 3), (-0.5, 2.0, 3), (2.0, 1.0, 1)]:
        pts = [np.sort(rng.uniform(0.1, 5.0, size=n)) + np.arange(n) * 1e-2 for _ in range(25)]
        reports.append(check_vandermonde_eigen(s, a, n, pts))
    for s, a, n in [(1.0, 0.5, 2), (-0.5, 1.5, 3), (2.0, 0.0, 1)]:
        pts = rng.uniform(0.1, 5.0, size=25)
        reports.append(check_h_transform_identities(s, a, n, pts))
    reports.append(check_h_constants(seed))
    reports.append(check_pickrell_drift_forms(seed))
    for a in (0.0, 0.5, 2.0):
        reports.append(check_kernel_normalization("L", a, (1.0, 2.0)))
        reports.append(check_kernel_normalization("L", a, (0.5, 1.5, 3.0)))
        reports.append(check_kernel_normalization("lambda_eq", a, (1.0, 2.0)))
        reports.append(check_kernel_normalization("lambda_plus", a, (1.0, 2.0)))
        reports.append(check_kernel_normalization("lambda_plus", a, (0.5, 1.5, 3.0)))
    for a in (0.0, 1.0):
        reports.append(check_decomposition(a))
    return reports


def _suite_intertwine(seed, sizes):
    n_samples = sizes.get("n_samples", 4000)
    dt = sizes.get("dt", 1e-3)
    n_perm = sizes.get("n_perm", 300)
    return [
        check_intertwine_laguerre(0.0, 1, (1.0, 2.0), 0.5, n_samples, dt,
                                  named_seed(seed, "lag-1"), n_perm),
        check_intertwine_laguerre(1.0, 2, (0.5, 1.5, 3.0), 0.5, n_samples, dt,
                                  named_seed(seed, "lag-2"), n_perm),
        check_intertwine_pickrell(1.0, 0.0, 1, (1.0, 2.0), 0.5, n_samples, dt,
                                  named_seed(seed, "pic-1"), n_perm),
        check_shifted_intertwine("L", 1.0, 0.0, 1, (1.0, 2.0), 0.5, n_samples, dt,
                                 named_seed(seed, "shift-L"), n_perm),
        check_shifted_intertwine("LambdaEq", 1.0, 0.5, 2, (1.0, 2.5), 0.5, n_samples, dt,
                                 named_seed(seed, "shift-eq"), n_perm),
    ]


def _suite_invariance(seed, sizes):
    n_samples = sizes.get("n_samples", 4000)
    dt = sizes.get("dt", 1e-3)
    n_perm = sizes.get("n_perm", 300)
    reports = []
    for n in (1, 2):
        for a in (0.0, 1.0):
            reports.append(check_invariance_pickrell(1.0, a, n, 0.5, n_samples, dt,
                                                     named_seed(seed, f"inv-{n}-{a}"), n_perm))
    return reports


def _suite_consistency(seed, sizes):
    n_samples = sizes.get("n_samples", 4000)
    n_perm = sizes.get("n_perm", 300)
    reports = []
    for which in ("alpha-link", "free-link", "eq-link"):
        for a in (0.0, 1.0):
            reports.append(check_consistency(which, 1.0, a, 1, n_samples,
                                             named_seed(seed, f"cons-{which}-{a}"), n_perm))
    return reports


def _suite_flow(seed, sizes):
    n_paths = sizes.get("n_paths", 300)
    dt = sizes.get("dt", 1e-3)
    return [
        check_flow_convergence(0.0, 50, BoundaryPoint((), 3.0), (0.25, 0.5, 1.0),
                               n_paths, dt, named_seed(seed, "flow-3")),
        check_flow_convergence(0.0, 50, BoundaryPoint((), 1.0), (0.25, 0.5, 1.0),
                               n_paths, dt, named_seed(seed, "flow-1")),
    ]


def _suite_branching_limit(seed, sizes):
    from .branching import JacobiParams, Partition, compare_scaling_limit, kernel_row

    kappa = sizes.get("kappa", 200)
    params = JacobiParams(0.0, 0.0)
    reports = []
    worst = 0.0
    for lam_parts in [(1,), (2,), (1, 1), (2, 1), (3, 2, 1), (2, 2, 2)]:
        lam = Partition(lam_parts)
        n = max(1, lam.length - 1) if lam.length > 1 else 1
        _, probs = kernel_row(lam, n, params)
        worst = max(worst, abs(probs.sum() - 1.0))
    reports.append(TestReport.deterministic("branching-row-sums", worst, 1e-10, {}))
    res_hi = compare_scaling_limit(Partition((2, 1)), kappa, params)
    res_lo = compare_scaling_limit(Partition((2, 1)), max(10, kappa // 10), params)
    reports.append(TestReport.deterministic("branching-scaling-limit",
                                            res_hi["sup_discrepancy"], 0.05,
                                            {"kappa": kappa,
                                             "coarse": res_lo["sup_discrepancy"],
                                             "row_mass": res_hi["row_mass"]}))
    reports.append(TestReport.deterministic("branching-scaling-monotone",
                                            res_hi["sup_discrepancy"],
                                            1.2 * res_lo["sup_discrepancy"],
                                            {"kappa_fine": kappa}))
    return reports


SUITES = {
    "identities": _suite_identities,
    "intertwine": _suite_intertwine,
    "invariance": _suite_invariance,
    "consistency": _suite_consistency,
    "flow": _suite_flow,
    "branching-limit": _suite_branching_limit,
}


def run_suite(suite: str, seed: int, threads: int = 1, **sizes) -> list:
    """Run one named suite (or 'all'); reports are seed-deterministic and
    independent of the worker count."""
    if suite == "all":
        names = list(SUITES)
    elif suite in SUITES:
        names = [suite]
    else:
        raise ValueError(f"unknown suite {suite!r}; choose from {sorted(SUITES)} or 'all'")
    if threads <= 1 or len(names) == 1:
        out = []
        for name in names:
            out.extend(SUITES[name](named_seed(seed, name), sizes))
        return out
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(SUITES[name], named_seed(seed, name), sizes) for name in names]
        out = []
        for fut in futures:
            out.extend(fut.result())
        return out
