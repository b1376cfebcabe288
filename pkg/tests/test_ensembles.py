import math

import numpy as np
import pytest
from scipy import stats

from intertwine.diffusion import SdeConfig, simulate_laguerre_paths
from intertwine.ensembles import (EnsembleParams, jacobi_ensemble_density_unnorm,
                                  jacobi_map, jacobi_map_inverse,
                                  laguerre_density_unnorm, pickrell_density_unnorm,
                                  sample_laguerre, sample_laguerre_many,
                                  sample_laguerre_mcmc, sample_pickrell)
from intertwine.rng import generator
from intertwine.verify import energy_perm_test, quad_cell


def test_pickrell_density_examples():
    p = EnsembleParams(1.0, 0.0, 1)
    # N = 1, alpha = 0: density prop. to (1+x)^(-2-s)
    assert pickrell_density_unnorm(p, (1.0,)) == pytest.approx(2.0 ** (-3.0))
    p2 = EnsembleParams(1.0, 0.5, 2)
    assert pickrell_density_unnorm(p2, (1.0, 1.0)) == 0.0
    assert pickrell_density_unnorm(p2, (1.0, 2.0)) > 0.0


def test_pickrell_exact_sampler_matches_cdf():
    rng = generator(401)
    p = EnsembleParams(1.0, 0.0, 1)
    x = sample_pickrell(p, 10_000, rng)
    assert stats.kstest(x.ravel(), lambda v: 1 - (1 + v) ** -2.0).pvalue > 0.01
    assert abs(np.median(x) - (math.sqrt(2) - 1)) < 0.02
    assert np.all(x > 0)


def test_pickrell_sampler_rejects_infinite_mass():
    with pytest.raises(ValueError):
        sample_pickrell(EnsembleParams(-1.0, 0.0, 1), 10, generator(0))


def test_pickrell_mcmc_chamber_and_acceptance():
    rng = generator(402)
    x, info = sample_pickrell(EnsembleParams(1.0, 1.0, 2), 4000, rng, return_info=True)
    assert np.all(x[:, 0] > 0) and np.all(np.diff(x, axis=1) > 0)
    assert 0.1 <= info["acceptance_rate"] <= 0.6
    x1, info1 = sample_pickrell(EnsembleParams(1.0, 1.0, 1), 4000, rng, return_info=True)
    assert 0.1 <= info1["acceptance_rate"] <= 0.6


def test_pickrell_mcmc_n1_alpha1_matches_cdf():
    # density prop. to x (1+x)^-4: CDF 1 - 3(1+x)^-2 + 2(1+x)^-3
    rng = generator(403)
    x = sample_pickrell(EnsembleParams(1.0, 1.0, 1), 8000, rng)
    cdf = lambda v: 1 - 3 * (1 + v) ** -2.0 + 2 * (1 + v) ** -3.0
    assert stats.kstest(x.ravel(), cdf).pvalue > 0.01


def test_pickrell_mcmc_sum_marginal_vs_quadrature():
    params = EnsembleParams(1.0, 0.0, 2)
    rng = generator(404)
    n = 20_000
    x = sample_pickrell(params, n, rng)
    sums = x.sum(axis=1)

    def density(x1, x2):
        return pickrell_density_unnorm(params, (x1, x2))

    total = quad_cell(density, [(0.0, 25.0), (lambda x1: x1, 60.0)], tol=1e-9)
    edges = [0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.5, 7.0]
    n_bad = 0
    for a, b in zip(edges[:-1], edges[1:]):
        prob = quad_cell(density, [(0.0, b / 2),
                                   (lambda x1: max(x1, a - x1), lambda x1: b - x1)],
                         tol=1e-9) / total
        emp = np.mean((sums >= a) & (sums < b))
        sigma = math.sqrt(prob * (1 - prob) / n)
        n_bad += abs(emp - prob) > 3 * sigma
    assert n_bad <= 1  # one marginal 3-sigma excursion allowed over 7 bins


def test_laguerre_density_flux_balance():
    # stationarity of the one-particle law x^alpha e^-x for dX = sqrt(2X)dB
    # + (alpha+1-X)dt: the probability flux x rho' + (x - alpha) rho vanishes
    for alpha in (0.0, 0.7, 2.0):
        for x in np.linspace(0.2, 8.0, 25):
            rho = x**alpha * math.exp(-x)
            drho = (alpha / x - 1.0) * rho
            flux = x * drho + (x - alpha) * rho
            assert abs(flux) < 1e-12 * max(1.0, rho)
    assert laguerre_density_unnorm(0.5, 2, (1.0, 1.0)) == 0.0


def test_laguerre_density_long_run_and_mcmc_agree():
    term, _, _ = simulate_laguerre_paths(0.0, 2, (0.5, 1.5), SdeConfig(2e-3, 12.0), 3000, 405)
    ref = sample_laguerre_mcmc(0.0, 2, 3000, generator(406))
    rep = energy_perm_test(term, ref, 300, generator(407))
    assert rep.passed, rep.to_dict()


def test_ginibre_radial_matches_laguerre_density_mcmc():
    rad = sample_laguerre_many(1, 2, 4000, generator(408))
    ref = sample_laguerre_mcmc(1.0, 2, 4000, generator(409))
    rep = energy_perm_test(rad, ref, 300, generator(410))
    assert rep.passed, rep.to_dict()


def test_sample_laguerre_examples():
    rng = generator(411)
    x0 = sample_laguerre_many(0, 1, 10_000, rng)
    assert stats.kstest(x0.ravel(), "expon").pvalue > 0.01
    x2 = sample_laguerre_many(2, 1, 10_000, rng)
    assert stats.kstest(x2.ravel(), "gamma", args=(3,)).pvalue > 0.01
    pt = sample_laguerre(1, 3, rng)
    assert pt.coords[0] >= 0 and list(pt.coords) == sorted(pt.coords)
    with pytest.raises(ValueError):
        sample_laguerre_many(0.5, 1, 10, rng)


def test_jacobi_map_examples():
    assert jacobi_map((1.0,)) == pytest.approx([0.5])
    assert jacobi_map((0.0,)) == pytest.approx([0.0])
    x = np.array([0.3, 1.7, 9.0])
    assert jacobi_map_inverse(jacobi_map(x)) == pytest.approx(x, rel=1e-12)
    with pytest.raises(ValueError):
        jacobi_map_inverse((1.0,))


def test_jacobi_ensemble_density_examples():
    assert jacobi_ensemble_density_unnorm(0.0, 0.0, 1, (0.3,)) == 1.0
    assert jacobi_ensemble_density_unnorm(1.0, 2.0, 2, (0.4, 0.4)) == 0.0
    assert jacobi_ensemble_density_unnorm(0.0, 0.0, 1, (1.2,)) == 0.0


def test_change_of_variables_density_identity():
    # u = x/(1+x) carries the heavy-tailed ensemble onto the [0,1] ensemble
    # with second exponent beta = s; the transformed density ratio (with
    # Jacobian prod (1-u)^-2) must be constant in x
    rng = generator(413)
    params = EnsembleParams(1.5, 0.7, 2)
    ratios = []
    for _ in range(10):
        x = np.sort(rng.uniform(0.1, 4.0, size=2))
        x[1] += 0.05
        u = jacobi_map(x)
        dens_u = pickrell_density_unnorm(params, x) * np.prod((1 - u) ** -2.0)
        ratios.append(dens_u / jacobi_ensemble_density_unnorm(params.alpha, params.s, 2, u))
    assert np.ptp(ratios) < 1e-9 * max(ratios)


def test_pickrell_pushforward_is_jacobi_beta_s():
    # s = 1, alpha = 0, N = 1: u = x/(1+x) has density 2(1-u) on [0, 1]
    rng = generator(412)
    x = sample_pickrell(EnsembleParams(1.0, 0.0, 1), 10_000, rng)
    u = jacobi_map(x.ravel())
    cdf = lambda v: np.clip(2 * v - v**2, 0, 1)
    assert stats.kstest(u, cdf).pvalue > 0.01
