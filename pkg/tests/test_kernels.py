import math

import numpy as np
import pytest
from scipy import stats

from intertwine.chamber import interlace_eq, interlace_plus
from intertwine.kernels import (KernelParams, density_L, density_lambda_eq,
                                density_lambda_plus, sample_L, sample_L_many,
                                sample_lambda_eq, sample_lambda_eq_many,
                                sample_lambda_plus, sample_lambda_plus_many)
from intertwine.rng import generator
from intertwine.verify import quad_1d
from helpers import lambda_plus_cdf_12


def test_density_L_examples():
    assert density_L((1, 3), (2,)) == pytest.approx(0.5)
    assert density_L((1, 3), (4,)) == 0.0
    assert density_L((0, 1, 2), (0.5, 1.5)) == pytest.approx(1.0)


def test_density_L_requires_strict_x():
    with pytest.raises(ValueError):
        density_L((1, 1), (1,))


def test_density_lambda_eq_examples():
    assert density_lambda_eq(KernelParams(0, 1), (2,), (1,)) == pytest.approx(0.5)
    assert density_lambda_eq(KernelParams(1, 1), (2,), (1,)) == pytest.approx(0.5)
    assert density_lambda_eq(KernelParams(0, 2), (1, 2), (0.5, 3)) == 0.0
    with pytest.raises(ValueError):
        density_lambda_eq(KernelParams(0, 2), (0.0, 1.0), (0.0, 0.5))


def test_density_lambda_plus_examples():
    p = KernelParams(0, 1)
    assert density_lambda_plus(p, (1, 2), (1.5,)) == pytest.approx(math.log(4 / 3))
    assert density_lambda_plus(p, (1, 2), (3,)) == 0.0
    with pytest.raises(ValueError):
        density_lambda_plus(p, (0.0, 2.0), (1.0,))


def test_density_lambda_plus_normalizes_analytically():
    # for x = (1, 2), alpha = 0 the mass is x1 log(x2/x1) + x2 - x1 - ... = 1
    p = KernelParams(0, 1)
    mass = quad_1d(lambda y: density_lambda_plus(p, (1.0, 2.0), (y,)), 0.0, 2.0,
                   tol=1e-10, points=[1.0])
    assert mass == pytest.approx(1.0, abs=1e-8)


def test_sample_L_uniform_case():
    rng = generator(101)
    y = sample_L_many((0.0, 1.0), 10_000, rng).ravel()
    assert stats.kstest(y, "uniform").pvalue > 0.01


def test_sample_L_symmetric_mean():
    rng = generator(102)
    y = sample_L_many((1.0, 3.0), 20_000, rng).ravel()
    se = y.std() / math.sqrt(y.size)
    assert abs(y.mean() - 2.0) < 3 * se


def test_sample_L_histogram_matches_density():
    # alpha-free link at x = (0, 1, 2): density is linear, so the midpoint
    # value equals the cell average exactly
    rng = generator(103)
    x = (0.0, 1.0, 2.0)
    n = 100_000
    ys = sample_L_many(x, n, rng)
    edges1 = np.linspace(0, 1, 21)
    edges2 = np.linspace(1, 2, 21)
    counts, _, _ = np.histogram2d(ys[:, 0], ys[:, 1], bins=[edges1, edges2])
    area = (edges1[1] - edges1[0]) * (edges2[1] - edges2[0])
    mid1 = (edges1[:-1] + edges1[1:]) / 2
    mid2 = (edges2[:-1] + edges2[1:]) / 2
    z_worst, n_bad = 0.0, 0
    for i, a in enumerate(mid1):
        for j, b in enumerate(mid2):
            p_bin = density_L(x, (a, b)) * area
            sigma = math.sqrt(p_bin * (1 - p_bin) * n)
            z = abs(counts[i, j] - n * p_bin) / sigma
            z_worst = max(z_worst, z)
            n_bad += z > 3.0
    assert n_bad <= 0.015 * 400  # 3-sigma outliers at roughly the nominal rate
    assert z_worst < 5.0


def test_sample_lambda_eq_examples():
    rng = generator(104)
    p0 = KernelParams(0, 1)
    y = sample_lambda_eq_many(p0, (2.0,), 10_000, rng).ravel()
    assert stats.kstest(y, "uniform", args=(0, 2)).pvalue > 0.01
    p1 = KernelParams(1, 1)
    y1 = sample_lambda_eq_many(p1, (1.0,), 20_000, rng).ravel()
    # density 2y on [0, 1]: mean 2/3, CDF u^2
    se = y1.std() / math.sqrt(y1.size)
    assert abs(y1.mean() - 2 / 3) < 3 * se
    assert stats.kstest(y1, lambda u: np.clip(u, 0, 1) ** 2).pvalue > 0.01


def test_sample_lambda_eq_histogram_matches_density():
    rng = generator(105)
    p = KernelParams(0, 2)
    x = (1.0, 2.0)
    n = 100_000
    ys = sample_lambda_eq_many(p, x, n, rng)
    edges1 = np.linspace(0, 1, 11)
    edges2 = np.linspace(1, 2, 11)
    counts, _, _ = np.histogram2d(ys[:, 0], ys[:, 1], bins=[edges1, edges2])
    area = 0.1 * 0.1
    n_bad = 0
    for i, a in enumerate((edges1[:-1] + edges1[1:]) / 2):
        for j, b in enumerate((edges2[:-1] + edges2[1:]) / 2):
            p_bin = density_lambda_eq(p, x, (a, b)) * area
            sigma = math.sqrt(p_bin * (1 - p_bin) * n)
            n_bad += abs(counts[i, j] - n * p_bin) > 3.5 * sigma
    assert n_bad <= 2


def test_sample_lambda_plus_matches_closed_form():
    rng = generator(106)
    p = KernelParams(0, 1)
    y = sample_lambda_plus_many(p, (1.0, 2.0), 20_000, rng).ravel()
    assert y.min() >= 0.0 and y.max() <= 2.0
    assert stats.kstest(y, lambda_plus_cdf_12).pvalue > 0.01


def test_samplers_respect_interlacing_support():
    rng = generator(107)
    x3 = (0.5, 1.5, 3.0)
    for row in sample_L_many(x3, 200, rng):
        assert interlace_plus(x3, np.sort(row))
    x2 = (1.0, 2.5)
    for row in sample_lambda_eq_many(KernelParams(0.7, 2), x2, 200, rng):
        assert interlace_eq(x2, np.sort(row))
    p = KernelParams(1.3, 2)
    for row in sample_lambda_plus_many(p, x3, 200, rng):
        assert density_lambda_plus(p, x3, np.sort(row)) > 0.0


def test_support_scales_homogeneously():
    rng = generator(108)
    x = np.array([0.5, 1.5, 3.0])
    c = 2.5
    rows = sample_L_many(c * x, 300, rng)
    for row in rows:
        assert interlace_plus(x, np.sort(row) / c)


def test_single_draw_wrappers():
    rng = generator(109)
    y = sample_L((1.0, 3.0), rng)
    assert y.dim == 1 and 1.0 <= y.coords[0] <= 3.0
    z = sample_lambda_eq(KernelParams(0.5, 2), (1.0, 2.0), rng)
    assert interlace_eq((1.0, 2.0), z)
    w = sample_lambda_plus(KernelParams(0.5, 1), (1.0, 2.0), rng)
    assert 0.0 <= w.coords[0] <= 2.0


def test_kernel_params_validation():
    with pytest.raises(ValueError):
        KernelParams(-1.0, 1)
    with pytest.raises(ValueError):
        KernelParams(0.0, 0)
