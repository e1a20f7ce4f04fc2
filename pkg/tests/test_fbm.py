"""Tests for fractional Brownian path generation."""

import io
import math

import numpy as np
import pytest

from ggbm import DomainError, GridSpec, SeedSpec, generate_fbm, rescale_path
from ggbm.fbm import fbm_covariance, sample_fbm_batch
from ggbm.randvar import make_stream


def test_grid_spec():
    grid = GridSpec(t_max=2.0, n_steps=8)
    assert grid.dt == pytest.approx(0.25)
    times = grid.times()
    assert times[0] == 0.0
    assert times[-1] == pytest.approx(2.0)
    assert len(times) == 9


def test_grid_spec_validation():
    with pytest.raises(DomainError):
        GridSpec(t_max=0.0, n_steps=8)
    with pytest.raises(DomainError):
        GridSpec(t_max=1.0, n_steps=0)


def test_fbm_covariance_matrix():
    times = np.array([0.5, 1.0, 2.0])
    cov = fbm_covariance(times, 0.75)
    a = 1.5
    for i, s in enumerate(times):
        for j, t in enumerate(times):
            expected = 0.5 * (s ** a + t ** a - abs(t - s) ** a)
            assert cov[i, j] == pytest.approx(expected, rel=1e-14)


def test_generate_fbm_shape_and_start():
    path = generate_fbm(0.6, GridSpec(1.0, 64), 2, SeedSpec(3, 0))
    assert path.values.shape == (65, 2)
    assert np.all(path.values[0] == 0.0)
    assert path.hurst == 0.6


def test_generate_fbm_deterministic():
    a = generate_fbm(0.7, GridSpec(1.0, 128), 1, SeedSpec(5, 0))
    b = generate_fbm(0.7, GridSpec(1.0, 128), 1, SeedSpec(5, 0))
    c = generate_fbm(0.7, GridSpec(1.0, 128), 1, SeedSpec(6, 0))
    assert np.array_equal(a.values, b.values)
    assert not np.array_equal(a.values, c.values)


@pytest.mark.parametrize("hurst", [0.25, 0.5, 0.75])
def test_fbm_batch_covariance(hurst):
    rng = make_stream(SeedSpec(17, 0))
    times = np.array([0.5, 1.0])
    n = 200_000
    v = sample_fbm_batch(hurst, times, 1, n, rng)[:, :, 0]
    a = 2.0 * hurst
    # marginal variances
    for j, t in enumerate(times):
        emp = v[:, j] ** 2
        se = emp.std(ddof=1) / math.sqrt(n)
        assert abs(emp.mean() - t ** a) <= 4.0 * se
    # cross covariance
    prod = v[:, 0] * v[:, 1]
    se = prod.std(ddof=1) / math.sqrt(n)
    expected = 0.5 * (0.5 ** a + 1.0 - 0.5 ** a)
    assert abs(prod.mean() - expected) <= 4.0 * se


def test_fbm_hurst_one_is_a_random_line():
    rng = make_stream(SeedSpec(23, 0))
    times = np.array([0.5, 1.0, 2.0])
    v = sample_fbm_batch(1.0, times, 1, 1000, rng)[:, :, 0]
    # every path is exactly t * xi
    ratio = v / times[None, :]
    assert np.allclose(ratio, ratio[:, :1])


def test_marginal_variance_on_path_ensemble():
    grid = GridSpec(1.0, 32)
    n = 4000
    vals = np.array([
        generate_fbm(0.4, grid, 1, SeedSpec(100, i)).values[-1, 0]
        for i in range(n)])
    se = (vals ** 2).std(ddof=1) / math.sqrt(n)
    assert abs((vals ** 2).mean() - 1.0) <= 4.0 * se


def test_rescale_path_self_similarity():
    path = generate_fbm(0.75, GridSpec(1.0, 16), 1, SeedSpec(8, 0))
    scaled = rescale_path(path, 4.0)
    assert scaled.times[-1] == pytest.approx(4.0)
    assert np.allclose(scaled.values, 4.0 ** 0.75 * path.values)


def test_path_to_csv_roundtrip():
    path = generate_fbm(0.5, GridSpec(1.0, 4), 2, SeedSpec(1, 0))
    buf = io.StringIO()
    path.to_csv(buf)
    lines = buf.getvalue().strip().splitlines()
    assert lines[0] == "t,x1,x2"
    assert len(lines) == 6
    back = np.loadtxt(io.StringIO("\n".join(lines[1:])), delimiter=",")
    assert np.allclose(back[:, 0], path.times)
    assert np.allclose(back[:, 1:], path.values)


def test_hurst_validation():
    with pytest.raises(DomainError):
        generate_fbm(0.0, GridSpec(1.0, 8), 1, SeedSpec(0, 0))
    with pytest.raises(DomainError):
        generate_fbm(1.1, GridSpec(1.0, 8), 1, SeedSpec(0, 0))
