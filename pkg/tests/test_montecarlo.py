"""Tests for the perpetual-integral Monte Carlo estimator."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from ggbm import DomainError, GreenDensity, ModelParams, PerpetualSpec, \
    SeedSpec, estimate_potential_mc, gaussian_test_function, potential, \
    perpetual_integral_one_path, tail_bound
from ggbm.montecarlo import build_time_grid, pairwise_sum
from ggbm.randvar import make_stream


def test_pairwise_sum_matches_fsum():
    rng = np.random.default_rng(1)
    vals = list(rng.standard_normal(1000) * rng.uniform(1e-8, 1e8, 1000))
    assert pairwise_sum(vals) == pytest.approx(math.fsum(vals), rel=1e-12)
    assert pairwise_sum([]) == 0.0
    assert pairwise_sum([3.5]) == 3.5


def test_pairwise_sum_order_of_combination_is_fixed():
    vals = [0.1 * i for i in range(17)]
    assert pairwise_sum(vals) == pairwise_sum(list(vals))


def test_build_time_grid_structure():
    spec = PerpetualSpec(t_max=50.0, n_paths=10, seed=SeedSpec(0, 0))
    grid = build_time_grid(spec)
    assert grid[0] == 0.0
    assert grid[-1] == pytest.approx(50.0)
    assert np.all(np.diff(grid) > 0.0)
    assert (len(grid) - 1) % 2 == 0
    # nested coarsening shares endpoints
    coarse = grid[::2]
    assert coarse[0] == 0.0
    assert coarse[-1] == grid[-1]


def test_build_time_grid_small_horizon():
    spec = PerpetualSpec(t_max=0.5, n_paths=10, seed=SeedSpec(0, 0))
    grid = build_time_grid(spec)
    assert grid[0] == 0.0
    assert grid[-1] == pytest.approx(0.5)
    assert (len(grid) - 1) % 2 == 0


def test_perpetual_spec_validation():
    with pytest.raises(DomainError):
        PerpetualSpec(t_max=1e-4, n_paths=10, seed=SeedSpec(0, 0))
    with pytest.raises(DomainError):
        PerpetualSpec(t_max=10.0, n_paths=0, seed=SeedSpec(0, 0))


def test_one_path_integral_positive_and_deterministic():
    params = ModelParams(0.5, 1.5, 3)
    f = gaussian_test_function(1.0, 3)
    spec = PerpetualSpec(t_max=10.0, n_paths=1, seed=SeedSpec(0, 0))
    a = perpetual_integral_one_path(params, f, np.zeros(3), spec,
                                    make_stream(SeedSpec(5, 0)))
    b = perpetual_integral_one_path(params, f, np.zeros(3), spec,
                                    make_stream(SeedSpec(5, 0)))
    assert a > 0.0
    assert a == b


def test_tail_bound_brownian_closed_form():
    # beta = 1, d = 3: int_T^inf ||f||_1 (2 pi t)^{-3/2} dt in closed form
    params = ModelParams(1.0, 1.0, 3)
    f = gaussian_test_function(1.0, 3)
    T = 50.0
    expected = f.l1_norm * (2.0 * math.pi) ** -1.5 * 2.0 * T ** -0.5
    assert tail_bound(params, f, T) == pytest.approx(expected, rel=1e-12)


def test_tail_bound_dominates_true_tail():
    # the bound must exceed the exact tail integral of the mean
    params = ModelParams(0.5, 1.5, 3)
    f = gaussian_test_function(1.0, 3)
    T = 50.0
    bound = tail_bound(params, f, T)
    # exact mean at x = center: E[f(B(t))] with variance Y t^alpha per
    # component, averaged over Y by quadrature
    from ggbm.specfun import m_wright_quad_rule
    nodes, weights, mvals = m_wright_quad_rule(0.5)

    def mean_at_center(t):
        v = nodes * t ** 1.5
        return float(np.dot(weights, (1.0 + v) ** -1.5 * mvals))

    exact, _ = quad(mean_at_center, T, np.inf, epsabs=1e-12, epsrel=1e-9)
    assert bound >= exact
    assert bound <= 2.0 * exact  # and is not wildly loose here


def test_tail_bound_decreases_in_horizon():
    params = ModelParams(0.8, 1.2, 2)
    f = gaussian_test_function(1.0, 2)
    b1 = tail_bound(params, f, 20.0)
    b2 = tail_bound(params, f, 50.0)
    b3 = tail_bound(params, f, 100.0)
    assert b1 > b2 > b3 > 0.0


def test_tail_bound_requires_transience():
    with pytest.raises(DomainError):
        tail_bound(ModelParams(0.5, 1.5, 1), gaussian_test_function(1.0, 1),
                   10.0)


def test_estimate_deterministic_across_threads():
    params = ModelParams(0.5, 1.5, 3)
    f = gaussian_test_function(1.0, 3)
    spec = PerpetualSpec(t_max=10.0, n_paths=4096, seed=SeedSpec(42, 0))
    e1 = estimate_potential_mc(params, f, np.zeros(3), spec, threads=1)
    e8 = estimate_potential_mc(params, f, np.zeros(3), spec, threads=8)
    assert e1.mean == e8.mean
    assert e1.std_error == e8.std_error
    assert e1.discretization_bound == e8.discretization_bound


def test_estimate_seed_sensitivity():
    params = ModelParams(0.5, 1.5, 3)
    f = gaussian_test_function(1.0, 3)
    s1 = PerpetualSpec(t_max=10.0, n_paths=1024, seed=SeedSpec(1, 0))
    s2 = PerpetualSpec(t_max=10.0, n_paths=1024, seed=SeedSpec(2, 0))
    e1 = estimate_potential_mc(params, f, np.zeros(3), s1)
    e2 = estimate_potential_mc(params, f, np.zeros(3), s2)
    assert e1.mean != e2.mean


def test_std_error_scaling():
    params = ModelParams(0.5, 1.5, 3)
    f = gaussian_test_function(1.0, 3)
    small = PerpetualSpec(t_max=10.0, n_paths=4096, seed=SeedSpec(3, 0))
    large = PerpetualSpec(t_max=10.0, n_paths=16384, seed=SeedSpec(3, 0))
    e_small = estimate_potential_mc(params, f, np.zeros(3), small)
    e_large = estimate_potential_mc(params, f, np.zeros(3), large)
    ratio = e_small.std_error / e_large.std_error
    assert ratio == pytest.approx(2.0, rel=0.15)


def test_estimate_consistent_with_analytic_potential():
    params = ModelParams(1.0, 1.0, 3)  # Brownian case as independent anchor
    f = gaussian_test_function(1.0, 3)
    spec = PerpetualSpec(t_max=50.0, n_paths=20_000, seed=SeedSpec(11, 0))
    est = estimate_potential_mc(params, f, np.zeros(3), spec)
    gd = GreenDensity.from_params(params)
    v = potential(gd, f, np.zeros(3))
    budget = 3.0 * est.std_error + est.tail_bound + est.discretization_bound
    assert abs(est.mean - v) <= budget


def test_estimate_requires_transient_params():
    with pytest.raises(DomainError):
        estimate_potential_mc(
            ModelParams(0.5, 1.5, 1), gaussian_test_function(1.0, 1),
            np.zeros(1), PerpetualSpec(t_max=10.0, n_paths=16,
                                       seed=SeedSpec(0, 0)))


def test_estimate_to_dict_roundtrip():
    import json
    params = ModelParams(0.5, 1.5, 3)
    f = gaussian_test_function(1.0, 3)
    spec = PerpetualSpec(t_max=10.0, n_paths=256, seed=SeedSpec(7, 0))
    est = estimate_potential_mc(params, f, np.zeros(3), spec)
    payload = est.to_dict(params=params, f=f, x=np.zeros(3))
    text = json.dumps(payload)
    back = json.loads(text)
    assert back["n_paths"] == 256
    assert back["params"]["beta"] == 0.5
    assert back["seed"]["master_seed"] == 7
