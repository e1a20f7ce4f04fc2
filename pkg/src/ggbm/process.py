"""The non-Gaussian process itself: path construction by both
representations, finite-dimensional densities, characteristic functions.

Conventions: the n-point characteristic function is
E_beta(-(1/2) sum_j theta_.j^T R theta_.j) with R the fBm covariance
matrix (t_k^a + t_j^a - |t_k - t_j|^a)/2 per component.  This makes the
one-point case agree with the increment characteristic function
E_beta(-|k|^2 t^a / 2) and with the moment/covariance identities; the
same R appears inside the joint density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .exceptions import DomainError, SingularMatrixError
from .fbm import GridSpec, Path, _fbm_values, rescale_path
from .model import ModelParams
from .randvar import SeedSpec, make_stream, sample_y_beta_array
from .specfun import m_wright_moment, m_wright_quad_rule, mittag_leffler

__all__ = [
    "ModelParams",
    "GammaAlphaMatrix",
    "gamma_alpha_matrix",
    "ggbm_path_product",
    "ggbm_path_subordinated",
    "marginal_density",
    "fdd_density",
    "fdd_charfun",
]

_MAX_FDD_POINTS = 8


@dataclass(frozen=True)
class GammaAlphaMatrix:
    """Times 0 <= t_1 < ... < t_n with entries t_k^a + t_j^a - |t_k - t_j|^a."""

    times: np.ndarray
    entries: np.ndarray


def _check_times(times) -> np.ndarray:
    t = np.atleast_1d(np.asarray(times, dtype=float))
    if t.ndim != 1 or len(t) < 1:
        raise DomainError("times must be a nonempty 1-D array")
    if len(t) > _MAX_FDD_POINTS:
        raise DomainError(f"at most {_MAX_FDD_POINTS} time points supported")
    if t[0] <= 0.0 or np.any(np.diff(t) <= 0.0):
        raise DomainError("times must be strictly increasing and positive")
    return t


def gamma_alpha_matrix(times, alpha: float) -> GammaAlphaMatrix:
    t = _check_times(times)
    ta = t ** alpha
    entries = ta[:, None] + ta[None, :] - np.abs(t[:, None] - t[None, :]) ** alpha
    return GammaAlphaMatrix(times=t, entries=entries)


# ---------------------------------------------------------------------------
# Path construction
# ---------------------------------------------------------------------------

def ggbm_path_product(params: ModelParams, grid: GridSpec, seed: SeedSpec) -> Path:
    """Product representation: sqrt(Y_beta) times an independent fBm path."""
    rng = make_stream(seed)
    y = sample_y_beta_array(params.beta, rng, 1)[0]
    values = _fbm_values(params.hurst, grid, params.dim, rng)
    return Path(times=grid.times(), values=math.sqrt(y) * values,
                hurst=params.hurst, seed=seed)


def ggbm_path_subordinated(params: ModelParams, grid: GridSpec,
                           seed: SeedSpec) -> Path:
    """Subordination representation: fBm observed at times t * Y^(1/alpha).

    Implemented through the self-similarity rescaling of an fBm path; the
    values on the rescaled clock are recorded against the original grid.
    """
    rng = make_stream(seed)
    y = sample_y_beta_array(params.beta, rng, 1)[0]
    values = _fbm_values(params.hurst, grid, params.dim, rng)
    base = Path(times=grid.times(), values=values, hurst=params.hurst, seed=seed)
    scaled = rescale_path(base, y ** (1.0 / params.alpha))
    return Path(times=grid.times(), values=scaled.values,
                hurst=params.hurst, seed=seed)


# ---------------------------------------------------------------------------
# Densities and characteristic functions
# ---------------------------------------------------------------------------

def _scale_mixture_integral(beta: float, power: float, q: float) -> float:
    """int_0^inf tau^(-power) exp(-q/(2 tau)) M_beta(tau) dtau by the cached
    fixed rule.  q > 0; diverges as q -> 0 when power >= 1.
    """
    nodes, weights, mvals = m_wright_quad_rule(beta)
    with np.errstate(over="ignore"):
        integrand = nodes ** (-power) * np.exp(-0.5 * q / nodes) * mvals
    return float(np.dot(weights, integrand))


def marginal_density(params: ModelParams, y, t: float) -> float:
    """Density of the process at time t > 0, evaluated at y in R^d.

    At the origin the value is finite only for d = 1 (beta < 1); for
    d >= 2 the scale mixture diverges there and +inf is returned.
    """
    if t <= 0.0:
        raise DomainError(f"requires t > 0, got t = {t:g}")
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if len(y) != params.dim:
        raise DomainError(f"point has dim {len(y)}, params has dim {params.dim}")
    d = params.dim
    ta = t ** params.alpha
    r2 = float(np.dot(y, y))
    pref = (2.0 * math.pi * ta) ** (-0.5 * d)
    if params.beta == 1.0:
        return pref * math.exp(-0.5 * r2 / ta)
    if r2 == 0.0:
        if d == 1:
            return pref * m_wright_moment(params.beta, -0.5)
        return math.inf
    return pref * _scale_mixture_integral(params.beta, 0.5 * d, r2 / ta)


def fdd_density(params: ModelParams, times, theta) -> float:
    """Joint density of the process at the given times, evaluated at theta
    (an n x d array of positions).
    """
    t = _check_times(times)
    n = len(t)
    th = np.asarray(theta, dtype=float).reshape(n, params.dim)
    R = 0.5 * gamma_alpha_matrix(t, params.alpha).entries
    sign, logdet = np.linalg.slogdet(R)
    if sign <= 0 or not np.isfinite(logdet):
        raise SingularMatrixError("covariance matrix gamma_alpha is singular")
    try:
        cf = cho_factor(R, lower=True)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(str(exc)) from exc
    q = float(np.sum(th * cho_solve(cf, th)))
    d, nd = params.dim, n * params.dim
    pref = (2.0 * math.pi) ** (-0.5 * nd) * math.exp(-0.5 * d * logdet)
    if params.beta == 1.0:
        return pref * math.exp(-0.5 * q)
    if q == 0.0 and nd >= 2:
        return math.inf
    return pref * _scale_mixture_integral(params.beta, 0.5 * nd, q)


def fdd_charfun(params: ModelParams, times, theta) -> float:
    """n-point characteristic function; real-valued since the quadratic-form
    argument is nonpositive.
    """
    t = _check_times(times)
    th = np.asarray(theta, dtype=float).reshape(len(t), params.dim)
    R = 0.5 * gamma_alpha_matrix(t, params.alpha).entries
    qsum = float(np.sum(th * (R @ th)))
    return mittag_leffler(params.beta, -0.5 * qsum).value
