"""Fractional Brownian motion path generation on uniform grids.

Primary method is circulant embedding of the increment process (exact in
law, O(n log n)); dense Cholesky factorization of the path covariance is
the fallback and also serves batched generation on arbitrary grids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError, EmbeddingError
from .randvar import SeedSpec, make_stream

__all__ = [
    "GridSpec",
    "Path",
    "generate_fbm",
    "rescale_path",
    "fbm_covariance",
    "fbm_cholesky_factor",
    "sample_fbm_batch",
]


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid t_k = k * t_max / n_steps, k = 0..n_steps."""

    t_max: float
    n_steps: int

    def __post_init__(self):
        if self.t_max <= 0.0:
            raise DomainError(f"t_max must be positive, got {self.t_max:g}")
        if self.n_steps < 1:
            raise DomainError(f"n_steps must be >= 1, got {self.n_steps}")

    @property
    def dt(self) -> float:
        return self.t_max / self.n_steps

    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.n_steps + 1)


@dataclass(frozen=True)
class Path:
    """Sampled process path: times (n+1,), values (n+1, d), values[0] = 0."""

    times: np.ndarray
    values: np.ndarray
    hurst: float
    seed: SeedSpec

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    def to_csv(self, target) -> None:
        """Write `t,x1,...,xd` rows with 17 significant digits."""
        header = "t," + ",".join(f"x{i + 1}" for i in range(self.dim))
        rows = [header]
        for t, row in zip(self.times, self.values):
            rows.append(",".join(f"{v:.17g}" for v in (t, *row)))
        text = "\n".join(rows) + "\n"
        if hasattr(target, "write"):
            target.write(text)
        else:
            with open(target, "w") as fh:
                fh.write(text)


def _fgn_autocov(hurst: float, lags: np.ndarray) -> np.ndarray:
    k = np.abs(lags).astype(float)
    return 0.5 * (
        np.abs(k + 1.0) ** (2 * hurst)
        + np.abs(k - 1.0) ** (2 * hurst)
        - 2.0 * k ** (2 * hurst)
    )


def _fgn_circulant(hurst: float, n: int, rng: np.random.Generator) -> np.ndarray:
    """n unit-spacing fractional Gaussian noise variates by circulant
    embedding of the autocovariance (Davies-Harte).  Raises EmbeddingError
    on negative circulant eigenvalues.
    """
    c = np.empty(2 * n)
    acf = _fgn_autocov(hurst, np.arange(n))
    c[:n] = acf
    c[n] = 0.0
    c[n + 1:] = acf[1:][::-1]
    g = np.fft.fft(c).real
    if g.min() < -1e-9 * g.max():
        raise EmbeddingError(
            f"circulant embedding not nonnegative-definite (H={hurst:g}, n={n})"
        )
    g = np.maximum(g, 0.0)
    z = rng.standard_normal(2 * n)
    w = np.zeros(2 * n, dtype=complex)
    w[0] = math.sqrt(g[0] / (2 * n)) * z[0]
    w[n] = math.sqrt(g[n] / (2 * n)) * z[1]
    x, y = z[2:n + 1], z[n + 1:2 * n]
    w[1:n] = np.sqrt(g[1:n] / (4 * n)) * (x + 1j * y)
    w[n + 1:] = np.conj(w[1:n][::-1])
    return np.fft.fft(w).real[:n]


def fbm_covariance(times: np.ndarray, hurst: float) -> np.ndarray:
    """Covariance matrix (t^2H + s^2H - |t-s|^2H)/2 on strictly positive times."""
    t = np.asarray(times, dtype=float)
    return 0.5 * (
        t[:, None] ** (2 * hurst)
        + t[None, :] ** (2 * hurst)
        - np.abs(t[:, None] - t[None, :]) ** (2 * hurst)
    )


_factor_cache: dict = {}


def fbm_cholesky_factor(hurst: float, times: np.ndarray) -> np.ndarray:
    """Lower Cholesky factor of the path covariance; cached per grid."""
    t = np.asarray(times, dtype=float)
    key = (hurst, t.tobytes())
    hit = _factor_cache.get(key)
    if hit is not None:
        return hit
    cov = fbm_covariance(t, hurst)
    try:
        L = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError:
        # tiny diagonal lift for grids at the edge of numerical rank
        L = np.linalg.cholesky(cov + 1e-12 * np.trace(cov) / len(t) * np.eye(len(t)))
    if len(_factor_cache) > 16:
        _factor_cache.clear()
    _factor_cache[key] = L
    return L


def sample_fbm_batch(
    hurst: float,
    times: np.ndarray,
    dim: int,
    n_paths: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """(n_paths, len(times), dim) fBm values at strictly positive times,
    i.i.d. components, by batched Cholesky (H=1 degenerates to a line).
    The stream use is a single standard_normal draw of fixed shape.
    """
    t = np.asarray(times, dtype=float)
    n = len(t)
    if hurst == 1.0:
        xi = rng.standard_normal((n_paths, 1, dim))
        return t[None, :, None] * xi
    z = rng.standard_normal((n_paths, dim, n))
    L = fbm_cholesky_factor(hurst, t)
    vals = z @ L.T  # (n_paths, dim, n)
    return np.swapaxes(vals, 1, 2)


def _fbm_values(hurst: float, grid: GridSpec, dim: int,
                rng: np.random.Generator) -> np.ndarray:
    """(n_steps+1, dim) values on the uniform grid, zero at t=0."""
    n = grid.n_steps
    values = np.zeros((n + 1, dim))
    if hurst == 1.0:
        xi = rng.standard_normal(dim)
        values[1:] = grid.times()[1:, None] * xi[None, :]
        return values
    scale = grid.dt ** hurst
    for j in range(dim):
        try:
            fgn = _fgn_circulant(hurst, n, rng)
        except EmbeddingError:
            z = rng.standard_normal(n)
            L = fbm_cholesky_factor(hurst, np.arange(1, n + 1, dtype=float))
            fgn = np.diff(np.concatenate([[0.0], L @ z]))
        values[1:, j] = np.cumsum(fgn) * scale
    return values


def generate_fbm(hurst: float, grid: GridSpec, dim: int, seed: SeedSpec) -> Path:
    """d-dimensional fBm path on the grid, exact in law, deterministic in seed."""
    if not 0.0 < hurst <= 1.0:
        raise DomainError(f"requires 0 < hurst <= 1, got {hurst:g}")
    if dim < 1:
        raise DomainError(f"requires dim >= 1, got {dim}")
    rng = make_stream(seed)
    values = _fbm_values(hurst, grid, dim, rng)
    return Path(times=grid.times(), values=values, hurst=hurst, seed=seed)


def rescale_path(path: Path, time_factor: float) -> Path:
    """Self-similarity rescaling: times scaled by c, values by c^H."""
    if time_factor <= 0.0:
        raise DomainError(f"time_factor must be positive, got {time_factor:g}")
    return Path(
        times=path.times * time_factor,
        values=path.values * time_factor ** path.hurst,
        hurst=path.hurst,
        seed=path.seed,
    )
