"""Model parameter triple (beta, alpha, dim) with admissibility checks."""

from __future__ import annotations

from dataclasses import dataclass

from .exceptions import DomainError


@dataclass(frozen=True)
class ModelParams:
    """The parameter triple of the process family.

    beta in (0, 1], alpha in (0, 2], dim >= 1.  ``green_exists`` tells
    whether the closed-form Green measure applies: d*alpha > 2 with
    1 < alpha <= 2, or the Brownian boundary beta = alpha = 1 with d >= 3.
    """

    beta: float
    alpha: float
    dim: int

    def __post_init__(self):
        if not 0.0 < self.beta <= 1.0:
            raise DomainError(f"requires 0 < beta <= 1, got beta = {self.beta:g}")
        if not 0.0 < self.alpha <= 2.0:
            raise DomainError(f"requires 0 < alpha <= 2, got alpha = {self.alpha:g}")
        if self.dim < 1 or int(self.dim) != self.dim:
            raise DomainError(f"requires integer dim >= 1, got dim = {self.dim}")

    @property
    def hurst(self) -> float:
        return 0.5 * self.alpha

    @property
    def green_exists(self) -> bool:
        if self.beta == 1.0 and self.alpha == 1.0:
            return self.dim >= 3
        return self.dim * self.alpha > 2.0 and 1.0 < self.alpha <= 2.0

    def failed_green_constraint(self) -> str | None:
        """Name of the first violated admissibility inequality, or None."""
        if self.green_exists:
            return None
        if self.beta == 1.0 and self.alpha == 1.0:
            return f"requires d >= 3 in the Brownian case (got d = {self.dim})"
        if not 1.0 < self.alpha <= 2.0:
            return f"requires 1 < alpha <= 2 (got alpha = {self.alpha:g})"
        return f"requires d*alpha > 2 (got d*alpha = {self.dim * self.alpha:g})"
