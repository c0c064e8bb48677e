from __future__ import annotations

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator


class EquilibriumResult(BaseModel):
    """A complex-balanced equilibrium x̄ and the directions of its equilibrium set.

    The full set of complex-balanced equilibria is {x : Ln x - Ln x̄ ∈ S^⊥}; its directions in
    Ln-coordinates are `equilibrium_set_directions`.
    """
    model_config = ConfigDict(frozen=True)

    point: list[float]
    residuals: list[float]
    equilibrium_set_directions: list[list[float]]
    iterations: int = 0

    @model_validator(mode="after")
    def validate_equilibrium_fields(self) -> EquilibriumResult:
        if any(v <= 0 for v in self.point):
            msg = f"Equilibrium must be strictly positive, got {self.point}"
            raise ValueError(msg)
        return self

    @property
    def x(self) -> np.ndarray:
        return np.array(self.point)

    @property
    def max_residual(self) -> float:
        return max((abs(r) for r in self.residuals), default=0.0)
