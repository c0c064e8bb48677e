from __future__ import annotations

from fractions import Fraction

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from crnstab.data_model.network import NetworkModel  # noqa: TCH001
from crnstab.data_model.types import Rational  # noqa: TCH001


class DiagonalMap(BaseModel):
    """Positive diagonal matrix Q = diag(q), acting as x = Q x̃."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    q: tuple[Rational, ...]

    @field_validator("q")
    @classmethod
    def validate_q(cls, value: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
        if not value:
            msg = "Q needs at least one diagonal entry"
            raise ValueError(msg)
        if any(v <= 0 for v in value):
            msg = f"Q must be positive, got {[str(v) for v in value]}"
            raise ValueError(msg)
        return value

    @classmethod
    def identity(cls, n: int) -> DiagonalMap:
        return cls(q=(Fraction(1),) * n)

    def __len__(self) -> int:
        return len(self.q)

    @property
    def is_scalar(self) -> bool:
        return len(set(self.q)) == 1

    def as_array(self) -> np.ndarray:
        return np.array([float(v) for v in self.q])

    def inverse(self) -> DiagonalMap:
        return DiagonalMap(q=tuple(1 / v for v in self.q))

    def monomial_factor(self, exponents: tuple[Fraction, ...]) -> Fraction:
        """Exact Π_j q_j^{-y_j} for integral y."""
        factor = Fraction(1)
        for q_j, y_j in zip(self.q, exponents, strict=True):
            factor /= q_j ** int(y_j)
        return factor


class RealizationResult(BaseModel):
    """A network realizing the linear-conjugate image of a DCB under Q."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    network: NetworkModel
    q: DiagonalMap
    species_permutation: list[int]
    pruned_reactions: int
    scalar_branch: bool


class ConjugacyReport(BaseModel):
    """Outcome of comparing field(a) with Q applied to field(b)."""
    model_config = ConfigDict(frozen=True)

    conjugate: bool
    mismatches: list[str] = []
    max_difference: float = 0.0


class ConjugacyProbeResult(BaseModel):
    """Outcome of searching for a diagonal Q relating two networks.

    `witness` is set when a Q was found and certified; otherwise `obstruction` says why no
    positive diagonal Q can exist.
    """
    model_config = ConfigDict(frozen=True)

    conjugate: bool
    witness: list[float] | None = None
    obstruction: str | None = None
