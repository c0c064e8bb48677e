from __future__ import annotations

from fractions import Fraction

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from crnstab.data_model.types import Rational  # noqa: TCH001


class ComplexModel(BaseModel):
    """A complex: the stoichiometric coefficient of every species, in network species order.

    Reactant complexes are integral. Product complexes of constructed realizations may carry
    non-negative rational coefficients.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    coefficients: tuple[Rational, ...]

    @field_validator("coefficients")
    @classmethod
    def validate_coefficients(cls, value: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
        if any(c < 0 for c in value):
            msg = f"Complex coefficients must be non-negative, got {[str(c) for c in value]}"
            raise ValueError(msg)
        return value

    @classmethod
    def zero(cls, n_species: int) -> ComplexModel:
        return cls(coefficients=(Fraction(0),) * n_species)

    @classmethod
    def from_counts(cls, counts: list[int] | tuple[int, ...]) -> ComplexModel:
        return cls(coefficients=tuple(Fraction(c) for c in counts))

    def __len__(self) -> int:
        return len(self.coefficients)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients)

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coefficients)

    def as_array(self) -> np.ndarray:
        return np.array([float(c) for c in self.coefficients])

    def minus(self, other: ComplexModel) -> tuple[Fraction, ...]:
        """Exact difference `self - other` (a reaction vector when self is the product)."""
        return tuple(a - b for a, b in zip(self.coefficients, other.coefficients, strict=True))

    def monomial(self, x: np.ndarray) -> float:
        """Mass-action monomial x^y."""
        return float(np.prod(np.power(x, self.as_array())))

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coefficients) + ")"
