from __future__ import annotations

from fractions import Fraction

from pydantic import BaseModel, ConfigDict, model_validator

from crnstab.data_model.network.complex import ComplexModel  # noqa: TCH001
from crnstab.data_model.types import Rational  # noqa: TCH001


class ReactionModel(BaseModel):
    """One delayed mass-action reaction `reactant -> product` with rate κ and delay τ."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    reactant: ComplexModel
    product: ComplexModel
    rate: Rational
    delay: Rational = Fraction(0)

    @model_validator(mode="after")
    def validate_reaction_fields(self) -> ReactionModel:
        if self.rate <= 0:
            msg = f"Rate constant must be positive, got {self.rate}"
            raise ValueError(msg)
        if self.delay < 0:
            msg = f"Delay must be non-negative, got {self.delay}"
            raise ValueError(msg)
        if len(self.reactant) != len(self.product):
            msg = "Reactant and product complexes have different lengths"
            raise ValueError(msg)
        if self.reactant == self.product:
            msg = f"Self-loop reaction {self.reactant} -> {self.product} is not allowed"
            raise ValueError(msg)
        if not self.reactant.is_integral:
            msg = f"Reactant complex {self.reactant} must have integer coefficients"
            raise ValueError(msg)
        return self

    @property
    def vector(self) -> tuple[Fraction, ...]:
        """Exact reaction vector y' - y."""
        return self.product.minus(self.reactant)

    def with_delay(self, delay: Fraction) -> ReactionModel:
        # Rebuilt rather than model_copy'd so the new delay is validated.
        return ReactionModel(
            reactant=self.reactant, product=self.product, rate=self.rate, delay=delay
        )
