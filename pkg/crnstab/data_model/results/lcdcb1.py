from __future__ import annotations

from fractions import Fraction  # noqa: TCH003

from pydantic import BaseModel, ConfigDict

from crnstab.data_model.types import Rational  # noqa: TCH001


class Lcdcb1Result(BaseModel):
    """Classification of a candidate against a reference DCB.

    Attributes:
        pairing: pairing[i] is the reference reaction paired with candidate reaction i.
        b: Shrink factors b_i = κ̃_i / κ_i with v_i = b_i ṽ_i.
        accepted: Whether every condition holds.
        rejection_reason: First failing condition when not accepted.
        stability_applicable: False when some b_i > 1 was tolerated.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    pairing: list[int] = []
    b: list[Rational] = []
    accepted: bool
    rejection_reason: str = ""
    stability_applicable: bool = True

    @property
    def b_values(self) -> list[Fraction]:
        return list(self.b)
