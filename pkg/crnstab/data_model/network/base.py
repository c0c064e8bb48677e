from __future__ import annotations

from fractions import Fraction

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from crnstab.data_model.network.complex import ComplexModel
from crnstab.data_model.network.reaction import ReactionModel  # noqa: TCH001


class NetworkModel(BaseModel):
    """A delayed mass-action network (S, C, R, κ, τ).

    Species order is significant: every complex is a coefficient vector in this order.
    Complexes are derived from the reactions, in order of first appearance.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    species: tuple[str, ...]
    reactions: tuple[ReactionModel, ...]

    @model_validator(mode="after")
    def validate_network_fields(self) -> NetworkModel:
        if len(set(self.species)) != len(self.species):
            msg = f"Species names must be unique, got {list(self.species)}"
            raise ValueError(msg)
        if not self.reactions:
            msg = "A network needs at least one reaction"
            raise ValueError(msg)
        n = len(self.species)
        for idx, reaction in enumerate(self.reactions, 1):
            if len(reaction.reactant) != n:
                msg = f"Reaction {idx} has {len(reaction.reactant)} coefficients, expected {n}"
                raise ValueError(msg)
        if all(c.is_zero for c in self.complexes):
            msg = "At least one complex must be nonzero"
            raise ValueError(msg)
        return self

    @property
    def n_species(self) -> int:
        return len(self.species)

    @property
    def n_reactions(self) -> int:
        return len(self.reactions)

    @property
    def complexes(self) -> list[ComplexModel]:
        seen: dict[ComplexModel, None] = {}
        for reaction in self.reactions:
            seen.setdefault(reaction.reactant, None)
            seen.setdefault(reaction.product, None)
        return list(seen)

    @property
    def rates(self) -> np.ndarray:
        return np.array([float(r.rate) for r in self.reactions])

    @property
    def delays(self) -> tuple[Fraction, ...]:
        return tuple(r.delay for r in self.reactions)

    @property
    def max_delay(self) -> Fraction:
        return max(self.delays)

    def reactant_matrix(self) -> np.ndarray:
        """Reactant complexes as rows, shape (r, n)."""
        return np.array([r.reactant.as_array() for r in self.reactions])

    def reaction_matrix(self) -> np.ndarray:
        """Reaction vectors y' - y as columns, shape (n, r)."""
        return np.array([[float(c) for c in r.vector] for r in self.reactions]).T

    def species_index(self, name: str) -> int:
        return self.species.index(name)

    def with_delays(self, delays: list[Fraction] | tuple[Fraction, ...]) -> NetworkModel:
        """Replace delays positionally."""
        if len(delays) != self.n_reactions:
            msg = f"Got {len(delays)} delays for {self.n_reactions} reactions"
            raise ValueError(msg)
        return NetworkModel(
            species=self.species,
            reactions=tuple(
                r.with_delay(d) for r, d in zip(self.reactions, delays, strict=True)
            ),
        )

    def reordered(self, species: tuple[str, ...] | list[str]) -> NetworkModel:
        """Same network written in another species order."""
        if sorted(species) != sorted(self.species):
            msg = f"Cannot reorder {list(self.species)} as {list(species)}"
            raise ValueError(msg)
        order = [self.species.index(s) for s in species]

        def permute(complex_: ComplexModel) -> ComplexModel:
            return ComplexModel(coefficients=tuple(complex_.coefficients[j] for j in order))

        return NetworkModel(
            species=tuple(species),
            reactions=tuple(
                ReactionModel(
                    reactant=permute(r.reactant),
                    product=permute(r.product),
                    rate=r.rate,
                    delay=r.delay,
                )
                for r in self.reactions
            ),
        )
