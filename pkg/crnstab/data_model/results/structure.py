from __future__ import annotations

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from crnstab.data_model.network import ComplexModel  # noqa: TCH001


class StoichiometryAnalysis(BaseModel):
    """Structural summary of a network: complexes, linkage classes, deficiency, S and S^⊥."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    species: tuple[str, ...]
    complexes: list[ComplexModel]
    linkage_classes: list[list[int]]
    weakly_reversible: bool
    rank: int
    deficiency: int
    basis_S: list[list[float]]
    basis_S_perp: list[list[float]]

    @model_validator(mode="after")
    def validate_analysis_fields(self) -> StoichiometryAnalysis:
        n = len(self.species)
        if len(self.basis_S) + len(self.basis_S_perp) != n:
            msg = (f"Bases of S ({len(self.basis_S)}) and S^⊥ ({len(self.basis_S_perp)}) "
                   f"do not add up to {n} species")
            raise ValueError(msg)
        if self.deficiency != len(self.complexes) - self.linkage_class_count - self.rank:
            msg = "Deficiency does not match complexes, linkage classes and rank"
            raise ValueError(msg)
        return self

    @property
    def linkage_class_count(self) -> int:
        return len(self.linkage_classes)

    def s_perp_matrix(self) -> np.ndarray:
        """Rows are an orthonormal basis of S^⊥, shape (n - s, n)."""
        return np.array(self.basis_S_perp, dtype=float).reshape(-1, len(self.species))
