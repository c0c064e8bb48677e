from crnstab.data_model.results.conjugacy import (
    ConjugacyProbeResult,
    ConjugacyReport,
    DiagonalMap,
    RealizationResult,
)
from crnstab.data_model.results.diagnostics import (
    ConservationReport,
    DissipationReport,
    SeriesReport,
)
from crnstab.data_model.results.equilibrium import EquilibriumResult
from crnstab.data_model.results.lcdcb1 import Lcdcb1Result
from crnstab.data_model.results.structure import StoichiometryAnalysis

__all__ = [
    "ConjugacyProbeResult",
    "ConjugacyReport",
    "ConservationReport",
    "DiagonalMap",
    "DissipationReport",
    "EquilibriumResult",
    "Lcdcb1Result",
    "RealizationResult",
    "SeriesReport",
    "StoichiometryAnalysis",
]
