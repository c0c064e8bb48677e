from __future__ import annotations

from abc import ABC, abstractmethod
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from crnstab.data_model.network import NetworkModel
    from crnstab.data_model.results import (
        ConjugacyProbeResult,
        ConjugacyReport,
        EquilibriumResult,
        Lcdcb1Result,
        RealizationResult,
        SeriesReport,
        StoichiometryAnalysis,
    )


class ReportInterfaceBase(ABC):
    @abstractmethod
    def display_analysis(
            self,
            analysis: StoichiometryAnalysis,
            equilibrium: EquilibriumResult | None,
            note: str | None = None
    ) -> None:
        pass

    @abstractmethod
    def display_realization(self, result: RealizationResult, certificate: ConjugacyReport) -> None:
        pass

    @abstractmethod
    def display_classification(
            self,
            result: Lcdcb1Result,
            companion: NetworkModel | None
    ) -> None:
        pass

    @abstractmethod
    def display_conjugacy(
            self,
            report: ConjugacyReport | None,
            probe: ConjugacyProbeResult | None,
            undelayed_equivalent: bool
    ) -> None:
        pass

    @abstractmethod
    def display_verification(self, reports: list[SeriesReport]) -> None:
        pass
