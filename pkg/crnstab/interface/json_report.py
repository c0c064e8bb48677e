from __future__ import annotations

import json
from typing import TYPE_CHECKING, Any

import typer

from crnstab.interface.base import ReportInterfaceBase
from crnstab.parser.crn import format_network

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


class JsonReport(ReportInterfaceBase):
    """Every report field as one JSON document on stdout."""

    def _emit(self, payload: dict[str, Any]) -> None:
        typer.echo(json.dumps(payload, indent=2, sort_keys=True))

    def display_analysis(
            self,
            analysis: StoichiometryAnalysis,
            equilibrium: EquilibriumResult | None,
            note: str | None = None
    ) -> None:
        payload = analysis.model_dump(mode="json")
        payload["linkage_class_count"] = analysis.linkage_class_count
        payload["equilibrium"] = (
            None if equilibrium is None else equilibrium.model_dump(mode="json")
        )
        payload["note"] = note
        self._emit(payload)

    def display_realization(self, result: RealizationResult, certificate: ConjugacyReport) -> None:
        self._emit({
            "network": format_network(result.network),
            "q": result.q.model_dump(mode="json")["q"],
            "species_permutation": result.species_permutation,
            "pruned_reactions": result.pruned_reactions,
            "scalar_branch": result.scalar_branch,
            "certificate": certificate.model_dump(mode="json"),
        })

    def display_classification(
            self,
            result: Lcdcb1Result,
            companion: NetworkModel | None
    ) -> None:
        payload = result.model_dump(mode="json")
        payload["companion"] = None if companion is None else format_network(companion)
        self._emit(payload)

    def display_conjugacy(
            self,
            report: ConjugacyReport | None,
            probe: ConjugacyProbeResult | None,
            undelayed_equivalent: bool  # noqa: FBT001
    ) -> None:
        self._emit({
            "report": None if report is None else report.model_dump(mode="json"),
            "probe": None if probe is None else probe.model_dump(mode="json"),
            "undelayed_equivalent": undelayed_equivalent,
        })

    def display_verification(self, reports: list[SeriesReport]) -> None:
        summary = {
            report.name: {
                key: value
                for key, value in report.model_dump(mode="json").items()
                if key not in {"times", "values"}
            }
            for report in reports
        }
        summary["passed"] = all(report.passed for report in reports)
        typer.echo(json.dumps(summary, sort_keys=True), err=True)
