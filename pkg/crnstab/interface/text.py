from __future__ import annotations

from typing import TYPE_CHECKING

import typer
from prettytable import PrettyTable

from crnstab.data_model.types import format_fraction
from crnstab.interface.base import ReportInterfaceBase
from crnstab.parser.crn import format_complex, format_network

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


def _yes_no(flag: bool) -> str:  # noqa: FBT001
    return "yes" if flag else "no"


def _vector(values: list[float]) -> str:
    return "(" + ", ".join(f"{v:.10g}" for v in values) + ")"


class TextReport(ReportInterfaceBase):
    """Human-readable reports on stdout."""

    PASS_STRING = "PASS"
    FAIL_STRING = "FAIL"

    def display_analysis(
            self,
            analysis: StoichiometryAnalysis,
            equilibrium: EquilibriumResult | None,
            note: str | None = None
    ) -> None:
        table = PrettyTable()
        table.field_names = ["#", "Complex", "Linkage class"]
        table.align["Complex"] = "l"
        membership = {
            c: k + 1 for k, members in enumerate(analysis.linkage_classes) for c in members
        }
        for idx, complex_ in enumerate(analysis.complexes):
            table.add_row([idx + 1, format_complex(complex_, analysis.species), membership[idx]])
        typer.echo(table)

        typer.echo(f"species: {', '.join(analysis.species)}")
        typer.echo(f"linkage classes: {analysis.linkage_class_count}")
        typer.echo(f"rank: {analysis.rank}")
        typer.echo(f"deficiency: {analysis.deficiency}, "
                   f"weakly reversible: {_yes_no(analysis.weakly_reversible)}")
        if analysis.basis_S_perp:
            for row in analysis.basis_S_perp:
                typer.echo(f"S^⊥ basis: {_vector(row)}")
        else:
            typer.echo("S^⊥ basis: (empty)")
        if equilibrium is not None:
            typer.echo(f"CB equilibrium: {_vector(equilibrium.point)}")
        if note:
            typer.echo(note)

    def display_realization(self, result: RealizationResult, certificate: ConjugacyReport) -> None:
        typer.echo(format_network(result.network), nl=False)
        branch = "scalar" if result.scalar_branch else "general"
        typer.echo(f"# branch: {branch}, pruned reactions: {result.pruned_reactions}, "
                   f"species order: {result.species_permutation}", err=True)
        verdict = self.PASS_STRING if certificate.conjugate else self.FAIL_STRING
        typer.echo(f"# conjugacy certificate: {verdict}", err=True)
        for mismatch in certificate.mismatches:
            typer.echo(f"#   {mismatch}", err=True)

    def display_classification(
            self,
            result: Lcdcb1Result,
            companion: NetworkModel | None
    ) -> None:
        typer.echo("accepted" if result.accepted else f"rejected: {result.rejection_reason}")
        if result.pairing:
            table = PrettyTable()
            table.field_names = ["Candidate", "Reference", "b"]
            for idx, (j, b) in enumerate(zip(result.pairing, result.b)):
                table.add_row([idx + 1, j + 1, format_fraction(b)])
            typer.echo(table)
        typer.echo(f"b = {', '.join(format_fraction(b) for b in result.b)}")
        if not result.stability_applicable:
            typer.echo("stability result not applicable (some b_i > 1)")
        if companion is not None:
            delays = ", ".join(format_fraction(d) for d in companion.delays)
            typer.echo(f"companion DCB delays: {delays}")

    def display_conjugacy(
            self,
            report: ConjugacyReport | None,
            probe: ConjugacyProbeResult | None,
            undelayed_equivalent: bool  # noqa: FBT001
    ) -> None:
        if report is not None:
            typer.echo(f"conjugate under Q: {_yes_no(report.conjugate)} "
                       f"(max coefficient difference {report.max_difference:.3g})")
            for mismatch in report.mismatches:
                typer.echo(f"  {mismatch}")
        if probe is not None:
            if probe.conjugate:
                typer.echo(f"conjugate for some Q: yes, witness Q = {_vector(probe.witness)}")
            else:
                typer.echo(f"conjugate for some Q: no ({probe.obstruction})")
        typer.echo(f"same undelayed dynamics: {_yes_no(undelayed_equivalent)}")

    def display_verification(self, reports: list[SeriesReport]) -> None:
        table = PrettyTable()
        table.field_names = ["Check", "Worst", "Tolerance", "Result"]
        for report in reports:
            worst = getattr(report, "max_forward_difference", None)
            if worst is None:
                worst = getattr(report, "max_relative_drift", 0.0)
            verdict = self.PASS_STRING if report.passed else self.FAIL_STRING
            table.add_row([report.name, f"{worst:.3g}", f"{report.tolerance:.3g}", verdict])
        typer.echo(table, err=True)
        overall = all(report.passed for report in reports)
        typer.echo(self.PASS_STRING if overall else self.FAIL_STRING, err=True)
