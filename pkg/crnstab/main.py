# ruff: noqa: G004, FBT001, FBT002, PLR0913

from __future__ import annotations

import logging
import sys
from enum import IntEnum
from fractions import Fraction
from pathlib import Path

import numpy as np
import typer
from typing_extensions import Annotated

from crnstab.analysis import (
    analyze_structure,
    find_complex_balanced_equilibrium,
)
from crnstab.config import SolverSettings, load_settings
from crnstab.conjugacy import (
    check_linear_conjugacy,
    construct_lcdcb,
    probe_conjugacy,
    undelayed_equivalence,
)
from crnstab.data_model.network import NetworkModel
from crnstab.data_model.results import DiagonalMap, SeriesReport
from crnstab.data_model.types import to_fraction
from crnstab.diagnostics import (
    ConservedFunctional,
    LyapunovSpec,
    conservation_report,
    dissipation_report,
    h_a_basis,
)
from crnstab.exceptions import (
    AnalysisError,
    CrnstabError,
    NetworkParseError,
    PositivityLostError,
    RealizationError,
    ReactionCountMismatchError,
    SimulationError,
    SpeciesMismatchError,
    StepLimitError,
)
from crnstab.interface import ReportFormat, get_reporter, write_atomically, write_trajectory_csv
from crnstab.lcdcb1 import classify_lcdcb1, companion_dcb
from crnstab.parser import format_network, load_network, parse_history
from crnstab.simulation import Trajectory, simulate
from crnstab.simulation.batch import load_batch, run_batch

logger = logging.getLogger(__name__)

app = typer.Typer(
    name="crnstab",
    help="Analyze delayed mass-action reaction networks: structure, equilibria, "
         "linear-conjugate realizations, simulation and stability certificates.",
)


class ExitCode(IntEnum):
    OK = 0
    REJECTED = 1
    PARSE_ERROR = 2
    ANALYSIS_ERROR = 3
    POSITIVITY_LOST = 4
    CERTIFICATE_FAILED = 5


@app.callback()
def main(
    ctx: typer.Context,
    verbose: Annotated[
        int,
        typer.Option("--verbose", "-v", count=True, help="Log INFO (-v) or DEBUG (-vv).")
    ] = 0,
    config: Annotated[
        Path | None,
        typer.Option("--config", envvar="CRNSTAB_CONFIG", help="YAML file of solver settings.")
    ] = None,
) -> None:
    level = logging.WARNING - 10 * min(verbose, 2)
    logging.basicConfig(
        level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr
    )
    logging.getLogger("crnstab").setLevel(level)
    try:
        ctx.obj = load_settings(config)
    except (OSError, ValueError) as e:
        typer.echo(f"Cannot load settings: {e}", err=True)
        raise typer.Exit(code=ExitCode.PARSE_ERROR) from e


def _fail(message: str, code: ExitCode) -> typer.Exit:
    typer.echo(message, err=True)
    return typer.Exit(code=code)


def _load(path: Path) -> NetworkModel:
    try:
        return load_network(path)
    except NetworkParseError as e:
        raise _fail(f"{path}: {e}", ExitCode.PARSE_ERROR) from e
    except (OSError, ValueError) as e:
        raise _fail(f"{path}: {e}", ExitCode.PARSE_ERROR) from e


def _rationals(text: str, option: str) -> list[Fraction]:
    try:
        return [to_fraction(part.strip()) for part in text.split(",")]
    except (TypeError, ValueError, ZeroDivisionError) as e:
        msg = f"{option} expects comma-separated numbers, got {text!r}"
        raise typer.BadParameter(msg) from e


def _diagonal(text: str, n_species: int) -> DiagonalMap:
    values = _rationals(text, "--Q")
    if len(values) != n_species:
        msg = f"--Q needs {n_species} entries, got {len(values)}"
        raise typer.BadParameter(msg)
    try:
        return DiagonalMap(q=tuple(values))
    except ValueError as e:
        raise typer.BadParameter(str(e)) from e


def _with_tau(net: NetworkModel, tau: str | None) -> NetworkModel:
    if tau is None:
        return net
    try:
        return net.with_delays(_rationals(tau, "--tau"))
    except ValueError as e:
        raise typer.BadParameter(str(e)) from e


def _warn_if_not_dcb(net: NetworkModel, settings: SolverSettings, role: str) -> None:
    analysis = analyze_structure(net, settings)
    if not analysis.weakly_reversible or analysis.deficiency != 0:
        logger.warning(f"The {role} is not weakly reversible with deficiency zero")


NetworkArgument = Annotated[Path, typer.Argument(help="Path to the .crn (or .json) network file.")]
FormatOption = Annotated[
    ReportFormat, typer.Option("--format", "-f", help="Report format.")
]
ReferenceOption = Annotated[
    Path, typer.Option("--against", help="Reference network file.")
]
OutputOption = Annotated[
    Path | None, typer.Option("--output", "-o", help="Write the result to this file.")
]
TauOption = Annotated[
    str | None, typer.Option("--tau", help="Comma-separated delays replacing the file's.")
]


@app.command()
def analyze(
    ctx: typer.Context,
    network_path: NetworkArgument,
    report_format: FormatOption = ReportFormat.TEXT,
) -> None:
    """Report complexes, linkage classes, deficiency, S^⊥ and the CB equilibrium."""
    settings: SolverSettings = ctx.obj
    net = _load(network_path)
    analysis = analyze_structure(net, settings)
    reporter = get_reporter(report_format)

    equilibrium, failure = None, None
    if analysis.weakly_reversible:
        try:
            equilibrium = find_complex_balanced_equilibrium(net, settings)
        except AnalysisError as e:
            failure = str(e)
    reporter.display_analysis(analysis, equilibrium, failure)
    if failure is not None:
        raise typer.Exit(code=ExitCode.ANALYSIS_ERROR)


@app.command()
def realize(
    ctx: typer.Context,
    network_path: NetworkArgument,
    q: Annotated[str, typer.Option("--Q", "--q", help="Diagonal of Q, e.g. 2,1.")],
    output: OutputOption = None,
    report_format: FormatOption = ReportFormat.TEXT,
) -> None:
    """Construct the linear-conjugate realization of a DCB under x = Q x̃."""
    settings: SolverSettings = ctx.obj
    dcb = _load(network_path)
    diagonal = _diagonal(q, dcb.n_species)
    _warn_if_not_dcb(dcb, settings, "input network")
    try:
        result = construct_lcdcb(dcb, diagonal)
    except RealizationError as e:
        raise _fail(str(e), ExitCode.ANALYSIS_ERROR) from e

    certificate = check_linear_conjugacy(result.network, dcb, diagonal, settings)
    if output is not None:
        write_atomically(output, lambda handle: handle.write(format_network(result.network)))
    get_reporter(report_format).display_realization(result, certificate)
    if not certificate.conjugate:
        raise _fail("Realization failed its conjugacy certificate", ExitCode.ANALYSIS_ERROR)


@app.command()
def classify(
    ctx: typer.Context,
    network_path: NetworkArgument,
    against: ReferenceOption,
    allow_b_greater_1: Annotated[
        bool,
        typer.Option(
            "--allow-b-greater-1",
            help="Accept b_i > 1 but mark the stability result inapplicable.",
        )
    ] = False,
    report_format: FormatOption = ReportFormat.TEXT,
) -> None:
    """Classify a network against a reference DCB (shrunk reaction vectors, b_i ≤ 1)."""
    settings: SolverSettings = ctx.obj
    candidate = _load(network_path)
    reference = _load(against)
    try:
        result = classify_lcdcb1(candidate, reference, allow_b_greater_1, settings)
    except (SpeciesMismatchError, ReactionCountMismatchError) as e:
        raise _fail(str(e), ExitCode.ANALYSIS_ERROR) from e

    companion = companion_dcb(candidate, result, reference) if result.accepted else None
    get_reporter(report_format).display_classification(result, companion)
    if not result.accepted:
        raise typer.Exit(code=ExitCode.REJECTED)


@app.command()
def conjugate(
    ctx: typer.Context,
    network_path: NetworkArgument,
    against: ReferenceOption,
    q: Annotated[
        str | None,
        typer.Option("--Q", "--q", help="Check this Q only; otherwise search for one.")
    ] = None,
    report_format: FormatOption = ReportFormat.TEXT,
) -> None:
    """Check linear conjugacy of two delayed networks."""
    settings: SolverSettings = ctx.obj
    net = _load(network_path)
    reference = _load(against)
    if net.n_species != reference.n_species:
        raise _fail("Networks have different numbers of species", ExitCode.ANALYSIS_ERROR)

    report = None
    if q is not None:
        report = check_linear_conjugacy(net, reference, _diagonal(q, net.n_species), settings)
    probe = probe_conjugacy(net, reference, settings)
    get_reporter(report_format).display_conjugacy(
        report, probe, undelayed_equivalence(net, reference)
    )
    verdict = report.conjugate if report is not None else probe.conjugate
    if not verdict:
        raise typer.Exit(code=ExitCode.REJECTED)


def _run(
    net: NetworkModel,
    history_text: str,
    t_end: float,
    step: float | None,
    settings: SolverSettings,
) -> Trajectory:
    try:
        history = parse_history(history_text, net.n_species)
    except NetworkParseError as e:
        raise _fail(str(e), ExitCode.PARSE_ERROR) from e
    try:
        return simulate(net, history, t_end, step, settings)
    except StepLimitError as e:
        raise _fail(str(e), ExitCode.PARSE_ERROR) from e
    except PositivityLostError as e:
        raise _fail(str(e), ExitCode.POSITIVITY_LOST) from e
    except SimulationError as e:
        raise _fail(str(e), ExitCode.POSITIVITY_LOST) from e
    except ValueError as e:
        raise typer.BadParameter(str(e)) from e


def _emit_csv(
    traj: Trajectory,
    sample_dt: float,
    output: Path | None,
    columns: dict[str, list[float]] | None = None,
) -> None:
    if output is None:
        write_trajectory_csv(traj, sys.stdout, sample_dt, columns)
    else:
        write_atomically(
            output, lambda handle: write_trajectory_csv(traj, handle, sample_dt, columns)
        )


HistoryOption = Annotated[
    str | None,
    typer.Option("--history", help="Initial data: const:v1,v2,... or expr:e1,e2,... in s."),
]
TEndOption = Annotated[float, typer.Option("--t-end", min=0, help="Final time.")]
StepOption = Annotated[
    float | None, typer.Option("--step", min=0, help="Requested step (shrunk to fit delays).")
]
SampleOption = Annotated[
    float | None, typer.Option("--sample-every", min=0, help="Spacing of CSV rows.")
]


@app.command("simulate")
def simulate_command(
    ctx: typer.Context,
    network_path: Annotated[
        Path | None, typer.Argument(help="Network file (omit with --batch).")
    ] = None,
    tau: TauOption = None,
    history: HistoryOption = None,
    t_end: TEndOption = 100.0,
    step: StepOption = None,
    sample_every: SampleOption = None,
    output: OutputOption = None,
    batch: Annotated[
        Path | None, typer.Option("--batch", help="YAML file of scenarios to run concurrently.")
    ] = None,
    workers: Annotated[
        int | None, typer.Option("--workers", min=1, help="Threads for --batch.")
    ] = None,
) -> None:
    """Integrate the delayed dynamics and write a CSV time series."""
    settings: SolverSettings = ctx.obj
    if batch is not None:
        try:
            written = run_batch(load_batch(batch), settings, workers)
        except PositivityLostError as e:
            raise _fail(str(e), ExitCode.POSITIVITY_LOST) from e
        except (NetworkParseError, OSError, ValueError) as e:
            raise _fail(str(e), ExitCode.PARSE_ERROR) from e
        except CrnstabError as e:
            raise _fail(str(e), ExitCode.POSITIVITY_LOST) from e
        for name, path in written.items():
            typer.echo(f"{name}: {path}")
        return

    if network_path is None or history is None:
        msg = "simulate needs a network file and --history (or --batch)"
        raise typer.BadParameter(msg)
    net = _with_tau(_load(network_path), tau)
    traj = _run(net, history, t_end, step, settings)
    _emit_csv(traj, sample_every or settings.sample_every, output)


@app.command()
def verify(
    ctx: typer.Context,
    network_path: NetworkArgument,
    history: Annotated[str, typer.Option("--history", help="Initial data spec.")],
    tau: TauOption = None,
    t_end: TEndOption = 100.0,
    step: StepOption = None,
    sample_every: SampleOption = None,
    output: OutputOption = None,
    lyapunov: Annotated[
        str | None,
        typer.Option("--lyapunov", help="Reference state of V, as ref=x1,x2,...")
    ] = None,
    conserved: Annotated[
        bool, typer.Option("--conserved", help="Also check c_a (and h_a) conservation.")
    ] = False,
    against: Annotated[
        Path | None, typer.Option("--against", help="Reference DCB supplying x̄.")
    ] = None,
    q: Annotated[
        str | None, typer.Option("--q", "--Q", help="Q of an ℓcDCB run (with --dcb).")
    ] = None,
    dcb: Annotated[
        Path | None, typer.Option("--dcb", help="DCB whose image under Q is simulated.")
    ] = None,
    report_format: FormatOption = ReportFormat.TEXT,
) -> None:
    """Simulate, then certify Lyapunov dissipation and (optionally) conservation."""
    settings: SolverSettings = ctx.obj
    if (q is None) != (dcb is None):
        msg = "--q and --dcb must be given together"
        raise typer.BadParameter(msg)
    net = _with_tau(_load(network_path), tau)
    traj = _run(net, history, t_end, step, settings)
    sample_dt = sample_every or settings.sample_every

    try:
        spec, name = _lyapunov_spec(net, lyapunov, against, q, dcb, settings)
    except (AnalysisError, ValueError) as e:
        raise _fail(f"No Lyapunov reference: {e}", ExitCode.ANALYSIS_ERROR) from e

    reports: list[SeriesReport] = [dissipation_report(traj, spec, sample_dt, settings, name)]
    if conserved:
        basis = analyze_structure(net, settings).s_perp_matrix()
        for k, a in enumerate(basis, 1):
            functional = ConservedFunctional.for_network(net, a, settings)
            reports.append(conservation_report(traj, functional, sample_dt, settings, f"c_a{k}"))
        if q is not None and dcb is not None:
            source = _load(dcb)
            diagonal = _diagonal(q, source.n_species)
            for k, a in enumerate(h_a_basis(source, diagonal, settings), 1):
                functional = ConservedFunctional.for_conjugate(source, diagonal, a, settings)
                reports.append(
                    conservation_report(traj, functional, sample_dt, settings, f"h_a{k}")
                )

    _emit_csv(traj, sample_dt, output, {report.name: report.values for report in reports})
    get_reporter(report_format).display_verification(reports)
    if not all(report.passed for report in reports):
        raise typer.Exit(code=ExitCode.CERTIFICATE_FAILED)


def _lyapunov_spec(
    net: NetworkModel,
    lyapunov: str | None,
    against: Path | None,
    q: str | None,
    dcb: Path | None,
    settings: SolverSettings,
) -> tuple[LyapunovSpec, str]:
    reference = None
    if lyapunov is not None:
        values = [float(v) for v in _rationals(lyapunov.removeprefix("ref="), "--lyapunov")]
        if len(values) != net.n_species or any(v <= 0 for v in values):
            msg = f"--lyapunov needs {net.n_species} positive entries"
            raise typer.BadParameter(msg)
        reference = np.array(values)

    if q is not None and dcb is not None:
        source = _load(dcb)
        diagonal = _diagonal(q, source.n_species)
        if reference is None:
            reference = diagonal.as_array() * find_complex_balanced_equilibrium(source, settings).x
        return LyapunovSpec.for_conjugate(source, diagonal, reference), "V_L"

    if reference is None:
        base = _load(against) if against is not None else net
        if base.species != net.species:
            base = base.reordered(net.species)
        reference = find_complex_balanced_equilibrium(base, settings).x
    return LyapunovSpec.from_network(net, reference), "V"
