# ruff: noqa: G004

from __future__ import annotations

import logging
from typing import TYPE_CHECKING

import numpy as np

from crnstab.config import DEFAULT_SETTINGS, SolverSettings
from crnstab.data_model.results import ConservationReport, DissipationReport
from crnstab.diagnostics.lyapunov import eval_V

if TYPE_CHECKING:
    from collections.abc import Sequence

    from crnstab.diagnostics.functionals import ConservedFunctional
    from crnstab.diagnostics.lyapunov import LyapunovSpec
    from crnstab.simulation.trajectory import Trajectory

logger = logging.getLogger(__name__)


def check_monotone(values: Sequence[float], tolerance: float) -> tuple[float, bool]:
    """Largest forward difference of a series and whether it stays within `tolerance`."""
    series = np.asarray(values, dtype=float)
    if series.size < 2:  # noqa: PLR2004
        return 0.0, True
    worst = float(np.max(np.diff(series)))
    return worst, worst <= tolerance


def dissipation_report(
        traj: Trajectory,
        spec: LyapunovSpec,
        sample_dt: float,
        settings: SolverSettings = DEFAULT_SETTINGS,
        name: str = "V"
) -> DissipationReport:
    """Sample a Lyapunov functional along a trajectory and certify it never increases.

    The tolerance on each forward difference is `dissipation_factor * (1 + |V_0|)`.
    """
    times = traj.sample_times(sample_dt)
    values = [eval_V(spec, traj.segment(t), settings) for t in times]
    tolerance = settings.dissipation_factor * (1 + abs(values[0]))
    worst, passed = check_monotone(values, tolerance)
    if not passed:
        logger.warning(f"{name} increased by {worst:.3g} (tolerance {tolerance:.3g})")
    return DissipationReport(
        name=name,
        times=times.tolist(),
        values=values,
        tolerance=tolerance,
        passed=passed,
        max_forward_difference=worst,
    )


def conservation_report(
        traj: Trajectory,
        functional: ConservedFunctional,
        sample_dt: float,
        settings: SolverSettings = DEFAULT_SETTINGS,
        name: str = "c_a"
) -> ConservationReport:
    """Sample a conserved functional along a trajectory and measure its relative drift."""
    times = traj.sample_times(sample_dt)
    values = [functional.evaluate(traj.segment(t), settings) for t in times]
    initial = values[0]
    drift = float(np.max(np.abs(np.array(values) - initial))) / max(abs(initial), 1e-300)
    passed = drift <= settings.drift_tolerance
    if not passed:
        logger.warning(
            f"{name} drifted by {drift:.3g} relative (tolerance {settings.drift_tolerance})"
        )
    return ConservationReport(
        name=name,
        times=times.tolist(),
        values=values,
        tolerance=settings.drift_tolerance,
        passed=passed,
        max_relative_drift=drift,
    )
