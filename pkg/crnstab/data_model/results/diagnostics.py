from __future__ import annotations

from pydantic import BaseModel, ConfigDict


class SeriesReport(BaseModel):
    """A sampled scalar series along a trajectory plus its pass/fail verdict."""
    model_config = ConfigDict(frozen=True)

    name: str
    times: list[float]
    values: list[float]
    tolerance: float
    passed: bool


class DissipationReport(SeriesReport):
    """Lyapunov functional samples; passes when no forward difference exceeds the tolerance."""
    max_forward_difference: float


class ConservationReport(SeriesReport):
    """Conserved functional samples; passes when the relative drift stays within tolerance."""
    max_relative_drift: float
