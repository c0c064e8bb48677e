from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import yaml
from pydantic import BaseModel, ConfigDict, Field


class SolverSettings(BaseModel):
    """Numerical defaults shared by the solvers and the CLI.

    Every field can be overridden from a YAML file through `load_settings`.
    """
    model_config = ConfigDict(frozen=True)

    default_step: float = Field(default=1e-3, gt=0)
    min_steps_per_delay: int = Field(default=10, ge=1)
    max_steps: int = Field(default=10_000_000, ge=1)
    sample_every: float = Field(default=0.1, gt=0)

    quadrature_panels: int = Field(default=64, ge=2)
    quadrature_max_panels: int = Field(default=1024, ge=2)
    quadrature_tolerance: float = Field(default=1e-10, gt=0)

    rank_tolerance: float = Field(default=1e-10, gt=0)
    coefficient_tolerance: float = Field(default=1e-12, gt=0)
    orthogonality_tolerance: float = Field(default=1e-10, gt=0)

    newton_tolerance: float = Field(default=1e-12, gt=0)
    newton_max_iterations: int = Field(default=50, ge=1)
    equilibrium_tolerance: float = Field(default=1e-10, gt=0)
    class_tolerance: float = Field(default=1e-8, gt=0)
    root_max_iterations: int = Field(default=200, ge=1)

    drift_tolerance: float = Field(default=1e-6, gt=0)
    dissipation_factor: float = Field(default=1e-7, gt=0)

    @property
    def step_fraction(self) -> Fraction:
        return Fraction(self.default_step).limit_denominator(10**9)


DEFAULT_SETTINGS = SolverSettings()


def load_settings(config: Path | str | None = None) -> SolverSettings:
    """Load solver settings from a YAML file.

    Args:
        config: Path to a YAML mapping of `SolverSettings` fields. `None` returns the defaults.

    Returns:
        Validated settings.

    Raises:
        FileNotFoundError: if the config path does not exist.
    """
    if config is None:
        return DEFAULT_SETTINGS

    config_path = Path(config)
    if not config_path.exists():
        raise FileNotFoundError(config)
    with config_path.open() as f:
        raw = yaml.safe_load(f) or {}
    return SolverSettings.model_validate(raw)
