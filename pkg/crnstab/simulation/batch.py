# ruff: noqa: G004

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import yaml
from pydantic import BaseModel, ConfigDict, Field, model_validator

from crnstab.config import DEFAULT_SETTINGS, SolverSettings
from crnstab.data_model.types import Rational  # noqa: TCH001
from crnstab.interface.csv_writer import write_atomically, write_trajectory_csv
from crnstab.parser import load_network, parse_history
from crnstab.simulation.dde import simulate

logger = logging.getLogger(__name__)


class SimulationScenario(BaseModel):
    """One simulation run of a batch file. Unset fields fall back to the batch defaults."""
    model_config = ConfigDict(frozen=True)

    name: str
    history: str
    output: Path
    network: Path | None = None
    tau: list[Rational] | None = None
    t_end: float | None = Field(default=None, ge=0)
    step: float | None = Field(default=None, gt=0)
    sample_every: float | None = Field(default=None, gt=0)


class BatchFile(BaseModel):
    model_config = ConfigDict(frozen=True)

    network: Path | None = None
    t_end: float = Field(default=100.0, ge=0)
    step: float | None = Field(default=None, gt=0)
    sample_every: float | None = Field(default=None, gt=0)
    scenarios: list[SimulationScenario]

    @model_validator(mode="after")
    def validate_batch_fields(self) -> BatchFile:
        if not self.scenarios:
            msg = "Batch file lists no scenarios"
            raise ValueError(msg)
        names = [s.name for s in self.scenarios]
        if len(set(names)) != len(names):
            msg = f"Scenario names must be unique, got {names}"
            raise ValueError(msg)
        for scenario in self.scenarios:
            if scenario.network is None and self.network is None:
                msg = f"Scenario {scenario.name} has no network"
                raise ValueError(msg)
        return self


def load_batch(path: Path | str) -> BatchFile:
    """Read a batch YAML file; relative paths inside it resolve against its directory."""
    batch_path = Path(path)
    if not batch_path.exists():
        raise FileNotFoundError(path)
    with batch_path.open() as f:
        raw = yaml.safe_load(f) or {}
    batch = BatchFile.model_validate(raw)
    base = batch_path.parent

    def resolve(p: Path | None) -> Path | None:
        if p is None:
            return None
        return p if p.is_absolute() else base / p

    return batch.model_copy(update={
        "network": resolve(batch.network),
        "scenarios": [
            s.model_copy(update={
                "network": resolve(s.network),
                "output": resolve(s.output),
            })
            for s in batch.scenarios
        ],
    })


def run_scenario(
        batch: BatchFile,
        scenario: SimulationScenario,
        settings: SolverSettings = DEFAULT_SETTINGS
) -> Path:
    net = load_network(scenario.network or batch.network)
    if scenario.tau is not None:
        net = net.with_delays(scenario.tau)
    history = parse_history(scenario.history, net.n_species)
    t_end = scenario.t_end if scenario.t_end is not None else batch.t_end
    step = scenario.step or batch.step or settings.default_step
    sample_dt = scenario.sample_every or batch.sample_every or settings.sample_every

    logger.info(f"Running scenario {scenario.name}")
    traj = simulate(net, history, t_end, step, settings)
    write_atomically(
        scenario.output, lambda handle: write_trajectory_csv(traj, handle, sample_dt)
    )
    return scenario.output


def run_batch(
        batch: BatchFile,
        settings: SolverSettings = DEFAULT_SETTINGS,
        workers: int | None = None
) -> dict[str, Path]:
    """Run every scenario concurrently; returns the written CSV path per scenario name."""
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = {
            scenario.name: pool.submit(run_scenario, batch, scenario, settings)
            for scenario in batch.scenarios
        }
        return {name: future.result() for name, future in futures.items()}
