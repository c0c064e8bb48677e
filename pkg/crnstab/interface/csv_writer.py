from __future__ import annotations

import csv
import os
import tempfile
from pathlib import Path
from typing import TYPE_CHECKING, Callable, TextIO

if TYPE_CHECKING:
    from collections.abc import Mapping, Sequence

    from crnstab.simulation.trajectory import Trajectory


def _number(value: float) -> str:
    return repr(float(value))


def write_trajectory_csv(
        traj: Trajectory,
        out: TextIO,
        sample_dt: float,
        extra_columns: Mapping[str, Sequence[float]] | None = None
) -> None:
    """Write `t,x_<species>...[,extra...]`, one row per sample time.

    Extra columns must hold one value per sample time of `traj.sample_times(sample_dt)`.
    """
    times = traj.sample_times(sample_dt)
    states = traj.lookup(times)
    extra_columns = dict(extra_columns or {})
    for name, values in extra_columns.items():
        if len(values) != len(times):
            msg = f"Column {name} has {len(values)} values for {len(times)} samples"
            raise ValueError(msg)

    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["t", *(f"x_{s}" for s in traj.species), *extra_columns])
    for k, t in enumerate(times):
        writer.writerow([
            _number(t),
            *(_number(v) for v in states[k]),
            *(_number(values[k]) for values in extra_columns.values()),
        ])


def write_atomically(path: Path, write: Callable[[TextIO], None]) -> None:
    """Write a text file through a temporary sibling and `os.replace`."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as handle:
            write(handle)
        Path(tmp_name).replace(path)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise
