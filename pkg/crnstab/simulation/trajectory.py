from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from fractions import Fraction

    from crnstab.data_model.network import HistoryFunction

_EDGE_SLACK = 1e-12


class Trajectory:
    """Solution of a delayed system on [-τ_max, t_end].

    Grid states and derivatives are stored for t ≥ 0; lookups between grid points use the
    cubic Hermite interpolant of the enclosing step and lookups before 0 use the history.
    Arrays are read-only, so a trajectory can be shared between threads.

    Args:
        species: Species names, in state order.
        grid: Increasing grid times starting at 0.
        states: State at every grid time, shape (N + 1, n).
        derivatives: Vector field at every grid time, shape (N + 1, n).
        history: Initial data on [-tau_max, 0].
        tau_max: Largest delay of the simulated network.
        step: Grid spacing actually used.
        horizon: Final time that was asked for. The grid may end past it; samples stop at it.
            Defaults to the last grid time.
    """

    def __init__(
            self,
            species: tuple[str, ...],
            grid: np.ndarray,
            states: np.ndarray,
            derivatives: np.ndarray,
            history: HistoryFunction,
            tau_max: Fraction,
            step: Fraction,
            horizon: float | None = None
    ) -> None:
        self.species = species
        self.grid = _frozen(grid)
        self.states = _frozen(states)
        self.derivatives = _frozen(derivatives)
        self.history = history
        self.tau_max = tau_max
        self.step = step
        self.horizon = float(self.grid[-1]) if horizon is None else float(horizon)

    @property
    def t0(self) -> float:
        return 0.0

    @property
    def t_end(self) -> float:
        return float(self.grid[-1])

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]

    def __len__(self) -> int:
        return len(self.grid)

    def lookup(self, t: float | np.ndarray) -> np.ndarray:
        """State at time(s) t: shape (n,) for a scalar, (m, n) for an array."""
        t_arr = np.asarray(t, dtype=float)
        flat = t_arr.reshape(-1)
        lower, upper = -float(self.tau_max), self.t_end
        slack = _EDGE_SLACK * max(1.0, abs(lower), upper)
        if flat.size and (flat.min() < lower - slack or flat.max() > upper + slack):
            msg = f"Lookup outside [{lower}, {upper}]: [{flat.min()}, {flat.max()}]"
            raise ValueError(msg)

        out = np.empty((flat.size, len(self.species)))
        past = flat < 0
        if np.any(past):
            out[past] = self.history(flat[past]).reshape(-1, len(self.species))
        if np.any(~past):
            out[~past] = self._hermite(np.minimum(flat[~past], upper))
        return out.reshape(*t_arr.shape, len(self.species))

    def _hermite(self, t: np.ndarray) -> np.ndarray:
        if len(self.grid) == 1:
            return np.broadcast_to(self.states[0], (t.size, len(self.species))).copy()
        k = np.clip(np.searchsorted(self.grid, t, side="right") - 1, 0, len(self.grid) - 2)
        width = self.grid[k + 1] - self.grid[k]
        theta = ((t - self.grid[k]) / width)[:, None]
        h00 = 2 * theta**3 - 3 * theta**2 + 1
        h10 = theta**3 - 2 * theta**2 + theta
        h01 = -2 * theta**3 + 3 * theta**2
        h11 = theta**3 - theta**2
        w = width[:, None]
        return (h00 * self.states[k] + h10 * w * self.derivatives[k]
                + h01 * self.states[k + 1] + h11 * w * self.derivatives[k + 1])

    def segment(self, t: float) -> TrajectorySegment:
        """The history segment x_t(s) = x(t + s), s ∈ [-τ_max, 0]."""
        return TrajectorySegment(self, t)

    def sample_times(self, sample_dt: float) -> np.ndarray:
        """0, dt, 2dt, ... up to the requested horizon, with the horizon appended when missed."""
        if sample_dt <= 0:
            msg = f"Sample spacing must be positive, got {sample_dt}"
            raise ValueError(msg)
        end = self.horizon
        count = int(np.floor(end / sample_dt + 1e-9))
        times = np.arange(count + 1) * sample_dt
        if end - times[-1] > _EDGE_SLACK * max(1.0, end):
            times = np.append(times, end)
        return np.minimum(times, end)


class TrajectorySegment:
    """Window of a trajectory ending at time t, seen as a history on [-τ_max, 0]."""

    is_constant = False

    def __init__(self, trajectory: Trajectory, t: float) -> None:
        self.trajectory = trajectory
        self.t = float(t)

    def __call__(self, s: float | np.ndarray) -> np.ndarray:
        return self.trajectory.lookup(self.t + np.asarray(s, dtype=float))

    def breakpoints(self, lower: float) -> np.ndarray:
        """Grid times inside (t + lower, t), shifted to segment coordinates."""
        grid = self.trajectory.grid
        inside = grid[(grid > self.t + lower) & (grid < self.t)]
        return inside - self.t


def _frozen(array: np.ndarray) -> np.ndarray:
    out = np.array(array, dtype=float)
    out.setflags(write=False)
    return out
