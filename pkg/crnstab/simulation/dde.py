# ruff: noqa: G004

from __future__ import annotations

import logging
import math
from fractions import Fraction
from typing import TYPE_CHECKING

import numpy as np

from crnstab.config import DEFAULT_SETTINGS, SolverSettings
from crnstab.conjugacy.field import delayed_field
from crnstab.data_model.types import to_fraction
from crnstab.exceptions import PositivityLostError, SimulationError, StepLimitError
from crnstab.simulation.trajectory import Trajectory

if TYPE_CHECKING:
    from crnstab.conjugacy.field import DelayedMonomialField, FieldBlock
    from crnstab.data_model.network import HistoryFunction, NetworkModel

logger = logging.getLogger(__name__)

# Aligning to t_end is abandoned when it would shrink the step by more than this factor.
_MAX_ALIGNMENT_SHRINK = 8
_DENOMINATOR_LIMIT = 10**9


def fraction_gcd(values: list[Fraction]) -> Fraction:
    """Largest rational g such that every value is an integer multiple of g."""
    denominator = math.lcm(*(v.denominator for v in values))
    numerators = [v.numerator * (denominator // v.denominator) for v in values]
    return Fraction(math.gcd(*numerators), denominator)


def aligned_step(
        delays: list[Fraction],
        t_end: Fraction,
        step: float,
        settings: SolverSettings = DEFAULT_SETTINGS
) -> tuple[Fraction, int]:
    """Grid spacing h ≤ step dividing every positive delay, and the number of steps.

    h also divides t_end when that costs at most a small refinement; otherwise the last
    grid point lands at the first multiple of h past t_end.

    Raises:
        ValueError: if the step is not positive.
        StepLimitError: if the grid, history included, would exceed `settings.max_steps`.
    """
    if step <= 0:
        msg = f"Step must be positive, got {step}"
        raise ValueError(msg)
    requested = Fraction(step).limit_denominator(_DENOMINATOR_LIMIT)
    positive = sorted(d for d in delays if d > 0)

    def spacing(base: Fraction) -> Fraction:
        parts = math.ceil(base / requested)
        if positive:
            parts = max(parts, math.ceil(settings.min_steps_per_delay * base / positive[0]))
        return base / parts

    if not positive:
        h = spacing(t_end)
    else:
        h = spacing(fraction_gcd(positive))
        with_end = spacing(fraction_gcd([*positive, t_end]))
        if with_end * _MAX_ALIGNMENT_SHRINK >= h:
            h = with_end
    steps = math.ceil(t_end / h)
    history_steps = math.ceil(positive[-1] / h) if positive else 0
    if steps + history_steps > settings.max_steps:
        msg = (
            f"Aligning the grid with delays {[str(d) for d in positive]} needs a step of "
            f"{float(h):.3g} and {steps + history_steps} steps, more than max_steps = "
            f"{settings.max_steps}; use delays with a coarser common divisor or raise max_steps"
        )
        raise StepLimitError(msg)
    if h < requested:
        logger.info(f"Step reduced from {step} to {float(h)} to align with the delays")
    return h, steps


def simulate(
        net: NetworkModel,
        history: HistoryFunction,
        t_end: float | Fraction,
        step: float | None = None,
        settings: SolverSettings = DEFAULT_SETTINGS
) -> Trajectory:
    """Integrate the delayed mass-action system by the method of steps.

    Classical RK4 on a grid aligned with the delays. Delayed stage values at t + c·h - τ
    (c ∈ {0, 1/2, 1}) are read from the history or from the cubic Hermite interpolant of
    completed steps; undelayed terms use the stage state.

    Args:
        net: The network.
        history: Initial data, non-negative on [-τ_max, 0] and positive at 0.
        t_end: Final time (0 gives a single-point trajectory).
        step: Requested step, shrunk to align with the delays. Defaults to the settings.
        settings: Numerical settings.

    Raises:
        ValueError: if the step or horizon is invalid or the history does not fit the network.
        StepLimitError: if aligning the grid with the delays needs too many steps.
        PositivityLostError: if a state component reaches zero or below.
        SimulationError: if the vector field overflows.
    """
    step = settings.default_step if step is None else step
    horizon = to_fraction(t_end)
    if horizon < 0:
        msg = f"t_end must be non-negative, got {t_end}"
        raise ValueError(msg)
    if history.dimension != net.n_species:
        msg = f"History has {history.dimension} components, network has {net.n_species} species"
        raise ValueError(msg)
    tau_max = net.max_delay
    history.validate_on(float(tau_max))

    x0 = np.asarray(history(0.0), dtype=float)
    field = delayed_field(net)
    if horizon == 0:
        h = Fraction(step).limit_denominator(_DENOMINATOR_LIMIT)
        derivative = _undelayed_history_rate(field, history, x0)
        return Trajectory(
            net.species, np.zeros(1), x0[None, :], derivative[None, :], history, tau_max, h
        )

    h, steps = aligned_step(list(net.delays), horizon, step, settings)
    logger.debug(f"Simulating {steps} steps of {float(h)} on [0, {float(steps * h)}]")
    states, derivatives = _MethodOfSteps(field, history, h, tau_max, steps).run()
    grid = np.linspace(0.0, float(steps * h), steps + 1)
    return Trajectory(
        net.species, grid, states, derivatives, history, tau_max, h, horizon=float(horizon)
    )


def _undelayed_history_rate(
        field: DelayedMonomialField,
        history: HistoryFunction,
        x0: np.ndarray
) -> np.ndarray:
    delayed = {delay: np.asarray(history(-float(delay))) for delay in field.delays if delay > 0}
    return field.evaluate(x0, delayed)


class _MethodOfSteps:
    """RK4 over a half-step lattice.

    Slot j of the lattice holds the state at time (j - 2 M) h / 2, where M = τ_max / h.
    History slots are filled up front; each completed step fills its midpoint (Hermite value)
    and its endpoint. For every delayed block the contribution C · x^Y is cached per slot,
    so a delayed stage value is a single array read.
    """

    def __init__(
            self,
            field: DelayedMonomialField,
            history: HistoryFunction,
            h: Fraction,
            tau_max: Fraction,
            steps: int
    ) -> None:
        self.h = float(h)
        self.steps = steps
        self.offset = int(2 * tau_max / h)
        size = self.offset + 2 * steps + 1
        n = len(field.species)

        compiled = field.compile()
        self.undelayed = compiled.block_for(Fraction(0))
        self.blocks = [block for block in compiled.blocks if block.delay > 0]
        self.shifts = [int(2 * block.delay / h) for block in self.blocks]

        self.lattice = np.zeros((size, n))
        times = (np.arange(self.offset + 1) - self.offset) * (self.h / 2)
        self.lattice[: self.offset + 1] = history(times).reshape(-1, n)
        self.cache = []
        for block in self.blocks:
            cache = np.zeros((size, n))
            cache[: self.offset + 1] = self._contribution(block, self.lattice[: self.offset + 1])
            self.cache.append(cache)

    @staticmethod
    def _contribution(block: FieldBlock, states: np.ndarray) -> np.ndarray:
        mono = np.prod(states[:, None, :] ** block.exponents[None, :, :], axis=2)
        return mono @ block.coefficients.T

    def _rate(self, x: np.ndarray, slot: int) -> np.ndarray:
        out = np.zeros_like(x)
        if self.undelayed is not None:
            out += self.undelayed.coefficients @ np.prod(x ** self.undelayed.exponents, axis=1)
        for cache, shift in zip(self.cache, self.shifts, strict=True):
            out += cache[slot - shift]
        return out

    def _store(self, slot: int, x: np.ndarray) -> None:
        self.lattice[slot] = x
        for block, cache in zip(self.blocks, self.cache, strict=True):
            cache[slot] = self._contribution(block, x[None, :])[0]

    def run(self) -> tuple[np.ndarray, np.ndarray]:
        h = self.h
        states = np.empty((self.steps + 1, self.lattice.shape[1]))
        derivatives = np.empty_like(states)

        slot = self.offset
        x = self.lattice[slot].copy()
        d = self._rate(x, slot)
        states[0], derivatives[0] = x, d
        with np.errstate(over="ignore", invalid="ignore"):
            for k in range(self.steps):
                k1 = d
                k2 = self._rate(x + 0.5 * h * k1, slot + 1)
                k3 = self._rate(x + 0.5 * h * k2, slot + 1)
                k4 = self._rate(x + h * k3, slot + 2)
                x_next = x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
                time = (k + 1) * h
                if not np.all(np.isfinite(x_next)):
                    msg = f"Vector field overflowed at t={time:g}"
                    raise SimulationError(msg)
                if np.any(x_next <= 0):
                    msg = (f"State lost positivity at t={time:g}: {x_next.tolist()}; "
                           f"try a smaller step")
                    raise PositivityLostError(msg, time, x_next.tolist())

                # The endpoint rate only reads delayed slots, which are already complete.
                d_next = self._rate(x_next, slot + 2)
                self._store(slot + 1, 0.5 * (x + x_next) + h * (d - d_next) / 8)
                self._store(slot + 2, x_next)
                states[k + 1], derivatives[k + 1] = x_next, d_next
                x, d, slot = x_next, d_next, slot + 2
        return states, derivatives
