# ruff: noqa: G004

from __future__ import annotations

import logging
import math
from typing import TYPE_CHECKING, Callable, Protocol

import numpy as np

from crnstab.config import DEFAULT_SETTINGS, SolverSettings

if TYPE_CHECKING:
    from collections.abc import Sequence

logger = logging.getLogger(__name__)

_MIN_PIECE = 1e-14


class Segment(Protocol):
    """A state history ψ on [lower, 0]: a history function or a trajectory window."""

    @property
    def is_constant(self) -> bool: ...

    def __call__(self, s: float | np.ndarray) -> np.ndarray: ...

    def breakpoints(self, lower: float) -> np.ndarray: ...


def integrate(
        func: Callable[[np.ndarray], np.ndarray],
        lower: float,
        upper: float = 0.0,
        breakpoints: Sequence[float] | np.ndarray = (),
        settings: SolverSettings = DEFAULT_SETTINGS
) -> np.ndarray:
    """Composite Simpson integral of a vector-valued integrand over [lower, upper].

    Panels never straddle a breakpoint. The panel count per piece is doubled until two
    successive estimates agree to `settings.quadrature_tolerance` or the panel cap is hit.

    Args:
        func: Maps an array of m times to an (m, k) array of integrand values.
        lower: Lower limit.
        upper: Upper limit, greater than `lower`.
        breakpoints: Points where the integrand may lose smoothness.
        settings: Panel counts and tolerance.

    Returns:
        The k integrals.
    """
    if upper <= lower:
        msg = f"Empty integration interval [{lower}, {upper}]"
        raise ValueError(msg)
    inner = np.asarray(breakpoints, dtype=float)
    inner = inner[(inner > lower + _MIN_PIECE) & (inner < upper - _MIN_PIECE)]
    edges = np.unique(np.concatenate(([lower], inner, [upper])))

    pieces = len(edges) - 1
    panels = max(1, math.ceil(settings.quadrature_panels / pieces))
    max_panels = panels * max(1, settings.quadrature_max_panels // settings.quadrature_panels)

    previous = _simpson(func, edges, panels)
    while panels < max_panels:
        panels *= 2
        current = _simpson(func, edges, panels)
        scale = max(1.0, float(np.max(np.abs(current), initial=0.0)))
        if np.max(np.abs(current - previous), initial=0.0) <= settings.quadrature_tolerance * scale:
            return current
        previous = current
    logger.debug(f"Simpson stopped at the panel cap on [{lower}, {upper}]")
    return previous


def _simpson(
        func: Callable[[np.ndarray], np.ndarray],
        edges: np.ndarray,
        panels: int
) -> np.ndarray:
    widths = np.diff(edges)
    nodes = np.arange(2 * panels + 1)
    points = edges[:-1, None] + widths[:, None] * nodes[None, :] / (2 * panels)
    pattern = np.ones(2 * panels + 1)
    pattern[1:-1:2] = 4.0
    pattern[2:-1:2] = 2.0
    weights = widths[:, None] / (6 * panels) * pattern[None, :]
    values = np.asarray(func(points.ravel()), dtype=float)
    return weights.ravel() @ values.reshape(points.size, -1)
