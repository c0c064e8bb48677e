from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
from scipy.special import xlogy

if TYPE_CHECKING:
    from collections.abc import Mapping
    from fractions import Fraction

    from crnstab.data_model.network import NetworkModel
    from crnstab.data_model.results import Lcdcb1Result


def dissipation_split(
        candidate: NetworkModel,
        reference: NetworkModel,
        result: Lcdcb1Result,
        xbar: np.ndarray,
        x_now: np.ndarray,
        x_delayed: Mapping[Fraction, np.ndarray]
) -> tuple[float, float]:
    """Split the derivative of V_D along the candidate into (A, B).

    With p_i = x(t)^{y_i}, d_i = x(t-τ_i)^{y_i}, r_i = x̄^{y_i} and L = ln(x(t)/x̄):

        A = Σ κ̃_i [d_i (L·(y_i + ṽ_i) - ln(d_i / r_i)) + d_i - p_i]
        B = Σ (κ_i - κ̃_i) [d_i ln(p_i / d_i) + d_i - p_i]

    A is the reference's dissipation on the candidate's state and is ≤ 0 when x̄ is complex
    balanced for the reference. B is ≤ 0 whenever every b_i ≤ 1. A + B equals the
    candidate's V_D derivative.
    """
    if reference.species != candidate.species:
        reference = reference.reordered(candidate.species)
    xbar = np.asarray(xbar, dtype=float)
    x_now = np.asarray(x_now, dtype=float)
    log_ratio = np.log(x_now / xbar)

    part_a = 0.0
    part_b = 0.0
    for reaction, j in zip(candidate.reactions, result.pairing, strict=True):
        paired = reference.reactions[j]
        y = reaction.reactant.as_array()
        state = x_now if reaction.delay == 0 else np.asarray(x_delayed[reaction.delay])
        p = float(np.prod(x_now ** y))
        d = float(np.prod(state ** y))
        r = float(np.prod(xbar ** y))
        target = float(log_ratio @ paired.product.as_array())
        part_a += float(paired.rate) * (d * (target + np.log(r)) - xlogy(d, d) + d - p)
        surplus = float(reaction.rate - paired.rate)
        part_b += surplus * (xlogy(d, p) - xlogy(d, d) + d - p)
    return part_a, part_b
