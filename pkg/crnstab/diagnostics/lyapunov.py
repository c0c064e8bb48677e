from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator
from scipy.special import xlogy

from crnstab.config import DEFAULT_SETTINGS, SolverSettings
from crnstab.conjugacy.field import delayed_field, transform_field
from crnstab.data_model.network import NetworkModel  # noqa: TCH001
from crnstab.data_model.results import DiagonalMap  # noqa: TCH001
from crnstab.diagnostics.functionals import delay_integrals, monomials
from crnstab.exceptions import FunctionalDomainError

if TYPE_CHECKING:
    from collections.abc import Mapping, Sequence
    from fractions import Fraction

    from crnstab.conjugacy.field import DelayedMonomialField
    from crnstab.diagnostics.quadrature import Segment


class LyapunovSpec(BaseModel):
    """Entropy-like Lyapunov-Krasovskii functional around a positive reference state.

    Without `q` this is V for `network` itself. With `q` it is V_L for the linear-conjugate
    image x = Q x̃ of the DCB `network`: the state sum is weighted by 1/q_j and the rates
    become κ̃_i Π_j q_j^{-y_ji}.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    network: NetworkModel
    reference: tuple[float, ...]
    q: DiagonalMap | None = None

    @model_validator(mode="after")
    def validate_spec_fields(self) -> LyapunovSpec:
        if len(self.reference) != self.network.n_species:
            msg = (f"Reference has {len(self.reference)} entries for "
                   f"{self.network.n_species} species")
            raise ValueError(msg)
        if any(v <= 0 for v in self.reference):
            msg = f"Reference state must be strictly positive, got {list(self.reference)}"
            raise ValueError(msg)
        if self.q is not None and len(self.q) != self.network.n_species:
            msg = f"Q has {len(self.q)} entries for {self.network.n_species} species"
            raise ValueError(msg)
        return self

    @classmethod
    def from_network(cls, net: NetworkModel, reference: Sequence[float]) -> LyapunovSpec:
        return cls(network=net, reference=tuple(float(v) for v in reference))

    @classmethod
    def for_conjugate(
            cls,
            dcb: NetworkModel,
            q: DiagonalMap,
            reference: Sequence[float]
    ) -> LyapunovSpec:
        return cls(network=dcb, reference=tuple(float(v) for v in reference), q=q)

    @property
    def xbar(self) -> np.ndarray:
        return np.array(self.reference)

    @property
    def state_weights(self) -> np.ndarray:
        if self.q is None:
            return np.ones(self.network.n_species)
        return 1 / self.q.as_array()

    @property
    def rates(self) -> np.ndarray:
        if self.q is None:
            return self.network.rates
        return np.array([
            float(r.rate * self.q.monomial_factor(r.reactant.coefficients))
            for r in self.network.reactions
        ])

    @property
    def delays(self) -> tuple[Fraction, ...]:
        return self.network.delays

    @property
    def reactants(self) -> np.ndarray:
        return self.network.reactant_matrix()

    def field(self) -> DelayedMonomialField:
        """The dynamics this functional is dissipated along."""
        field = delayed_field(self.network)
        return field if self.q is None else transform_field(field, self.q)


def entropy_term(z: np.ndarray, c: np.ndarray) -> np.ndarray:
    """z (ln z - ln c - 1) + c, with z ln z = 0 at z = 0."""
    return xlogy(z, z) - z * np.log(c) - z + c


def eval_V(  # noqa: N802
        spec: LyapunovSpec,
        psi: Segment,
        settings: SolverSettings = DEFAULT_SETTINGS
) -> float:
    """V(ψ), or V_L when the spec carries Q. Zero exactly when ψ is the reference constant."""
    x0 = np.asarray(psi(0.0), dtype=float)
    if np.any(x0 <= 0):
        msg = f"ψ(0) must be strictly positive, got {x0.tolist()}"
        raise FunctionalDomainError(msg)
    xbar = spec.xbar
    reactants = spec.reactants

    def integrand(states: np.ndarray, exponents: np.ndarray) -> np.ndarray:
        return entropy_term(monomials(states, exponents), monomials(xbar[None, :], exponents))

    integrals = delay_integrals(psi, reactants, spec.delays, integrand, settings)
    state_part = float(np.sum(spec.state_weights * entropy_term(x0, xbar)))
    return state_part + float(np.sum(spec.rates * integrals))


def lyapunov_derivative(
        spec: LyapunovSpec,
        x_now: np.ndarray,
        x_delayed: Mapping[Fraction, np.ndarray]
) -> float:
    """Time derivative of V along the delayed dynamics at one instant.

    Args:
        spec: The functional.
        x_now: State x(t).
        x_delayed: State x(t - τ) for every positive delay τ of the network.
    """
    x_now = np.asarray(x_now, dtype=float)
    xbar = spec.xbar
    velocity = spec.field().evaluate(x_now, x_delayed)
    state_part = float(np.sum(spec.state_weights * np.log(x_now / xbar) * velocity))

    delay_part = 0.0
    for rate, delay, y in zip(spec.rates, spec.delays, spec.reactants, strict=True):
        if delay == 0:
            continue
        c = np.prod(xbar ** y)
        now = np.prod(x_now ** y)
        then = np.prod(np.asarray(x_delayed[delay]) ** y)
        delay_part += rate * float(entropy_term(now, c) - entropy_term(then, c))
    return state_part + delay_part
