from __future__ import annotations

from typing import TYPE_CHECKING, Callable, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from crnstab.config import DEFAULT_SETTINGS, SolverSettings
from crnstab.data_model.types import Rational  # noqa: TCH001
from crnstab.diagnostics.quadrature import integrate
from crnstab.exceptions import FunctionalDomainError

if TYPE_CHECKING:
    from collections.abc import Sequence
    from fractions import Fraction

    from crnstab.data_model.network import NetworkModel
    from crnstab.data_model.results import DiagonalMap
    from crnstab.diagnostics.quadrature import Segment

Integrand = Callable[[np.ndarray, np.ndarray], np.ndarray]


def monomials(states: np.ndarray, exponents: np.ndarray) -> np.ndarray:
    """x^y for every state row and exponent row: (m, n) x (k, n) -> (m, k)."""
    return np.prod(states[:, None, :] ** exponents[None, :, :], axis=2)


def delay_integrals(
        psi: Segment,
        exponents: np.ndarray,
        delays: Sequence[Fraction],
        integrand: Integrand,
        settings: SolverSettings = DEFAULT_SETTINGS
) -> np.ndarray:
    """∫_{-τ_i}^0 integrand(ψ(s), y_i) ds for every reaction i.

    Reactions sharing a delay are integrated together. Constant histories use the closed
    form τ_i · integrand(ψ(0), y_i).
    """
    out = np.zeros(len(delays))
    if psi.is_constant:
        values = integrand(psi(np.zeros(1)), exponents)[0]
        return np.array([float(d) for d in delays]) * values

    for delay in sorted(set(delays)):
        if delay == 0:
            continue
        rows = [i for i, d in enumerate(delays) if d == delay]
        lower = -float(delay)

        def block(s: np.ndarray, rows: list[int] = rows) -> np.ndarray:
            states = psi(s)
            if np.any(states < 0):
                msg = "History segment takes negative values"
                raise FunctionalDomainError(msg)
            return integrand(states, exponents[rows])

        out[rows] = integrate(block, lower, 0.0, psi.breakpoints(lower), settings)
    return out


class ConservedFunctional(BaseModel):
    """A functional constant along delayed trajectories.

    value(ψ) = a·ψ(0) + Σ_i rate_i · weight_i · ∫_{-τ_i}^0 ψ(s)^{y_i} ds.

    With `mode="c_a"` the rates are the network's κ_i and weight_i = a·y_i. With `mode="h_a"`
    the functional belongs to the linear-conjugate image of a DCB under Q: rates become
    κ̃_i Π_j q_j^{-y_ji} and weight_i = a·(Q y_i).
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    a: tuple[float, ...]
    rates: tuple[float, ...]
    delays: tuple[Rational, ...]
    reactants: tuple[tuple[float, ...], ...]
    weights: tuple[float, ...]
    mode: Literal["c_a", "h_a"] = "c_a"

    @model_validator(mode="after")
    def validate_functional_fields(self) -> ConservedFunctional:
        r = len(self.rates)
        if not len(self.delays) == len(self.reactants) == len(self.weights) == r:
            msg = "Rates, delays, reactants and weights must have one entry per reaction"
            raise ValueError(msg)
        if any(len(y) != len(self.a) for y in self.reactants):
            msg = f"Reactant complexes must have {len(self.a)} entries"
            raise ValueError(msg)
        return self

    @classmethod
    def for_network(
            cls,
            net: NetworkModel,
            a: Sequence[float],
            settings: SolverSettings = DEFAULT_SETTINGS
    ) -> ConservedFunctional:
        """c_a for a vector a orthogonal to every reaction vector of `net`."""
        a_arr = _check_vector(a, net.n_species)
        _check_orthogonal(a_arr, net.reaction_matrix(), settings, "S")
        reactants = net.reactant_matrix()
        return cls(
            a=tuple(a_arr.tolist()),
            rates=tuple(net.rates.tolist()),
            delays=net.delays,
            reactants=tuple(tuple(y) for y in reactants.tolist()),
            weights=tuple((reactants @ a_arr).tolist()),
            mode="c_a",
        )

    @classmethod
    def for_conjugate(
            cls,
            dcb: NetworkModel,
            q: DiagonalMap,
            a: Sequence[float],
            settings: SolverSettings = DEFAULT_SETTINGS
    ) -> ConservedFunctional:
        """h_a of the system x = Q x̃ for a ∈ Q^{-1} S̃^⊥."""
        a_arr = _check_vector(a, dcb.n_species)
        q_arr = q.as_array()
        _check_orthogonal(q_arr * a_arr, dcb.reaction_matrix(), settings, "Q S̃")
        reactants = dcb.reactant_matrix()
        rates = [
            float(reaction.rate * q.monomial_factor(reaction.reactant.coefficients))
            for reaction in dcb.reactions
        ]
        return cls(
            a=tuple(a_arr.tolist()),
            rates=tuple(rates),
            delays=dcb.delays,
            reactants=tuple(tuple(y) for y in reactants.tolist()),
            weights=tuple((reactants @ (q_arr * a_arr)).tolist()),
            mode="h_a",
        )

    def evaluate(self, psi: Segment, settings: SolverSettings = DEFAULT_SETTINGS) -> float:
        x0 = np.asarray(psi(0.0), dtype=float)
        if x0.shape != (len(self.a),):
            msg = f"History has {x0.size} components, functional expects {len(self.a)}"
            raise FunctionalDomainError(msg)
        if np.any(x0 <= 0):
            msg = f"ψ(0) must be strictly positive, got {x0.tolist()}"
            raise FunctionalDomainError(msg)
        integrals = delay_integrals(
            psi, np.array(self.reactants), self.delays, monomials, settings
        )
        return float(
            np.dot(self.a, x0) + np.sum(np.array(self.rates) * np.array(self.weights) * integrals)
        )


def eval_c_a(
        net: NetworkModel,
        a: Sequence[float],
        psi: Segment,
        settings: SolverSettings = DEFAULT_SETTINGS
) -> float:
    return ConservedFunctional.for_network(net, a, settings).evaluate(psi, settings)


def eval_h_a(
        dcb: NetworkModel,
        q: DiagonalMap,
        a: Sequence[float],
        psi: Segment,
        settings: SolverSettings = DEFAULT_SETTINGS
) -> float:
    return ConservedFunctional.for_conjugate(dcb, q, a, settings).evaluate(psi, settings)


def h_a_basis(
        dcb: NetworkModel,
        q: DiagonalMap,
        settings: SolverSettings = DEFAULT_SETTINGS
) -> list[np.ndarray]:
    """Q^{-1} applied to the DCB's S̃^⊥ basis; empty when S̃^⊥ = {0}."""
    from crnstab.analysis.structure import analyze_structure

    q_arr = q.as_array()
    return [row / q_arr for row in analyze_structure(dcb, settings).s_perp_matrix()]


def _check_vector(a: Sequence[float], n: int) -> np.ndarray:
    a_arr = np.asarray(a, dtype=float)
    if a_arr.shape != (n,):
        msg = f"Expected a vector of {n} entries, got {list(a)}"
        raise FunctionalDomainError(msg)
    return a_arr


def _check_orthogonal(
        a: np.ndarray,
        reaction_matrix: np.ndarray,
        settings: SolverSettings,
        subspace: str
) -> None:
    products = np.abs(a @ reaction_matrix)
    scale = max(1.0, float(np.linalg.norm(a)))
    if np.any(products > settings.orthogonality_tolerance * scale):
        msg = f"Vector {a.tolist()} is not orthogonal to {subspace} (|a·v| = {products.max():.3g})"
        raise FunctionalDomainError(msg)
