# ruff: noqa: G004

from __future__ import annotations

import logging
from fractions import Fraction
from typing import TYPE_CHECKING, NamedTuple

import numpy as np

from crnstab.config import DEFAULT_SETTINGS, SolverSettings
from crnstab.data_model.results import ConjugacyReport, DiagonalMap
from crnstab.data_model.types import format_fraction

if TYPE_CHECKING:
    from collections.abc import Iterable, Iterator, Mapping

    from crnstab.data_model.network import ComplexModel, NetworkModel

logger = logging.getLogger(__name__)

FieldKey = tuple["ComplexModel", Fraction]
Coefficients = tuple[Fraction, ...]


class DelayedMonomialField:
    """Canonical right-hand side of the delayed mass-action system.

    The field is Σ over keys (y, τ) of c_{y,τ} · x(t - τ)^y, with exact rational coefficient
    vectors. Duplicate keys are merged by addition and all-zero vectors are dropped, so two
    fields describe the same dynamics iff their term maps are equal.
    """

    def __init__(
            self,
            species: tuple[str, ...],
            terms: Iterable[tuple[FieldKey, Coefficients]]
    ) -> None:
        self.species = species
        merged: dict[FieldKey, list[Fraction]] = {}
        for key, coefficients in terms:
            if len(coefficients) != len(species):
                msg = f"Coefficient vector of length {len(coefficients)} for {len(species)} species"
                raise ValueError(msg)
            acc = merged.setdefault(key, [Fraction(0)] * len(species))
            for j, c in enumerate(coefficients):
                acc[j] += c
        self._terms: dict[FieldKey, Coefficients] = {
            key: tuple(acc) for key, acc in merged.items() if any(c != 0 for c in acc)
        }

    @property
    def terms(self) -> Mapping[FieldKey, Coefficients]:
        return self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[FieldKey]:
        return iter(self._terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DelayedMonomialField):
            return NotImplemented
        return self.species == other.species and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.species, frozenset(self._terms.items())))

    def coefficient(self, key: FieldKey) -> np.ndarray:
        """Float coefficient vector of a key (zeros when absent)."""
        values = self._terms.get(key)
        if values is None:
            return np.zeros(len(self.species))
        return np.array([float(c) for c in values])

    @property
    def delays(self) -> list[Fraction]:
        return sorted({delay for _, delay in self._terms})

    def evaluate(self, x_now: np.ndarray, delayed: Mapping[Fraction, np.ndarray]) -> np.ndarray:
        """ẋ(t) given x(t) and x(t - τ) for every positive delay τ of the field."""
        out = np.zeros(len(self.species))
        for (exponents, delay), _ in self._terms.items():
            state = x_now if delay == 0 else delayed[delay]
            out += self.coefficient((exponents, delay)) * exponents.monomial(state)
        return out

    def compile(self) -> CompiledField:
        """Dense numpy form used by the integrator."""
        blocks = []
        for delay in self.delays:
            keys = [key for key in self._terms if key[1] == delay]
            exponents = np.array([key[0].as_array() for key in keys])
            coefficients = np.array([self.coefficient(key) for key in keys]).T
            blocks.append(FieldBlock(delay, exponents, coefficients))
        return CompiledField(len(self.species), blocks)

    def undelayed(self) -> DelayedMonomialField:
        """The field obtained by setting every delay to zero."""
        return DelayedMonomialField(
            self.species, (((y, Fraction(0)), c) for (y, _), c in self._terms.items())
        )

    def describe(self) -> list[str]:
        from crnstab.parser.crn import format_complex

        return [
            f"{format_complex(y, self.species)} @ tau={format_fraction(delay)}: "
            f"({', '.join(format_fraction(c) for c in coefficients)})"
            for (y, delay), coefficients in sorted(
                self._terms.items(), key=lambda item: (item[0][1], item[0][0].coefficients)
            )
        ]


class FieldBlock(NamedTuple):
    delay: Fraction
    exponents: np.ndarray     # (m, n)
    coefficients: np.ndarray  # (n, m)


class CompiledField(NamedTuple):
    n_species: int
    blocks: list[FieldBlock]

    def block_for(self, delay: Fraction) -> FieldBlock | None:
        for block in self.blocks:
            if block.delay == delay:
                return block
        return None


def delayed_field(net: NetworkModel) -> DelayedMonomialField:
    """Field of ẋ = Σ κ_i [x(t-τ_i)^{y_i} y'_i - x(t)^{y_i} y_i]."""
    terms = []
    for reaction in net.reactions:
        terms.append((
            (reaction.reactant, reaction.delay),
            tuple(reaction.rate * c for c in reaction.product.coefficients),
        ))
        terms.append((
            (reaction.reactant, Fraction(0)),
            tuple(-reaction.rate * c for c in reaction.reactant.coefficients),
        ))
    return DelayedMonomialField(net.species, terms)


def transform_field(field: DelayedMonomialField, q: DiagonalMap) -> DelayedMonomialField:
    """Field of the linear-conjugate system x = Q x̃: each c becomes Π q_j^{-y_j} · Q c."""
    if len(q) != len(field.species):
        msg = f"Q has {len(q)} entries for {len(field.species)} species"
        raise ValueError(msg)
    terms = []
    for (exponents, delay), coefficients in field.terms.items():
        factor = q.monomial_factor(exponents.coefficients)
        terms.append((
            (exponents, delay),
            tuple(factor * q_j * c for q_j, c in zip(q.q, coefficients, strict=True)),
        ))
    return DelayedMonomialField(field.species, terms)


def compare_fields(
        a: DelayedMonomialField,
        b: DelayedMonomialField,
        tolerance: float
) -> tuple[list[str], float]:
    """Keys whose coefficient vectors differ by more than `tolerance`, and the largest gap."""
    from crnstab.parser.crn import format_complex

    mismatches = []
    max_difference = 0.0
    for key in sorted(set(a) | set(b), key=lambda k: (k[1], k[0].coefficients)):
        difference = float(np.max(np.abs(a.coefficient(key) - b.coefficient(key))))
        max_difference = max(max_difference, difference)
        if difference > tolerance:
            exponents, delay = key
            mismatches.append(
                f"{format_complex(exponents, a.species)} @ tau={format_fraction(delay)}: "
                f"{a.coefficient(key).tolist()} vs {b.coefficient(key).tolist()}"
            )
    return mismatches, max_difference


def check_linear_conjugacy(
        a: NetworkModel,
        b: NetworkModel,
        q: DiagonalMap,
        settings: SolverSettings = DEFAULT_SETTINGS
) -> ConjugacyReport:
    """Whether field(a) equals Q applied to field(b), term by term."""
    if a.n_species != b.n_species:
        return ConjugacyReport(
            conjugate=False,
            mismatches=[f"species count {a.n_species} vs {b.n_species}"],
        )
    if set(a.species) == set(b.species) and a.species != b.species:
        b = b.reordered(a.species)
    elif set(a.species) != set(b.species):
        logger.warning(f"Comparing species {a.species} and {b.species} positionally")
        b = b.model_copy(update={"species": a.species})

    target = transform_field(delayed_field(b), q)
    mismatches, max_difference = compare_fields(
        delayed_field(a), target, settings.coefficient_tolerance
    )
    return ConjugacyReport(
        conjugate=not mismatches,
        mismatches=mismatches,
        max_difference=max_difference,
    )


def undelayed_equivalence(a: NetworkModel, b: NetworkModel) -> bool:
    """Whether the two networks share their dynamics once every delay is zero."""
    if a.species != b.species:
        if set(a.species) != set(b.species):
            return False
        b = b.reordered(a.species)
    return delayed_field(a).undelayed() == delayed_field(b).undelayed()
