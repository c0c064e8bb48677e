# ruff: noqa: G004

from __future__ import annotations

import logging
from fractions import Fraction
from typing import TYPE_CHECKING

from crnstab.analysis.structure import analyze_structure
from crnstab.config import DEFAULT_SETTINGS, SolverSettings
from crnstab.data_model.network import NetworkModel, ReactionModel
from crnstab.data_model.results import Lcdcb1Result
from crnstab.exceptions import ReactionCountMismatchError, SpeciesMismatchError

if TYPE_CHECKING:
    from collections.abc import Sequence

logger = logging.getLogger(__name__)


def collinearity_factor(
        v: Sequence[Fraction],
        reference: Sequence[Fraction]
) -> Fraction | None:
    """The b > 0 with v = b · reference exactly, or None."""
    pivot = next((j for j, c in enumerate(reference) if c != 0), None)
    if pivot is None:
        return None
    factor = v[pivot] / reference[pivot]
    if factor <= 0 or any(a != factor * c for a, c in zip(v, reference, strict=True)):
        return None
    return factor


def classify_lcdcb1(
        candidate: NetworkModel,
        reference: NetworkModel,
        allow_b_greater_1: bool = False,  # noqa: FBT001, FBT002
        settings: SolverSettings = DEFAULT_SETTINGS
) -> Lcdcb1Result:
    """Check whether `candidate` shrinks the reaction vectors of the DCB `reference`.

    Reactions are paired by equal reactant complex and positively collinear reaction vector.
    Every pair must satisfy v_i = b_i ṽ_i with b_i = κ̃_i / κ_i ≤ 1.

    The reference is checked structurally. A weakly reversible deficiency-zero network is
    complex balanced for every choice of rates, so no equilibrium is solved for here; a
    reference failing the check is logged as a warning and classification goes on.

    Raises:
        SpeciesMismatchError: if the networks have different species.
        ReactionCountMismatchError: if the networks have different numbers of reactions.
    """
    if set(candidate.species) != set(reference.species):
        msg = f"Species differ: {list(candidate.species)} vs {list(reference.species)}"
        raise SpeciesMismatchError(msg)
    if reference.species != candidate.species:
        reference = reference.reordered(candidate.species)
    if candidate.n_reactions != reference.n_reactions:
        msg = f"Candidate has {candidate.n_reactions} reactions, reference {reference.n_reactions}"
        raise ReactionCountMismatchError(msg)

    analysis = analyze_structure(reference, settings)
    if not analysis.weakly_reversible or analysis.deficiency != 0:
        logger.warning(
            f"Reference is not a weakly reversible deficiency-zero network, so it need not be "
            f"complex balanced (weakly reversible: {analysis.weakly_reversible}, "
            f"deficiency: {analysis.deficiency})"
        )

    pairing: list[int] = []
    factors: list[Fraction] = []
    for idx, reaction in enumerate(candidate.reactions):
        matches = [
            (j, factor)
            for j, other in enumerate(reference.reactions)
            if other.reactant == reaction.reactant
            and (factor := collinearity_factor(reaction.vector, other.vector)) is not None
        ]
        if not matches:
            return _rejected(
                pairing, factors,
                f"candidate reaction {idx + 1} has no reference reaction with the same reactant "
                f"and a positively collinear reaction vector",
            )
        if len(matches) > 1:
            return _rejected(
                pairing, factors,
                f"candidate reaction {idx + 1} pairs ambiguously with reference reactions "
                f"{[j + 1 for j, _ in matches]}",
            )
        j, factor = matches[0]
        if j in pairing:
            return _rejected(
                pairing, factors, f"reference reaction {j + 1} is paired more than once"
            )
        pairing.append(j)
        factors.append(factor)

    b = [reference.reactions[j].rate / r.rate for j, r in zip(pairing, candidate.reactions)]
    stability_applicable = True
    too_large = [i for i, value in enumerate(b) if value > 1]
    if too_large:
        reason = f"b_i > 1 for reaction {too_large[0] + 1} (b = {b[too_large[0]]})"
        if not allow_b_greater_1:
            return _rejected(pairing, b, reason)
        logger.warning(f"Accepting with {reason}; the stability result does not apply")
        stability_applicable = False

    for i, (rate_ratio, factor) in enumerate(zip(b, factors, strict=True)):
        if abs(float(rate_ratio - factor)) > settings.coefficient_tolerance:
            return _rejected(
                pairing, b,
                f"reaction {i + 1}: rate ratio {rate_ratio} disagrees with collinearity factor "
                f"{factor}",
            )

    return Lcdcb1Result(
        pairing=pairing,
        b=b,
        accepted=True,
        stability_applicable=stability_applicable,
    )


def companion_dcb(
        candidate: NetworkModel,
        result: Lcdcb1Result,
        reference: NetworkModel
) -> NetworkModel:
    """The reference DCB in candidate order with delays τ_i / b_i."""
    if not result.accepted:
        msg = f"Classification was rejected: {result.rejection_reason}"
        raise ValueError(msg)
    if reference.species != candidate.species:
        reference = reference.reordered(candidate.species)
    reactions = []
    for reaction, j, b in zip(candidate.reactions, result.pairing, result.b, strict=True):
        paired = reference.reactions[j]
        reactions.append(ReactionModel(
            reactant=paired.reactant,
            product=paired.product,
            rate=paired.rate,
            delay=reaction.delay / b,
        ))
    return NetworkModel(species=candidate.species, reactions=tuple(reactions))


def _rejected(pairing: list[int], b: list[Fraction], reason: str) -> Lcdcb1Result:
    logger.info(f"Classification rejected: {reason}")
    return Lcdcb1Result(pairing=pairing, b=b, accepted=False, rejection_reason=reason)
