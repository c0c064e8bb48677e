# ruff: noqa: G004

from __future__ import annotations

import logging
from fractions import Fraction
from crnstab.data_model.network import ComplexModel, NetworkModel, ReactionModel
from crnstab.data_model.results import DiagonalMap, RealizationResult
from crnstab.exceptions import RealizationError

logger = logging.getLogger(__name__)


def construct_lcdcb(dcb: NetworkModel, q: DiagonalMap) -> RealizationResult:
    """Write the linear-conjugate image x = Q x̃ of a delayed network as a network.

    A scalar Q keeps every reaction and rescales its rate to κ̃ q^{1 - Σ_j y_j}. Otherwise,
    with p the species of largest q (smallest index on ties) and κ_i = κ̃_i Π_j q_j^{-y_j},
    reaction i becomes a delayed reaction y -> y'' with y''_j = (q_j / q_p) y'_j and rate
    κ_i q_p, plus an undelayed reaction y -> y + w with w_j = (q_p - q_j) y_j and rate κ_i.
    Undelayed companions with w = 0 are dropped and counted in `pruned_reactions`.

    Raises:
        ValueError: if Q does not have one entry per species.
        RealizationError: if a delayed reaction would become a self-loop.
    """
    if len(q) != dcb.n_species:
        msg = f"Q has {len(q)} entries for {dcb.n_species} species"
        raise ValueError(msg)

    if q.is_scalar:
        factor = q.q[0]
        reactions = tuple(
            _rebuilt(r, r.reactant, r.product, r.rate * factor ** (1 - _order(r)), r.delay)
            for r in dcb.reactions
        )
        return RealizationResult(
            network=NetworkModel(species=dcb.species, reactions=reactions),
            q=q,
            species_permutation=list(range(dcb.n_species)),
            pruned_reactions=0,
            scalar_branch=True,
        )

    pivot = max(range(len(q)), key=lambda j: (q.q[j], -j))
    q_max = q.q[pivot]
    delayed: list[ReactionModel] = []
    undelayed: list[ReactionModel] = []
    pruned = 0
    for idx, reaction in enumerate(dcb.reactions, 1):
        y = reaction.reactant.coefficients
        kappa = reaction.rate * q.monomial_factor(y)

        scaled = ComplexModel(coefficients=tuple(
            q_j / q_max * c for q_j, c in zip(q.q, reaction.product.coefficients, strict=True)
        ))
        if scaled == reaction.reactant:
            if reaction.delay != 0:
                msg = f"Reaction {idx} maps to a delayed self-loop under Q={list(map(str, q.q))}"
                raise RealizationError(msg)
            pruned += 1
        else:
            delayed.append(
                _rebuilt(reaction, reaction.reactant, scaled, kappa * q_max, reaction.delay)
            )

        added = tuple((q_max - q_j) * y_j for q_j, y_j in zip(q.q, y, strict=True))
        if all(w == 0 for w in added):
            pruned += 1
            continue
        product = ComplexModel(coefficients=tuple(a + b for a, b in zip(y, added, strict=True)))
        undelayed.append(_rebuilt(reaction, reaction.reactant, product, kappa, Fraction(0)))

    logger.info(
        f"Realized {len(delayed)} delayed and {len(undelayed)} undelayed reactions "
        f"({pruned} pruned)"
    )
    others = [j for j in range(dcb.n_species) if j != pivot]
    return RealizationResult(
        network=NetworkModel(species=dcb.species, reactions=(*delayed, *undelayed)),
        q=q,
        species_permutation=[pivot, *others],
        pruned_reactions=pruned,
        scalar_branch=False,
    )


def _order(reaction: ReactionModel) -> int:
    return int(sum(reaction.reactant.coefficients))


def _rebuilt(
        reaction: ReactionModel,
        reactant: ComplexModel,
        product: ComplexModel,
        rate: Fraction,
        delay: Fraction
) -> ReactionModel:
    try:
        return ReactionModel(reactant=reactant, product=product, rate=rate, delay=delay)
    except ValueError as e:
        msg = f"Cannot realize {reaction.reactant} -> {reaction.product}: {e}"
        raise RealizationError(msg) from e
