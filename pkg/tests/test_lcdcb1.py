from __future__ import annotations

import logging
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crnstab.analysis import (
    analyze_structure,
    check_complex_balance,
    find_complex_balanced_equilibrium,
)
from crnstab.conjugacy import delayed_field, undelayed_equivalence
from crnstab.data_model.network import HistoryFunction
from crnstab.diagnostics import LyapunovSpec, eval_c_a, lyapunov_derivative
from crnstab.exceptions import ReactionCountMismatchError, SpeciesMismatchError
from crnstab.lcdcb1 import classify_lcdcb1, collinearity_factor, companion_dcb, dissipation_split
from crnstab.parser import parse_network

F = Fraction

LONGER_FIRST_VECTOR = """\
3A -> 3B : k=2/3, tau=1/10
A + 2B -> 2A + B : k=2, tau=1
"""

positive = st.floats(min_value=0.2, max_value=5.0, allow_nan=False, allow_infinity=False)
states = st.tuples(positive, positive).map(np.array)


class TestCollinearityFactor:
    def test_positive_multiple(self):
        assert collinearity_factor((F(1), F(-1)), (F(2), F(-2))) == F(1, 2)

    def test_negative_multiple(self):
        assert collinearity_factor((F(-1), F(1)), (F(2), F(-2))) is None

    def test_not_collinear(self):
        assert collinearity_factor((F(1), F(0)), (F(2), F(-2))) is None

    def test_zero_reference(self):
        assert collinearity_factor((F(1), F(0)), (F(0), F(0))) is None


class TestClassify:
    def test_shrunk_pair_accepted(self, shrunk_candidate, shrunk_reference):
        result = classify_lcdcb1(shrunk_candidate, shrunk_reference)
        assert result.accepted
        assert result.pairing == [0, 1]
        assert result.b_values == [F(1), F(1, 2)]
        assert result.stability_applicable

    def test_identical_networks(self, shrunk_reference):
        result = classify_lcdcb1(shrunk_reference, shrunk_reference)
        assert result.accepted
        assert result.b_values == [F(1), F(1)]

    def test_reordered_reactions(self, shrunk_candidate, shrunk_reference):
        swapped = parse_network(
            "A + 2B -> 3A : k=1, tau=1\n3A -> A + 2B : k=1, tau=1/10"
        )
        result = classify_lcdcb1(shrunk_candidate, swapped)
        assert result.accepted
        assert result.pairing == [1, 0]

    def test_rate_perturbed_candidate_rejected(self, shrunk_reference):
        perturbed = parse_network(
            "3A -> A + 2B : k=1, tau=1/10\nA + 2B -> 2A + B : k=1/2, tau=1"
        )
        result = classify_lcdcb1(perturbed, shrunk_reference)
        assert not result.accepted
        assert "b_i > 1" in result.rejection_reason

    def test_longer_vector_rejected_by_default(self, shrunk_reference):
        result = classify_lcdcb1(parse_network(LONGER_FIRST_VECTOR), shrunk_reference)
        assert not result.accepted
        assert "b = 3/2" in result.rejection_reason

    def test_longer_vector_tolerated_with_flag(self, shrunk_reference):
        result = classify_lcdcb1(
            parse_network(LONGER_FIRST_VECTOR), shrunk_reference, allow_b_greater_1=True
        )
        assert result.accepted
        assert not result.stability_applicable
        assert result.b_values == [F(3, 2), F(1, 2)]

    def test_rate_ratio_must_match_vector_ratio(self, shrunk_reference):
        candidate = parse_network(
            "3A -> A + 2B : k=1, tau=1/10\nA + 2B -> 2A + B : k=4, tau=1"
        )
        result = classify_lcdcb1(candidate, shrunk_reference)
        assert not result.accepted
        assert "collinearity factor" in result.rejection_reason

    def test_unpaired_reaction(self, shrunk_reference):
        candidate = parse_network("3A -> 3B : k=1\n2B -> A + 2B : k=1")
        result = classify_lcdcb1(candidate, shrunk_reference)
        assert not result.accepted
        assert "reaction 2" in result.rejection_reason

    def test_reference_outside_deficiency_zero_is_flagged(
            self, shrunk_candidate, shrunk_reference, caplog
    ):
        with caplog.at_level(logging.WARNING, logger="crnstab.lcdcb1.classify"):
            classify_lcdcb1(shrunk_reference, shrunk_candidate)
        assert "need not be complex balanced" in caplog.text

    def test_structural_reference_is_complex_balanced(
            self, shrunk_candidate, shrunk_reference, caplog
    ):
        with caplog.at_level(logging.WARNING, logger="crnstab.lcdcb1.classify"):
            assert classify_lcdcb1(shrunk_candidate, shrunk_reference).accepted
        assert "complex balanced" not in caplog.text
        x_bar = find_complex_balanced_equilibrium(shrunk_reference).x
        np.testing.assert_allclose(
            check_complex_balance(shrunk_reference, x_bar), 0.0, atol=1e-10
        )

    def test_species_mismatch(self, shrunk_candidate):
        other = parse_network("3A -> A + 2C : k=1\nA + 2C -> 3A : k=1")
        with pytest.raises(SpeciesMismatchError):
            classify_lcdcb1(shrunk_candidate, other)

    def test_reaction_count_mismatch(self, shrunk_candidate):
        other = parse_network("3A -> A + 2B : k=1\nA + 2B -> 3A : k=1\nB -> A : k=1")
        with pytest.raises(ReactionCountMismatchError):
            classify_lcdcb1(shrunk_candidate, other)


class TestCompanion:
    def test_delays_divided_by_b(self, shrunk_candidate, shrunk_reference):
        result = classify_lcdcb1(shrunk_candidate, shrunk_reference)
        companion = companion_dcb(shrunk_candidate, result, shrunk_reference)
        assert companion.delays == (F(1, 10), F(2))
        assert [r.rate for r in companion.reactions] == [F(1), F(1)]
        assert [r.product for r in companion.reactions] == \
            [r.product for r in shrunk_reference.reactions]

    def test_companion_shares_conservation_laws_and_equilibria(
            self, shrunk_candidate, shrunk_reference
    ):
        result = classify_lcdcb1(shrunk_candidate, shrunk_reference)
        companion = companion_dcb(shrunk_candidate, result, shrunk_reference)

        def s_perp_projector(net):
            basis = analyze_structure(net).s_perp_matrix()
            return basis.T @ basis

        np.testing.assert_allclose(
            s_perp_projector(shrunk_candidate), s_perp_projector(companion), atol=1e-12
        )
        # κ_i v_i = κ̃_i ṽ_i, so both networks share their undelayed field
        assert undelayed_equivalence(shrunk_candidate, companion)
        for e in (0.5, 1.0, 3.0):
            x = np.array([e, e])
            for net in (shrunk_candidate, companion):
                field = delayed_field(net)
                delayed = {delay: x for delay in field.delays if delay > 0}
                np.testing.assert_allclose(field.evaluate(x, delayed), 0.0, atol=1e-10)

    def test_rejected_has_no_companion(self, shrunk_reference):
        perturbed = parse_network(
            "3A -> A + 2B : k=1, tau=1/10\nA + 2B -> 2A + B : k=1/2, tau=1"
        )
        result = classify_lcdcb1(perturbed, shrunk_reference)
        with pytest.raises(ValueError, match="rejected"):
            companion_dcb(perturbed, result, shrunk_reference)

    @given(state=states)
    @settings(max_examples=100, deadline=None)
    def test_conserved_quantity_matches_companion(self, state):
        candidate = parse_network(
            "3A -> A + 2B : k=1, tau=1/10\nA + 2B -> 2A + B : k=2, tau=1"
        )
        reference = parse_network("3A -> A + 2B : k=1, tau=1/10\nA + 2B -> 3A : k=1, tau=1")
        companion = companion_dcb(candidate, classify_lcdcb1(candidate, reference), reference)
        history = HistoryFunction.constant(state.tolist())
        np.testing.assert_allclose(
            eval_c_a(candidate, [1, 1], history),
            eval_c_a(companion, [1, 1], history),
            rtol=1e-10,
        )


class TestDissipationSplit:
    @given(now=states, short=states, long=states)
    @settings(max_examples=200, deadline=None)
    def test_parts_sum_to_derivative(self, now, short, long):
        candidate = parse_network(
            "3A -> A + 2B : k=1, tau=1/10\nA + 2B -> 2A + B : k=2, tau=1"
        )
        reference = parse_network("3A -> A + 2B : k=1, tau=1/10\nA + 2B -> 3A : k=1, tau=1")
        result = classify_lcdcb1(candidate, reference)
        xbar = np.ones(2)
        delayed = {F(1, 10): short, F(1): long}

        part_a, part_b = dissipation_split(candidate, reference, result, xbar, now, delayed)
        total = lyapunov_derivative(LyapunovSpec.from_network(candidate, xbar), now, delayed)
        scale = 1.0 + abs(part_a) + abs(part_b)
        assert part_a + part_b == pytest.approx(total, abs=1e-10 * scale)
        assert part_a <= 1e-10 * scale
        assert part_b <= 1e-10 * scale
