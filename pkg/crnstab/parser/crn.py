from __future__ import annotations

import re
from fractions import Fraction
from typing import ClassVar, NamedTuple

from pydantic import ValidationError

from crnstab.data_model.network import ComplexModel, NetworkModel, ReactionModel
from crnstab.data_model.types import format_fraction, to_fraction
from crnstab.exceptions import NetworkParseError
from crnstab.parser.base import NetworkParserBase


class CrnGrammarConstants:
    """Tokens of the `.crn` reaction-network text format.

    One reaction per line: `complex -> complex : k=<number>[, tau=<number>]`. A complex is
    `0` or terms joined by `+`, each term an optional coefficient followed by a species name.
    Numbers are decimals or `p/q` fractions. `#` starts a comment and an optional
    `species: A, B, ...` header pins the species order.
    """
    arrow = "->"
    parameter_separator = ":"
    comment_marker = "#"
    zero_complex: ClassVar[set[str]] = {"0", "∅"}
    rate_key = "k"
    delay_key = "tau"

    header = re.compile(r"^\s*species\s*:(?P<names>.*)$", re.IGNORECASE)
    species_name = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
    term = re.compile(
        r"^\s*(?:(?P<coef>\d+(?:/\d+)?|\d*\.\d+)\s*\*?\s*)?(?P<name>[A-Za-z_][A-Za-z0-9_]*)\s*$"
    )
    parameter = re.compile(r"^\s*(?P<key>[A-Za-z_]+)\s*=\s*(?P<value>\S+)\s*$")


class _RawReaction(NamedTuple):
    line: int
    text: str
    reactant: dict[str, Fraction]
    product: dict[str, Fraction]
    rate: Fraction
    delay: Fraction


class CrnParser(NetworkParserBase):
    """Parser for the line-oriented `.crn` network format.

    Args:
        network_data: Raw text of the `.crn` file.
    """
    def __init__(
            self,
            network_data: str,
            *args,
            **kwargs
    ) -> None:
        self.network_data = network_data

    def extract_network(self) -> NetworkModel:
        header_species: list[str] | None = None
        header_line = 0
        raw_reactions: list[_RawReaction] = []

        for line_no, raw_line in enumerate(self.network_data.splitlines(), 1):
            line = raw_line.split(CrnGrammarConstants.comment_marker, 1)[0]
            if not line.strip():
                continue
            header = CrnGrammarConstants.header.match(line)
            if header:
                if header_species is not None:
                    msg = "Duplicate species header"
                    raise NetworkParseError(msg, line_no, 1)
                header_species = self._parse_header(header.group("names"), raw_line, line_no)
                header_line = line_no
                continue
            raw_reactions.append(self._parse_reaction_line(line, raw_line, line_no))

        if not raw_reactions:
            msg = "Network file contains no reactions"
            raise NetworkParseError(msg, max(header_line, 1), 1)

        species = header_species or self._species_in_order(raw_reactions)
        if header_species is not None:
            self._check_known_species(raw_reactions, header_species)

        reactions = [self._build_reaction(raw, species) for raw in raw_reactions]
        try:
            return NetworkModel(species=tuple(species), reactions=tuple(reactions))
        except ValidationError as e:
            raise NetworkParseError(_first_error(e), header_line, 1) from e

    @classmethod
    def is_valid_text(cls, network_data: str) -> bool:
        """Check whether the text looks like a `.crn` network."""
        return any(
            CrnGrammarConstants.arrow in line.split(CrnGrammarConstants.comment_marker, 1)[0]
            for line in network_data.splitlines()
        )

    def _parse_header(self, names: str, raw_line: str, line_no: int) -> list[str]:
        species = [name.strip() for name in names.split(",") if name.strip()]
        for name in species:
            if not CrnGrammarConstants.species_name.match(name):
                msg = f"Invalid species name {name!r}"
                raise NetworkParseError(msg, line_no, _column(raw_line, name))
        if len(set(species)) != len(species):
            msg = f"Duplicate species in header: {species}"
            raise NetworkParseError(msg, line_no, 1)
        if not species:
            msg = "Empty species header"
            raise NetworkParseError(msg, line_no, 1)
        return species

    def _parse_reaction_line(self, line: str, raw_line: str, line_no: int) -> _RawReaction:
        if line.count(CrnGrammarConstants.arrow) != 1:
            msg = f"Expected exactly one '{CrnGrammarConstants.arrow}'"
            raise NetworkParseError(msg, line_no, _column(raw_line, CrnGrammarConstants.arrow))
        lhs, rest = line.split(CrnGrammarConstants.arrow)
        if rest.count(CrnGrammarConstants.parameter_separator) != 1:
            msg = "Expected ':' followed by the rate constant, e.g. ': k=1'"
            column = len(lhs) + len(CrnGrammarConstants.arrow) + len(rest.rstrip()) + 1
            raise NetworkParseError(msg, line_no, column)
        rhs, parameters = rest.split(CrnGrammarConstants.parameter_separator)

        reactant = self._parse_complex(lhs, raw_line, line_no)
        product = self._parse_complex(rhs, raw_line, line_no)
        rate, delay = self._parse_parameters(parameters, raw_line, line_no)
        return _RawReaction(line_no, raw_line, reactant, product, rate, delay)

    def _parse_complex(self, text: str, raw_line: str, line_no: int) -> dict[str, Fraction]:
        if text.strip() in CrnGrammarConstants.zero_complex:
            return {}
        if not text.strip():
            msg = "Empty complex (write 0 for the zero complex)"
            raise NetworkParseError(msg, line_no, _column(raw_line, text) or 1)
        terms: dict[str, Fraction] = {}
        for term in text.split("+"):
            match = CrnGrammarConstants.term.match(term)
            if match is None:
                msg = f"Cannot read term {term.strip()!r}"
                raise NetworkParseError(msg, line_no, _column(raw_line, term.strip()))
            coefficient = Fraction(match.group("coef")) if match.group("coef") else Fraction(1)
            name = match.group("name")
            terms[name] = terms.get(name, Fraction(0)) + coefficient
        return terms

    def _parse_parameters(
            self,
            text: str,
            raw_line: str,
            line_no: int
    ) -> tuple[Fraction, Fraction]:
        values: dict[str, Fraction] = {}
        for item in text.split(","):
            match = CrnGrammarConstants.parameter.match(item)
            if match is None:
                msg = f"Expected key=value, got {item.strip()!r}"
                raise NetworkParseError(msg, line_no, _column(raw_line, item.strip()) or 1)
            key = match.group("key")
            if key not in {CrnGrammarConstants.rate_key, CrnGrammarConstants.delay_key}:
                msg = f"Unknown parameter {key!r} (expected k or tau)"
                raise NetworkParseError(msg, line_no, _column(raw_line, item.strip()))
            if key in values:
                msg = f"Parameter {key!r} given twice"
                raise NetworkParseError(msg, line_no, _column(raw_line, item.strip()))
            try:
                values[key] = to_fraction(match.group("value"))
            except (TypeError, ValueError, ZeroDivisionError) as e:
                msg = f"Invalid number {match.group('value')!r}"
                raise NetworkParseError(msg, line_no, _column(raw_line, match.group("value"))) \
                    from e

        if CrnGrammarConstants.rate_key not in values:
            msg = "Missing rate constant k="
            raise NetworkParseError(msg, line_no, _column(raw_line, text.strip()) or 1)
        return values[CrnGrammarConstants.rate_key], \
            values.get(CrnGrammarConstants.delay_key, Fraction(0))

    @staticmethod
    def _species_in_order(raw_reactions: list[_RawReaction]) -> list[str]:
        seen: dict[str, None] = {}
        for raw in raw_reactions:
            for name in [*raw.reactant, *raw.product]:
                seen.setdefault(name, None)
        return list(seen)

    @staticmethod
    def _check_known_species(raw_reactions: list[_RawReaction], species: list[str]) -> None:
        for raw in raw_reactions:
            for name in [*raw.reactant, *raw.product]:
                if name not in species:
                    msg = f"Unknown species {name!r} (not listed in the species header)"
                    raise NetworkParseError(msg, raw.line, _column(raw.text, name))

    @staticmethod
    def _build_reaction(raw: _RawReaction, species: list[str]) -> ReactionModel:
        try:
            return ReactionModel(
                reactant=ComplexModel(
                    coefficients=tuple(raw.reactant.get(s, Fraction(0)) for s in species)
                ),
                product=ComplexModel(
                    coefficients=tuple(raw.product.get(s, Fraction(0)) for s in species)
                ),
                rate=raw.rate,
                delay=raw.delay,
            )
        except ValidationError as e:
            raise NetworkParseError(_first_error(e), raw.line, 1) from e


def parse_network(text: str) -> NetworkModel:
    """Parse `.crn` text into a network (reactions kept in file order)."""
    return CrnParser(text).extract_network()


def format_network(net: NetworkModel) -> str:
    """Canonical `.crn` text for a network; `parse_network` reads it back unchanged.

    The species header is written only when the species order cannot be recovered from the
    order of first appearance in the reactions.
    """
    lines = []
    if list(net.species) != _appearance_order(net):
        lines.append("species: " + ", ".join(net.species))
    for reaction in net.reactions:
        text = (f"{format_complex(reaction.reactant, net.species)} "
                f"{CrnGrammarConstants.arrow} "
                f"{format_complex(reaction.product, net.species)} "
                f": {CrnGrammarConstants.rate_key}={format_fraction(reaction.rate)}")
        if reaction.delay != 0:
            text += f", {CrnGrammarConstants.delay_key}={format_fraction(reaction.delay)}"
        lines.append(text)
    return "\n".join(lines) + "\n"


def format_complex(complex_: ComplexModel, species: tuple[str, ...]) -> str:
    terms = []
    for name, coefficient in zip(species, complex_.coefficients, strict=True):
        if coefficient == 0:
            continue
        if coefficient == 1:
            terms.append(name)
        elif coefficient.denominator == 1:
            terms.append(f"{coefficient.numerator}{name}")
        else:
            terms.append(f"{format_fraction(coefficient)} {name}")
    return " + ".join(terms) if terms else "0"


def _appearance_order(net: NetworkModel) -> list[str]:
    seen: dict[str, None] = {}
    for reaction in net.reactions:
        for complex_ in (reaction.reactant, reaction.product):
            for name, coefficient in zip(net.species, complex_.coefficients, strict=True):
                if coefficient != 0:
                    seen.setdefault(name, None)
    return list(seen)


def _column(raw_line: str, token: str) -> int:
    idx = raw_line.find(token) if token else -1
    return idx + 1 if idx >= 0 else 0


def _first_error(error: ValidationError) -> str:
    first = error.errors()[0]
    return str(first.get("ctx", {}).get("error", first["msg"]))
