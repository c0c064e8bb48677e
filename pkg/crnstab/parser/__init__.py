from enum import Enum
from pathlib import Path

from crnstab.data_model.network import NetworkModel
from crnstab.parser.base import NetworkParserBase
from crnstab.parser.crn import CrnParser, format_complex, format_network, parse_network
from crnstab.parser.history import parse_history
from crnstab.parser.json_network import JsonNetworkParser

__all__ = [
    "CrnParser",
    "JsonNetworkParser",
    "NetworkParserBase",
    "format_complex",
    "format_network",
    "parse_history",
    "parse_network",
]


class ParserType(str, Enum):
    CRN = "crn"
    JSON = "json"


def determine_parser(network_path: Path) -> ParserType:
    if network_path.suffix.lower() == ".crn":
        return ParserType.CRN
    elif network_path.suffix.lower() == ".json":
        return ParserType.JSON
    elif CrnParser.is_valid_text(network_path.read_text()):
        return ParserType.CRN
    else:
        msg = f"Unsupported network file: {network_path}"
        raise ValueError(msg)


def get_parser(
        parser_type: ParserType,
        network_path: Path,
        **kwargs
    ) -> NetworkParserBase:
    if parser_type == ParserType.CRN:
        return CrnParser(network_path.read_text(), **kwargs)
    elif parser_type == ParserType.JSON:
        return JsonNetworkParser(network_path.read_text(), **kwargs)
    else:
        msg = f"Unknown parser type: {parser_type}"
        raise ValueError(msg)


def load_network(network_path: Path) -> NetworkModel:
    """Read a network file, picking the parser from its suffix."""
    return get_parser(determine_parser(network_path), network_path).extract_network()
