from __future__ import annotations

from pydantic import ValidationError

from crnstab.data_model.network import NetworkModel
from crnstab.exceptions import NetworkParseError
from crnstab.parser.base import NetworkParserBase


class JsonNetworkParser(NetworkParserBase):
    """Reads networks written by `--format json` (the `NetworkModel` JSON schema)."""

    def __init__(
            self,
            network_data: str,
            *args,
            **kwargs
    ) -> None:
        self.network_data = network_data

    def extract_network(self) -> NetworkModel:
        try:
            return NetworkModel.model_validate_json(self.network_data)
        except ValidationError as e:
            msg = f"Invalid network JSON: {e.errors()[0]['msg']}"
            raise NetworkParseError(msg) from e
