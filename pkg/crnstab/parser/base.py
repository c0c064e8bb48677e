from __future__ import annotations

from abc import ABC, abstractmethod
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from crnstab.data_model.network import NetworkModel


class NetworkParserBase(ABC):
    """Abstract base class for network readers.

    Concrete parsers take the raw text of one network file and turn it into a
    `NetworkModel`.

    Attributes:
        network_data: Raw text to be processed.
    """

    @abstractmethod
    def extract_network(self) -> NetworkModel:
        """Parse the raw input into a validated network.

        Raises:
            NetworkParseError: If the input does not follow the parser's format.
        """
        msg = "Subclass must implement abstract method"
        raise NotImplementedError(msg)
