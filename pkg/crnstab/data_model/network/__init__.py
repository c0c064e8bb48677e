from crnstab.data_model.network.base import NetworkModel
from crnstab.data_model.network.complex import ComplexModel
from crnstab.data_model.network.history import HistoryFunction, format_history
from crnstab.data_model.network.reaction import ReactionModel

__all__ = [
    "ComplexModel",
    "HistoryFunction",
    "NetworkModel",
    "ReactionModel",
    "format_history",
]
