from crnstab.lcdcb1.classify import classify_lcdcb1, collinearity_factor, companion_dcb
from crnstab.lcdcb1.dissipation import dissipation_split

__all__ = [
    "classify_lcdcb1",
    "collinearity_factor",
    "companion_dcb",
    "dissipation_split",
]
