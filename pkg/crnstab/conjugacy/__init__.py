from crnstab.conjugacy.field import (
    DelayedMonomialField,
    check_linear_conjugacy,
    compare_fields,
    delayed_field,
    transform_field,
    undelayed_equivalence,
)
from crnstab.conjugacy.probe import probe_conjugacy
from crnstab.conjugacy.realization import construct_lcdcb

__all__ = [
    "DelayedMonomialField",
    "check_linear_conjugacy",
    "compare_fields",
    "construct_lcdcb",
    "delayed_field",
    "probe_conjugacy",
    "transform_field",
    "undelayed_equivalence",
]
