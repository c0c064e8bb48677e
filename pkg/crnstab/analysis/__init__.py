from crnstab.analysis.equilibrium import (
    check_complex_balance,
    find_complex_balanced_equilibrium,
    find_equilibrium_in_class,
    find_lcdcb_equilibrium,
    kinetic_laplacian,
)
from crnstab.analysis.structure import (
    analyze_structure,
    complex_graph,
    is_weakly_reversible,
    linkage_classes,
    reaction_vectors,
)

__all__ = [
    "analyze_structure",
    "check_complex_balance",
    "complex_graph",
    "find_complex_balanced_equilibrium",
    "find_equilibrium_in_class",
    "find_lcdcb_equilibrium",
    "is_weakly_reversible",
    "kinetic_laplacian",
    "linkage_classes",
    "reaction_vectors",
]
