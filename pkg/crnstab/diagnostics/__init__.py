from crnstab.diagnostics.functionals import (
    ConservedFunctional,
    eval_c_a,
    eval_h_a,
    h_a_basis,
    monomials,
)
from crnstab.diagnostics.lyapunov import (
    LyapunovSpec,
    entropy_term,
    eval_V,
    lyapunov_derivative,
)
from crnstab.diagnostics.quadrature import integrate
from crnstab.diagnostics.reports import check_monotone, conservation_report, dissipation_report

__all__ = [
    "ConservedFunctional",
    "LyapunovSpec",
    "check_monotone",
    "conservation_report",
    "dissipation_report",
    "entropy_term",
    "eval_V",
    "eval_c_a",
    "eval_h_a",
    "h_a_basis",
    "integrate",
    "lyapunov_derivative",
    "monomials",
]
