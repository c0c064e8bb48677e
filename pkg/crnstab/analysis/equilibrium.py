# ruff: noqa: G004

from __future__ import annotations

import logging
from typing import TYPE_CHECKING

import numpy as np
from scipy import linalg, optimize

from crnstab.analysis.structure import analyze_structure
from crnstab.config import DEFAULT_SETTINGS, SolverSettings
from crnstab.data_model.results import EquilibriumResult
from crnstab.diagnostics.functionals import ConservedFunctional
from crnstab.exceptions import (
    AnalysisError,
    ConvergenceError,
    FunctionalDomainError,
    NotWeaklyReversibleError,
)

if TYPE_CHECKING:
    from crnstab.data_model.network import HistoryFunction, NetworkModel
    from crnstab.data_model.results import DiagonalMap, StoichiometryAnalysis

logger = logging.getLogger(__name__)

_KERNEL_RCOND = 1e-10


def kinetic_laplacian(net: NetworkModel) -> np.ndarray:
    """Laplacian L on complexes with (L ψ)_η = inflow(η) - outflow(η) for ψ_η = x^η."""
    index = {c: i for i, c in enumerate(net.complexes)}
    size = len(index)
    laplacian = np.zeros((size, size))
    for reaction in net.reactions:
        source, target = index[reaction.reactant], index[reaction.product]
        rate = float(reaction.rate)
        laplacian[target, source] += rate
        laplacian[source, source] -= rate
    return laplacian


def check_complex_balance(net: NetworkModel, x: np.ndarray) -> np.ndarray:
    """Outflow minus inflow at every complex, in `net.complexes` order."""
    x = np.asarray(x, dtype=float)
    if x.shape != (net.n_species,) or np.any(x <= 0):
        msg = f"Complex balance needs a strictly positive state of length {net.n_species}"
        raise FunctionalDomainError(msg)
    psi = np.array([c.monomial(x) for c in net.complexes])
    return -kinetic_laplacian(net) @ psi


def find_complex_balanced_equilibrium(
        net: NetworkModel,
        settings: SolverSettings = DEFAULT_SETTINGS
) -> EquilibriumResult:
    """The complex-balanced equilibrium with minimum-norm Ln coordinates.

    A positive kernel vector ρ of the Laplacian is taken per linkage class, then
    Yᵀ Ln x = Ln ρ + (per-class constant) is solved in least squares and polished by Newton.

    Raises:
        NotWeaklyReversibleError: if some linkage class is not strongly connected.
        AnalysisError: if no positive kernel exists or the log system is inconsistent.
        ConvergenceError: if the Newton polish does not reach the residual tolerance.
    """
    analysis = analyze_structure(net, settings)
    if not analysis.weakly_reversible:
        msg = "Network is not weakly reversible; no complex balanced equilibrium is guaranteed"
        raise NotWeaklyReversibleError(msg)

    complexes = np.array([c.as_array() for c in net.complexes])
    log_rho = _log_kernel(kinetic_laplacian(net), analysis)

    n, classes = net.n_species, analysis.linkage_class_count
    system = np.zeros((len(complexes), n + classes))
    system[:, :n] = complexes
    for k, members in enumerate(analysis.linkage_classes):
        system[members, n + k] = -1.0
    solution, *_ = linalg.lstsq(system, log_rho)
    mismatch = np.max(np.abs(system @ solution - log_rho))
    if mismatch > np.sqrt(settings.equilibrium_tolerance):
        msg = f"No CB equilibrium found (log-linear residual {mismatch:.3g})"
        raise AnalysisError(msg)

    basis_perp = analysis.s_perp_matrix()
    log_x = _project_out(solution[:n], basis_perp)
    log_x, iterations = _newton_polish(net, complexes, log_x, settings)
    log_x = _project_out(log_x, basis_perp)

    point = np.exp(log_x)
    residuals = check_complex_balance(net, point)
    if np.max(np.abs(residuals)) > settings.equilibrium_tolerance * _flux_scale(net, point):
        msg = f"CB equilibrium residual {np.max(np.abs(residuals)):.3g} above tolerance"
        raise ConvergenceError(msg)
    logger.info(f"CB equilibrium {point.tolist()} after {iterations} Newton steps")
    return EquilibriumResult(
        point=point.tolist(),
        residuals=residuals.tolist(),
        equilibrium_set_directions=basis_perp.tolist(),
        iterations=iterations,
    )


def find_equilibrium_in_class(
        net: NetworkModel,
        theta: HistoryFunction,
        cb_equilibrium: EquilibriumResult,
        settings: SolverSettings = DEFAULT_SETTINGS
) -> np.ndarray:
    """The equilibrium x* = x̄ ∘ exp(Bᵀλ) with c_a(x*) = c_a(θ) for every S^⊥ basis row a.

    `net` supplies the rates and delays of c_a; `cb_equilibrium` supplies the manifold. The
    two may come from different networks when `net` shares its equilibria with a DCB.
    """
    basis = analyze_structure(net, settings).s_perp_matrix()
    xbar = cb_equilibrium.x
    if basis.size == 0:
        return xbar

    functionals = [ConservedFunctional.for_network(net, a, settings) for a in basis]
    targets = np.array([f.evaluate(theta, settings) for f in functionals])
    reactants = net.reactant_matrix()
    rate_delay = net.rates * np.array([float(d) for d in net.delays])

    def point(lam: np.ndarray) -> np.ndarray:
        return xbar * np.exp(basis.T @ lam)

    def residual(lam: np.ndarray) -> np.ndarray:
        x = point(lam)
        mono = np.prod(x ** reactants, axis=1)
        return basis @ (x + reactants.T @ (rate_delay * mono)) - targets

    def jacobian(lam: np.ndarray) -> np.ndarray:
        x = point(lam)
        mono = np.prod(x ** reactants, axis=1)
        # d x^y / dλ = x^y (B y)ᵀ
        inner = (x[:, None] * basis.T) + reactants.T @ (
            (rate_delay * mono)[:, None] * (reactants @ basis.T)
        )
        return basis @ inner

    start = basis @ (np.log(theta(0.0)) - np.log(xbar))
    scale = max(1.0, float(np.max(np.abs(targets))))
    if np.max(np.abs(residual(start))) <= settings.newton_tolerance * scale:
        return point(start)
    solution = optimize.root(
        residual,
        start,
        jac=jacobian,
        method="hybr",
        options={"maxfev": settings.root_max_iterations, "xtol": 1e-14},
    )
    gap = np.max(np.abs(residual(solution.x)))
    if gap > settings.class_tolerance:
        msg = f"Class equilibrium solve did not converge ({solution.message}; residual {gap:.3g})"
        raise ConvergenceError(msg)
    return point(solution.x)


def find_lcdcb_equilibrium(
        dcb: NetworkModel,
        q: DiagonalMap,
        theta: HistoryFunction,
        settings: SolverSettings = DEFAULT_SETTINGS
) -> np.ndarray:
    """Equilibrium of the invariant set of θ for the system x = Q x̃ conjugate to `dcb`."""
    q_arr = q.as_array()
    cb = find_complex_balanced_equilibrium(dcb, settings)
    tilde = find_equilibrium_in_class(dcb, theta.scaled((1 / q_arr).tolist()), cb, settings)
    return q_arr * tilde


def _log_kernel(laplacian: np.ndarray, analysis: StoichiometryAnalysis) -> np.ndarray:
    log_rho = np.zeros(laplacian.shape[0])
    for members in analysis.linkage_classes:
        block = laplacian[np.ix_(members, members)]
        kernel = linalg.null_space(block, rcond=_KERNEL_RCOND)
        if kernel.shape[1] != 1:
            msg = f"Laplacian kernel of linkage class {members} has dimension {kernel.shape[1]}"
            raise AnalysisError(msg)
        vector = kernel[:, 0] * np.sign(kernel[:, 0].sum())
        if np.any(vector <= 0):
            msg = f"No strictly positive kernel vector for linkage class {members}"
            raise AnalysisError(msg)
        log_rho[members] = np.log(vector)
    return log_rho


def _project_out(log_x: np.ndarray, basis_perp: np.ndarray) -> np.ndarray:
    if basis_perp.size == 0:
        return log_x
    return log_x - basis_perp.T @ (basis_perp @ log_x)


def _flux_scale(net: NetworkModel, x: np.ndarray) -> float:
    fluxes = net.rates * np.prod(x ** net.reactant_matrix(), axis=1)
    return max(1.0, float(np.max(fluxes)))


def _newton_polish(
        net: NetworkModel,
        complexes: np.ndarray,
        log_x: np.ndarray,
        settings: SolverSettings
) -> tuple[np.ndarray, int]:
    laplacian = kinetic_laplacian(net)
    for iteration in range(settings.newton_max_iterations):
        psi = np.exp(complexes @ log_x)
        residual = -laplacian @ psi
        if np.max(np.abs(residual)) <= settings.newton_tolerance * _flux_scale(net, np.exp(log_x)):
            return log_x, iteration
        jacobian = -laplacian @ (psi[:, None] * complexes)
        delta, *_ = linalg.lstsq(jacobian, -residual)
        log_x = log_x + delta
    return log_x, settings.newton_max_iterations
