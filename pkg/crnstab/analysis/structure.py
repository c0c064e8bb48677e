from __future__ import annotations

from typing import TYPE_CHECKING

import networkx as nx
import numpy as np
from scipy import linalg

from crnstab.config import DEFAULT_SETTINGS, SolverSettings
from crnstab.data_model.results import StoichiometryAnalysis

if TYPE_CHECKING:
    from crnstab.data_model.network import ComplexModel, NetworkModel


def reaction_vectors(net: NetworkModel) -> list[np.ndarray]:
    """Reaction vectors y'_i - y_i in reaction order."""
    return [np.array([float(c) for c in r.vector]) for r in net.reactions]


def complex_graph(net: NetworkModel) -> nx.DiGraph:
    """Directed reaction graph on complexes; nodes are indices into `net.complexes`."""
    complexes = net.complexes
    index = {c: i for i, c in enumerate(complexes)}
    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(complexes)))
    for reaction in net.reactions:
        graph.add_edge(index[reaction.reactant], index[reaction.product])
    return graph


def linkage_classes(net: NetworkModel) -> list[list[int]]:
    """Connected components of the undirected complex graph, each sorted, ordered by first index."""
    components = nx.weakly_connected_components(complex_graph(net))
    return sorted((sorted(c) for c in components), key=lambda c: c[0])


def is_weakly_reversible(net: NetworkModel) -> bool:
    graph = complex_graph(net)
    return nx.number_strongly_connected_components(graph) == \
        nx.number_weakly_connected_components(graph)


def stoichiometric_rank(matrix: np.ndarray, tolerance: float) -> int:
    """Rank by column-pivoted QR."""
    if matrix.size == 0:
        return 0
    _, r, _ = linalg.qr(matrix, mode="economic", pivoting=True)
    diagonal = np.abs(np.diag(r))
    return int(np.sum(diagonal > tolerance))


def analyze_structure(
        net: NetworkModel,
        settings: SolverSettings = DEFAULT_SETTINGS
) -> StoichiometryAnalysis:
    """Complexes, linkage classes, weak reversibility, deficiency and bases of S, S^⊥."""
    complexes: list[ComplexModel] = net.complexes
    classes = linkage_classes(net)
    matrix = net.reaction_matrix()
    rank = stoichiometric_rank(matrix, settings.rank_tolerance)

    q, _, _ = linalg.qr(matrix, mode="full", pivoting=True)
    basis_s = q[:, :rank].T

    # Right singular vectors beyond the rank span the null space of N^T, i.e. S^⊥.
    _, _, vh = linalg.svd(matrix.T, full_matrices=True)
    basis_perp = _gram_schmidt(vh[rank:])

    return StoichiometryAnalysis(
        species=net.species,
        complexes=complexes,
        linkage_classes=classes,
        weakly_reversible=is_weakly_reversible(net),
        rank=rank,
        deficiency=len(complexes) - len(classes) - rank,
        basis_S=[_canonical_sign(v).tolist() for v in basis_s],
        basis_S_perp=[v.tolist() for v in basis_perp],
    )


def _gram_schmidt(vectors: np.ndarray) -> np.ndarray:
    """Orthonormalize rows, fixing each row's sign so its first nonzero entry is positive."""
    out: list[np.ndarray] = []
    for v in vectors:
        w = v - sum((v @ u) * u for u in out) if out else v.copy()
        w = w / np.linalg.norm(w)
        out.append(_canonical_sign(w))
    return np.array(out).reshape(len(out), vectors.shape[1])


def _canonical_sign(v: np.ndarray) -> np.ndarray:
    nonzero = np.flatnonzero(np.abs(v) > 1e-12)  # noqa: PLR2004
    if nonzero.size and v[nonzero[0]] < 0:
        return -v
    return v
