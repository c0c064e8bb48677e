from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
from scipy import linalg

from crnstab.config import DEFAULT_SETTINGS, SolverSettings
from crnstab.conjugacy.field import check_linear_conjugacy, delayed_field
from crnstab.data_model.results import ConjugacyProbeResult, DiagonalMap
from crnstab.data_model.types import format_fraction
from crnstab.parser.crn import format_complex

if TYPE_CHECKING:
    from crnstab.data_model.network import NetworkModel

_LOG_TOLERANCE = 1e-9


def probe_conjugacy(
        a: NetworkModel,
        b: NetworkModel,
        settings: SolverSettings = DEFAULT_SETTINGS
) -> ConjugacyProbeResult:
    """Look for a positive diagonal Q with field(a) = Q applied to field(b).

    Each nonzero coefficient pair gives one equation (e_j - y)·ln q = ln(c^a_j / c^b_j). A
    support or sign mismatch, or an inconsistent log system, proves that no Q exists. A
    consistent solution is returned only after `check_linear_conjugacy` certifies it.
    """
    if set(a.species) != set(b.species):
        return ConjugacyProbeResult(
            conjugate=False,
            obstruction=f"species differ: {list(a.species)} vs {list(b.species)}",
        )
    if b.species != a.species:
        b = b.reordered(a.species)

    field_a, field_b = delayed_field(a), delayed_field(b)
    n = a.n_species
    rows: list[np.ndarray] = []
    rhs: list[float] = []
    keys = sorted(set(field_a) | set(field_b), key=lambda k: (k[1], k[0].coefficients))
    for key in keys:
        exponents, delay = key
        where = f"{format_complex(exponents, a.species)} @ tau={format_fraction(delay)}"
        ca, cb = field_a.coefficient(key), field_b.coefficient(key)
        for j in range(n):
            if (ca[j] == 0) != (cb[j] == 0):
                return ConjugacyProbeResult(
                    conjugate=False,
                    obstruction=f"support mismatch at {where}, species {a.species[j]}: "
                                f"{ca[j]:g} vs {cb[j]:g}",
                )
            if ca[j] == 0:
                continue
            if np.sign(ca[j]) != np.sign(cb[j]):
                return ConjugacyProbeResult(
                    conjugate=False,
                    obstruction=f"sign mismatch at {where}, species {a.species[j]}",
                )
            row = -exponents.as_array()
            row[j] += 1.0
            rows.append(row)
            rhs.append(float(np.log(ca[j] / cb[j])))

    matrix, target = np.array(rows).reshape(-1, n), np.array(rhs)
    log_q, *_ = linalg.lstsq(matrix, target)
    residual = float(np.max(np.abs(matrix @ log_q - target), initial=0.0))
    if residual > _LOG_TOLERANCE:
        return ConjugacyProbeResult(
            conjugate=False,
            obstruction=f"inconsistent log-linear system (residual {residual:.3g})",
        )

    witness = np.exp(log_q)
    report = check_linear_conjugacy(a, b, DiagonalMap(q=tuple(witness.tolist())), settings)
    if not report.conjugate:
        return ConjugacyProbeResult(
            conjugate=False,
            obstruction="log-linear solution failed certification: " + report.mismatches[0],
        )
    return ConjugacyProbeResult(conjugate=True, witness=witness.tolist())
