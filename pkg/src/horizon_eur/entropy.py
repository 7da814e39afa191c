"""Shannon and von Neumann entropies, in bits."""

from __future__ import annotations

import numpy as np

from .errors import PreconditionError
from .linalg import DensityMatrix, hermitian_spectrum, partial_trace

PROB_SUM_TOL = 1e-10


def shannon_entropy(probs) -> float:
    """-sum p log2 p with 0 log 0 = 0.

    Entries in ``[-1e-12, 0)`` are treated as zero (round-off from real parts
    of expectation values); the distribution must sum to 1 within 1e-10.
    """
    p = np.asarray(probs, dtype=float).reshape(-1)
    if p.size == 0:
        raise PreconditionError("empty probability distribution")
    if np.any(p < -1e-12) or np.any(p > 1 + 1e-12):
        raise PreconditionError("probabilities must lie in [0, 1]")
    if abs(p.sum() - 1.0) > PROB_SUM_TOL:
        raise PreconditionError(f"probabilities sum to {p.sum()!r}, expected 1")
    h = 0.0
    for x in p:
        if x > 0:
            h -= x * np.log2(x)
    return float(max(h, 0.0))


def von_neumann_entropy(rho: DensityMatrix) -> float:
    return shannon_entropy(hermitian_spectrum(rho).eigenvalues)


def _require_bipartite(rho: DensityMatrix) -> None:
    if len(rho.factor_dims) != 2:
        raise PreconditionError(
            f"expected a bipartite state, got factor dims {rho.factor_dims}"
        )


def conditional_entropy(rho_ab: DensityMatrix, condition_on: int = 1) -> float:
    """H(AB) - H(X) where X is the factor ``condition_on``. Negative for entangled states."""
    _require_bipartite(rho_ab)
    if condition_on not in (0, 1):
        raise PreconditionError("condition_on must be 0 or 1")
    return von_neumann_entropy(rho_ab) - von_neumann_entropy(partial_trace(rho_ab, [condition_on]))


def mutual_information(rho_ab: DensityMatrix) -> float:
    _require_bipartite(rho_ab)
    h_a = von_neumann_entropy(partial_trace(rho_ab, [0]))
    h_b = von_neumann_entropy(partial_trace(rho_ab, [1]))
    return h_a + h_b - von_neumann_entropy(rho_ab)
