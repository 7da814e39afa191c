"""Entropic uncertainty with a quantum memory and its two lower bounds.

For measurements M1, M2 on A and memory B:

    lhs = H(M1|B) + H(M2|B)
    u1  = -log2 c1 + H(A) - I(A:B)                 (mutual-information bound)
    u2  = -log2 c1 + H(A) - J(B|M1) - J(B|M2)      (Holevo bound)

``lhs - u2`` equals H(M1) + H(M2) + log2 c1 - H(A), which involves A alone.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields
from typing import Sequence

import numpy as np

from .entropy import conditional_entropy, mutual_information, von_neumann_entropy
from .errors import ConsistencyError
from .horizon import HorizonParams, dilation_angle, example_state, transform_memory
from .linalg import DensityMatrix, partial_trace
from .measurement import (
    ProjectiveBasis,
    classical_quantum_state,
    eigenbasis,
    holevo_quantity,
    measure_ensemble,
    measurement_entropy,
    observable,
    overlap_table,
)

IDENTITY_TOL = 1e-9
LOCALITY_TOL = 1e-10

MEASURED, MEMORY = 0, 1


@dataclass(frozen=True)
class BoundReport:
    lhs: float
    u1: float
    u2: float
    delta1: float
    delta2: float
    mu_bound: float
    berta_no_memory: float
    h_a: float
    mutual_info: float
    holevo_m1: float
    holevo_m2: float
    h_m1: float
    h_m2: float
    c1: float
    params: HorizonParams | None
    state_label: str

    @property
    def q_d(self) -> float | None:
        return None if self.params is None else dilation_angle(self.params)

    def as_dict(self) -> dict:
        out = {f.name: getattr(self, f.name) for f in fields(self)}
        out["params"] = None if self.params is None else asdict(self.params)
        out["q_d"] = self.q_d
        return out


def conditional_measurement_entropy(rho_ab: DensityMatrix, basis: ProjectiveBasis) -> float:
    """H(M|B) from the post-measurement classical-quantum state."""
    ens = measure_ensemble(rho_ab, basis, MEASURED)
    return conditional_entropy(classical_quantum_state(ens, basis, MEASURED), condition_on=MEMORY)


def lhs_uncertainty(rho_ab: DensityMatrix, b1: ProjectiveBasis, b2: ProjectiveBasis) -> float:
    return conditional_measurement_entropy(rho_ab, b1) + conditional_measurement_entropy(rho_ab, b2)


def mu_bound(b1: ProjectiveBasis, b2: ProjectiveBasis) -> float:
    return overlap_table(b1, b2).incompatibility


def berta_no_memory(rho_a: DensityMatrix, b1: ProjectiveBasis, b2: ProjectiveBasis) -> float:
    return mu_bound(b1, b2) + von_neumann_entropy(rho_a)


def u1_bound(rho_ab: DensityMatrix, b1: ProjectiveBasis, b2: ProjectiveBasis) -> float:
    rho_a = partial_trace(rho_ab, [MEASURED])
    return berta_no_memory(rho_a, b1, b2) - mutual_information(rho_ab)


def u2_bound(rho_ab: DensityMatrix, b1: ProjectiveBasis, b2: ProjectiveBasis) -> float:
    rho_a = partial_trace(rho_ab, [MEASURED])
    return (berta_no_memory(rho_a, b1, b2)
            - holevo_quantity(rho_ab, b1, MEASURED)
            - holevo_quantity(rho_ab, b2, MEASURED))


def delta2(rho_a: DensityMatrix, b1: ProjectiveBasis, b2: ProjectiveBasis) -> float:
    """Gap between the uncertainty and the Holevo bound, computed from the measured system alone."""
    return (measurement_entropy(rho_a, b1) + measurement_entropy(rho_a, b2)
            - berta_no_memory(rho_a, b1, b2))


def _check(name: str, a: float, b: float, tol: float) -> None:
    if not abs(a - b) <= tol:
        raise ConsistencyError(f"{name}: {a!r} != {b!r} (|diff| = {abs(a - b):.3e} > {tol:g})")


def full_report(
    state_label: str,
    rho_ab: DensityMatrix,
    b1: ProjectiveBasis,
    b2: ProjectiveBasis,
    params: HorizonParams | None = None,
    reference_marginal: DensityMatrix | None = None,
    tol: float = IDENTITY_TOL,
) -> BoundReport:
    """Every uncertainty quantity for one state, cross-checked before returning.

    ``lhs`` is computed from the classical-quantum states and compared with
    H(M1) + H(M2) - J(B|M1) - J(B|M2). If ``reference_marginal`` is given the
    measured system's marginal must match it (a transformation of the memory
    cannot touch it). Any mismatch raises :class:`ConsistencyError`.
    """
    rho_a = partial_trace(rho_ab, [MEASURED])
    if reference_marginal is not None:
        dev = float(np.max(np.abs(rho_a.matrix - reference_marginal.matrix)))
        if dev > LOCALITY_TOL:
            raise ConsistencyError(f"measured-system marginal changed by {dev:.3e}")

    table = overlap_table(b1, b2)
    c1 = table.c1
    mu = table.incompatibility
    h_a = von_neumann_entropy(rho_a)
    h_m1 = measurement_entropy(rho_a, b1)
    h_m2 = measurement_entropy(rho_a, b2)
    mi = mutual_information(rho_ab)
    j1 = holevo_quantity(rho_ab, b1, MEASURED)
    j2 = holevo_quantity(rho_ab, b2, MEASURED)

    lhs = lhs_uncertainty(rho_ab, b1, b2)
    _check("two-route lhs", lhs, h_m1 + h_m2 - j1 - j2, tol)

    u1 = mu + h_a - mi
    u2 = mu + h_a - j1 - j2
    gap2 = lhs - u2
    _check("memory-free delta2", gap2, h_m1 + h_m2 - mu - h_a, tol)

    return BoundReport(
        lhs=lhs, u1=u1, u2=u2, delta1=lhs - u1, delta2=gap2,
        mu_bound=mu, berta_no_memory=mu + h_a, h_a=h_a, mutual_info=mi,
        holevo_m1=j1, holevo_m2=j2, h_m1=h_m1, h_m2=h_m2, c1=c1,
        params=params, state_label=state_label,
    )


def bases_for(labels: Sequence[str]) -> tuple[ProjectiveBasis, ProjectiveBasis]:
    first, second = labels
    return eigenbasis(observable(first)), eigenbasis(observable(second))


def evaluate(
    state_label: str,
    params: HorizonParams,
    bases: Sequence[str] = ("x", "y"),
    tol: float = IDENTITY_TOL,
) -> BoundReport:
    """Report for an example state whose memory mode hovers at ``params``."""
    rho0 = example_state(state_label)
    rho = transform_memory(rho0, MEMORY, params)
    b1, b2 = bases_for(bases)
    return full_report(state_label, rho, b1, b2, params,
                       reference_marginal=partial_trace(rho0, [MEASURED]), tol=tol)


def r0_grid(r0_min: float, r0_max: float, steps: int) -> np.ndarray:
    if steps == 1:
        return np.array([float(r0_min)])
    return np.linspace(r0_min, r0_max, steps)


def sweep(
    state_label: str,
    omegas: Sequence[float],
    r0_values: Sequence[float],
    bases: Sequence[str] = ("x", "y"),
    tol: float = IDENTITY_TOL,
) -> list[BoundReport]:
    """Reports ordered by (Omega, R0), both ascending."""
    return [evaluate(state_label, HorizonParams(float(om), float(r0)), bases, tol)
            for om in sorted(omegas) for r0 in sorted(r0_values)]

