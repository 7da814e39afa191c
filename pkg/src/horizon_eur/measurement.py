"""Spin observables, projective measurements and the Holevo quantity.

Measurements act on one factor of a bipartite state (the measured system,
factor 0 by default); the other factor plays the role of the quantum memory.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .entropy import shannon_entropy, von_neumann_entropy
from .errors import PreconditionError
from .linalg import DensityMatrix, hermitian_spectrum, partial_trace

ZERO_PROB = 1e-14


@dataclass(frozen=True, eq=False)
class Observable:
    name: str
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise PreconditionError(f"observable {self.name!r} must be square")
        if np.max(np.abs(m - m.conj().T)) > 1e-12:
            raise PreconditionError(f"observable {self.name!r} is not Hermitian")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True, eq=False)
class ProjectiveBasis:
    """Orthonormal basis stored as the columns of ``vectors``."""

    vectors: np.ndarray
    source: str = ""

    def __post_init__(self):
        v = np.asarray(self.vectors, dtype=complex)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise PreconditionError("a projective basis needs d vectors of dimension d")
        err = np.max(np.abs(v.conj().T @ v - np.eye(v.shape[0])))
        if err > 1e-10:
            raise PreconditionError(f"basis vectors are not orthonormal (error {err:.3e})")
        v.setflags(write=False)
        object.__setattr__(self, "vectors", v)

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def __len__(self) -> int:
        return self.dim

    def __getitem__(self, j: int) -> np.ndarray:
        return self.vectors[:, j]


@dataclass(frozen=True, eq=False)
class OverlapTable:
    c: np.ndarray
    c1: float

    @property
    def incompatibility(self) -> float:
        """-log2 c1, the memory-free Maassen-Uffink bound."""
        return float(-np.log2(self.c1))


@dataclass(frozen=True, eq=False)
class MeasuredEnsemble:
    """Outcome probabilities and normalized post-measurement memory states.

    Outcomes with probability below 1e-14 hold a maximally mixed placeholder
    and are flagged ``False`` in ``supported``.
    """

    outcome_probs: np.ndarray
    conditional_states: tuple[DensityMatrix, ...]
    supported: tuple[bool, ...]

    def average_state(self) -> np.ndarray:
        return sum(p * s.matrix for p, s, ok in
                   zip(self.outcome_probs, self.conditional_states, self.supported) if ok)


def spin_observables() -> tuple[Observable, Observable, Observable]:
    """Spin-3/2 operators S_x, S_y, S_z on the four-level Dirac mode."""
    r3 = np.sqrt(3.0)
    sx = 0.5 * np.array(
        [[0, r3, 0, 0],
         [r3, 0, 2, 0],
         [0, 2, 0, r3],
         [0, 0, r3, 0]], dtype=complex)
    sy = 0.5 * np.array(
        [[0, -1j * r3, 0, 0],
         [1j * r3, 0, -2j, 0],
         [0, 2j, 0, -1j * r3],
         [0, 0, 1j * r3, 0]], dtype=complex)
    sz = 0.5 * np.diag([3.0, 1.0, -1.0, -3.0]).astype(complex)
    return Observable("x", sx), Observable("y", sy), Observable("z", sz)


def observable(label: str) -> Observable:
    for obs in spin_observables():
        if obs.name == label:
            return obs
    raise PreconditionError(f"unknown observable {label!r}; expected one of x, y, z")


def eigenbasis(obs: Observable) -> ProjectiveBasis:
    """Eigenvectors ordered by descending eigenvalue."""
    return ProjectiveBasis(hermitian_spectrum(obs.matrix, density=False).eigenvectors, obs.name)


def computational_basis(dim: int) -> ProjectiveBasis:
    return ProjectiveBasis(np.eye(dim, dtype=complex), "computational")


def overlap_table(b1: ProjectiveBasis, b2: ProjectiveBasis) -> OverlapTable:
    if b1.dim != b2.dim:
        raise PreconditionError(f"basis dimensions differ: {b1.dim} vs {b2.dim}")
    c = np.abs(b1.vectors.conj().T @ b2.vectors) ** 2
    return OverlapTable(c, float(c.max()))


def outcome_distribution(rho_a: DensityMatrix, basis: ProjectiveBasis) -> np.ndarray:
    """p_j = <u_j|rho|u_j> on a single system."""
    if rho_a.dim != basis.dim:
        raise PreconditionError("basis and state dimensions differ")
    p = np.einsum("ij,ik,kj->j", basis.vectors.conj(), rho_a.matrix, basis.vectors).real
    return np.clip(p, 0.0, None)


def measurement_entropy(rho_a: DensityMatrix, basis: ProjectiveBasis) -> float:
    """Shannon entropy H(M) of the outcome distribution."""
    return shannon_entropy(outcome_distribution(rho_a, basis))


def _split(rho_ab: DensityMatrix, basis: ProjectiveBasis, measured: int) -> tuple[int, int, int]:
    if len(rho_ab.factor_dims) != 2:
        raise PreconditionError(f"expected a bipartite state, got dims {rho_ab.factor_dims}")
    if measured not in (0, 1):
        raise PreconditionError("measured must be 0 or 1")
    d_meas = rho_ab.factor_dims[measured]
    if basis.dim != d_meas:
        raise PreconditionError(
            f"basis dimension {basis.dim} does not match measured factor dimension {d_meas}"
        )
    return rho_ab.factor_dims[0], rho_ab.factor_dims[1], 1 - measured


def _blocks(rho_ab: DensityMatrix, basis: ProjectiveBasis, measured: int) -> list[np.ndarray]:
    """Unnormalized memory blocks <u_j| rho_AB |u_j> for each outcome."""
    da, db, _ = _split(rho_ab, basis, measured)
    t = rho_ab.matrix.reshape(da, db, da, db)
    spec = "a,abcd,c->bd" if measured == 0 else "b,abcd,d->ac"
    return [np.einsum(spec, u.conj(), t, u) for u in basis.vectors.T]


def measure_ensemble(rho_ab: DensityMatrix, basis: ProjectiveBasis, measured: int = 0) -> MeasuredEnsemble:
    _, _, memory = _split(rho_ab, basis, measured)
    d_mem = rho_ab.factor_dims[memory]
    probs, states, supported = [], [], []
    for block in _blocks(rho_ab, basis, measured):
        p = float(np.trace(block).real)
        if p < ZERO_PROB:
            probs.append(max(p, 0.0))
            states.append(DensityMatrix.maximally_mixed([d_mem]))
            supported.append(False)
        else:
            probs.append(p)
            states.append(DensityMatrix.from_unnormalized(block, [d_mem]))
            supported.append(True)
    return MeasuredEnsemble(np.array(probs), tuple(states), tuple(supported))


def classical_quantum_state(ens: MeasuredEnsemble, basis: ProjectiveBasis, measured: int = 0) -> DensityMatrix:
    """sum_j p_j |u_j><u_j| (x) rho_j, with the measured register kept in its original slot."""
    d_mem = ens.conditional_states[0].dim
    out = np.zeros((basis.dim * d_mem,) * 2, dtype=complex)
    for j, (p, state, ok) in enumerate(zip(ens.outcome_probs, ens.conditional_states, ens.supported)):
        if not ok:
            continue
        proj = np.outer(basis[j], basis[j].conj())
        out += p * (np.kron(proj, state.matrix) if measured == 0 else np.kron(state.matrix, proj))
    dims = (basis.dim, d_mem) if measured == 0 else (d_mem, basis.dim)
    return DensityMatrix.from_unnormalized(out, dims)


def dephase(rho_ab: DensityMatrix, basis: ProjectiveBasis, measured: int = 0) -> DensityMatrix:
    """Measurement channel sum_j (P_j (x) I) rho (P_j (x) I) applied directly to the joint state."""
    da, db, memory = _split(rho_ab, basis, measured)
    eye = np.eye(rho_ab.factor_dims[memory])
    out = np.zeros_like(rho_ab.matrix)
    for u in basis.vectors.T:
        proj = np.outer(u, u.conj())
        op = np.kron(proj, eye) if measured == 0 else np.kron(eye, proj)
        out += op @ rho_ab.matrix @ op
    return DensityMatrix.from_unnormalized(out, rho_ab.factor_dims)


def holevo_quantity(rho_ab: DensityMatrix, basis: ProjectiveBasis, measured: int = 0) -> float:
    """Information about the outcomes accessible from the memory: H(B) - sum_j p_j H(rho_{B|j})."""
    _, _, memory = _split(rho_ab, basis, measured)
    h_b = von_neumann_entropy(partial_trace(rho_ab, [memory]))
    ens = measure_ensemble(rho_ab, basis, measured)
    avg = sum(p * von_neumann_entropy(s)
              for p, s, ok in zip(ens.outcome_probs, ens.conditional_states, ens.supported) if ok)
    return float(h_b - avg)
