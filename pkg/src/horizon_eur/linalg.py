"""Dense complex linear algebra for small density matrices and kets.

Composite systems use row-major indexing with the left factor varying
slowest, i.e. ``|i>|j>`` with factor dims ``(d0, d1)`` sits at ``i * d1 + j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Sequence, Union

import numpy as np

from .errors import NonIsometryError, NotPositiveSemidefiniteError, PreconditionError

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
NORM_TOL = 1e-12
PSD_CLAMP = 1e-10
ISOMETRY_TOL = 1e-12


def _as_dims(dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise PreconditionError(f"factor dims must be positive integers, got {dims}")
    return dims


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized ket on a tensor product of factors."""

    amplitudes: np.ndarray
    factor_dims: tuple[int, ...]

    def __post_init__(self):
        dims = _as_dims(self.factor_dims)
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != int(np.prod(dims)):
            raise PreconditionError(
                f"{amps.size} amplitudes do not match factor dims {dims}"
            )
        norm = np.vdot(amps, amps).real
        if abs(norm - 1.0) > NORM_TOL:
            raise PreconditionError(f"state vector has squared norm {norm!r}, expected 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "factor_dims", dims)

    @classmethod
    def normalized(cls, amplitudes, factor_dims: Sequence[int]) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise PreconditionError("cannot normalize the zero vector")
        return cls(amps / norm, factor_dims)

    @classmethod
    def basis(cls, levels: Sequence[int], factor_dims: Sequence[int]) -> "StateVector":
        """Product basis ket ``|levels[0]>|levels[1]>...``."""
        dims = _as_dims(factor_dims)
        if len(levels) != len(dims):
            raise PreconditionError("one level per factor is required")
        amps = np.zeros(int(np.prod(dims)), dtype=complex)
        amps[np.ravel_multi_index(tuple(levels), dims)] = 1.0
        return cls(amps, dims)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()), self.factor_dims)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite matrix with subsystem bookkeeping.

    Validation happens on construction. Eigenvalues in ``[-1e-10, 0)`` are
    accepted as numerical noise; anything more negative raises
    :class:`NotPositiveSemidefiniteError`.
    """

    matrix: np.ndarray
    factor_dims: tuple[int, ...]

    def __post_init__(self):
        dims = _as_dims(self.factor_dims)
        m = np.array(self.matrix, dtype=complex)
        n = int(np.prod(dims))
        if m.shape != (n, n):
            raise PreconditionError(f"matrix shape {m.shape} does not match factor dims {dims}")
        herm_err = np.max(np.abs(m - m.conj().T))
        if herm_err > HERMITIAN_TOL:
            raise PreconditionError(f"matrix is not Hermitian (max deviation {herm_err:.3e})")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise PreconditionError(f"density matrix has trace {tr!r}, expected 1")
        lowest = np.linalg.eigvalsh(m)[0]
        if lowest < -PSD_CLAMP:
            raise NotPositiveSemidefiniteError(
                f"density matrix is not positive semidefinite (eigenvalue {lowest:.3e})"
            )
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "factor_dims", dims)

    @classmethod
    def from_unnormalized(cls, matrix, factor_dims: Sequence[int]) -> "DensityMatrix":
        """Hermitize and rescale to unit trace before validating."""
        m = np.asarray(matrix, dtype=complex)
        m = 0.5 * (m + m.conj().T)
        return cls(m / np.trace(m).real, factor_dims)

    @classmethod
    def maximally_mixed(cls, factor_dims: Sequence[int]) -> "DensityMatrix":
        dims = _as_dims(factor_dims)
        n = int(np.prod(dims))
        return cls(np.eye(n) / n, dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


State = Union[StateVector, DensityMatrix]


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenpairs in descending eigenvalue order; ``eigenvectors[:, k]`` pairs with ``eigenvalues[k]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def tensor_product(a: State, b: State) -> State:
    """Kronecker product, left operand slowest."""
    dims = a.factor_dims + b.factor_dims
    if isinstance(a, StateVector) and isinstance(b, StateVector):
        return StateVector(np.kron(a.amplitudes, b.amplitudes), dims)
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix(np.kron(a.matrix, b.matrix), dims)
    raise PreconditionError("tensor_product operands must be of the same kind")


def tensor_all(*states: State) -> State:
    return reduce(tensor_product, states)


def _check_keep(keep, n_factors: int) -> list[int]:
    keep = sorted(set(int(k) for k in keep))
    if not keep or len(keep) >= n_factors or keep[0] < 0 or keep[-1] >= n_factors:
        raise PreconditionError(
            f"keep must be a nonempty proper subset of factors 0..{n_factors - 1}, got {keep}"
        )
    return keep


def partial_trace(rho: State, keep) -> DensityMatrix:
    """Reduce ``rho`` onto the factors listed in ``keep`` (order of kept factors is preserved)."""
    if isinstance(keep, (int, np.integer)):
        keep = [keep]
    dims = rho.factor_dims
    keep = _check_keep(keep, len(dims))
    drop = [k for k in range(len(dims)) if k not in keep]
    dk = int(np.prod([dims[k] for k in keep]))
    dd = int(np.prod([dims[k] for k in drop]))

    if isinstance(rho, StateVector):
        psi = rho.amplitudes.reshape(dims).transpose(keep + drop).reshape(dk, dd)
        reduced = psi @ psi.conj().T
    else:
        n = len(dims)
        t = rho.matrix.reshape(dims + dims)
        perm = keep + drop + [n + k for k in keep] + [n + k for k in drop]
        t = t.transpose(perm).reshape(dk, dd, dk, dd)
        reduced = np.einsum("ajbj->ab", t)
    return DensityMatrix(reduced, [dims[k] for k in keep])


def _canonical_phase(vectors: np.ndarray) -> np.ndarray:
    # largest-magnitude component made real positive; first index wins ties
    out = vectors.copy()
    for k in range(out.shape[1]):
        col = out[:, k]
        mags = np.abs(col)
        idx = int(np.argmax(mags >= mags.max() - 1e-12))
        out[:, k] = col * (abs(col[idx]) / col[idx])
    return out


def _canonical_subspace(vectors: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis of span(vectors): Gram-Schmidt on projected unit vectors e_0, e_1, ..."""
    n, k = vectors.shape
    proj = vectors @ vectors.conj().T
    basis: list[np.ndarray] = []
    for i in range(n):
        v = proj[:, i].copy()
        for b in basis:
            v -= np.vdot(b, v) * b
        norm = np.linalg.norm(v)
        if norm > 1e-6:
            basis.append(v / norm)
            if len(basis) == k:
                break
    return np.column_stack(basis)


def hermitian_spectrum(m, density: bool | None = None, degeneracy_tol: float = 1e-9) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix with a reproducible eigenvector convention.

    Parameters
    ----------
    m : DensityMatrix or array_like
        Hermitian matrix. A :class:`DensityMatrix` implies ``density=True``.
    density : bool, optional
        Clamp eigenvalues in ``[-1e-10, 0)`` to zero and reject anything lower.
    degeneracy_tol : float
        Eigenvalues closer than this share a degenerate subspace, whose basis is
        rebuilt by Gram-Schmidt in input order so the result does not depend on
        the LAPACK driver.

    Returns
    -------
    Spectrum
        Eigenvalues sorted descending; each eigenvector's largest-magnitude
        component is real and positive.
    """
    if isinstance(m, DensityMatrix):
        density = True if density is None else density
        m = m.matrix
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise PreconditionError(f"expected a square matrix, got shape {m.shape}")
    if np.max(np.abs(m - m.conj().T), initial=0.0) > 1e-10:
        raise PreconditionError("matrix is not Hermitian within 1e-10")

    w, v = np.linalg.eigh(m)
    w, v = w[::-1].copy(), v[:, ::-1].copy()

    if density:
        if w[-1] < -PSD_CLAMP:
            raise NotPositiveSemidefiniteError(
                f"not positive semidefinite: eigenvalue {w[-1]:.3e} below {-PSD_CLAMP:g}"
            )
        w[w < 0] = 0.0

    start = 0
    while start < len(w):
        stop = start + 1
        while stop < len(w) and abs(w[stop - 1] - w[stop]) <= degeneracy_tol:
            stop += 1
        if stop - start > 1:
            v[:, start:stop] = _canonical_subspace(v[:, start:stop])
        start = stop

    return Spectrum(w, _canonical_phase(v))


def _embed(op: np.ndarray, dims: tuple[int, ...], target: int) -> np.ndarray:
    left = int(np.prod(dims[:target]))
    right = int(np.prod(dims[target + 1:]))
    return np.kron(np.kron(np.eye(left), op), np.eye(right))


def check_isometry(v: np.ndarray, domain: Sequence[int] | None = None, tol: float = ISOMETRY_TOL) -> None:
    cols = v if domain is None else v[:, list(domain)]
    err = np.max(np.abs(cols.conj().T @ cols - np.eye(cols.shape[1])))
    if err > tol:
        raise NonIsometryError(f"map is not an isometry on its domain (max |V^dag V - I| = {err:.3e})")


def apply_isometry(
    state: State,
    isometry,
    target: int,
    out_dims: Sequence[int] | None = None,
    domain: Sequence[int] | None = None,
) -> State:
    """Apply ``V: C^d_in -> C^d_out`` to one factor of ``state``.

    ``out_dims`` splits the output space into several factors that replace
    ``target`` in place. With ``domain`` given, V only needs to be isometric on
    those input levels and ``state`` must have no weight outside them.
    """
    v = np.asarray(isometry, dtype=complex)
    dims = state.factor_dims
    if not 0 <= target < len(dims):
        raise PreconditionError(f"target factor {target} out of range for dims {dims}")
    if v.ndim != 2 or v.shape[1] != dims[target]:
        raise PreconditionError(
            f"isometry input dim {v.shape[-1]} does not match factor dim {dims[target]}"
        )
    out_dims = (v.shape[0],) if out_dims is None else _as_dims(out_dims)
    if int(np.prod(out_dims)) != v.shape[0]:
        raise PreconditionError(f"out_dims {out_dims} do not multiply to {v.shape[0]}")
    check_isometry(v, domain)

    if domain is not None:
        outside = [i for i in range(dims[target]) if i not in set(domain)]
        if outside:
            weight = level_weight(state, target, outside)
            if weight > NORM_TOL:
                raise PreconditionError(
                    f"state has weight {weight:.3e} on levels {outside} of factor {target}, "
                    "outside the isometry's domain"
                )

    new_dims = dims[:target] + tuple(out_dims) + dims[target + 1:]
    full = _embed(v, dims, target)
    if isinstance(state, StateVector):
        return StateVector(full @ state.amplitudes, new_dims)
    return DensityMatrix(full @ state.matrix @ full.conj().T, new_dims)


def level_weight(state: State, factor: int, levels: Sequence[int]) -> float:
    """Total probability that ``factor`` is found in one of ``levels``."""
    dims = state.factor_dims
    if len(dims) == 1:
        diag = (np.abs(state.amplitudes) ** 2 if isinstance(state, StateVector)
                else np.diag(state.matrix).real)
    else:
        diag = np.diag(partial_trace(state, [factor]).matrix).real
    return float(sum(diag[i] for i in levels))


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_isometry(dim_in: int, dim_out: int, rng: np.random.Generator) -> np.ndarray:
    return random_unitary(dim_out, rng)[:, :dim_in]


def random_density_matrix(
    factor_dims: Sequence[int], rng: np.random.Generator, rank: int | None = None
) -> DensityMatrix:
    dims = _as_dims(factor_dims)
    n = int(np.prod(dims))
    rank = n if rank is None else rank
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    return DensityMatrix.from_unnormalized(g @ g.conj().T, dims)


def random_state_vector(factor_dims: Sequence[int], rng: np.random.Generator) -> StateVector:
    dims = _as_dims(factor_dims)
    n = int(np.prod(dims))
    return StateVector.normalized(rng.standard_normal(n) + 1j * rng.standard_normal(n), dims)
