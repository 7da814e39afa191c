import math
import warnings

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from horizon_eur.entropy import mutual_information
from horizon_eur.errors import DomainError, PreconditionError, UnsupportedPairStateError
from horizon_eur.horizon import (
    DiracLevel,
    HorizonParams,
    RindlerRangeWarning,
    dilation_angle,
    example_state,
    mode_isometry,
    state_bell_like,
    state_w,
    state_w_traced,
    transform_memory,
    transform_memory_at_angle,
)
from horizon_eur.linalg import (
    DensityMatrix,
    StateVector,
    hermitian_spectrum,
    partial_trace,
    random_density_matrix,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)

# mpmath at 40 digits: atan(exp(-5 sqrt(1 - 1/1.05)))
DILATION_10_105 = 0.32401420273618069894


def _no_pair_state(rng, extra_dims=()):
    rho = random_density_matrix([4, 3, *extra_dims], rng).matrix
    n_extra = int(np.prod(extra_dims)) if extra_dims else 1
    t = rho.reshape(4, 3, n_extra, 4, 3, n_extra)
    full = np.zeros((4, 4, n_extra, 4, 4, n_extra), dtype=complex)
    full[:, :3, :, :, :3, :] = t
    n = 16 * n_extra
    return DensityMatrix(full.reshape(n, n), [4, 4, *extra_dims])


class TestParams:
    def test_physical_conversion(self):
        p = HorizonParams.from_physical(mass=2.0, frequency=0.5, radius=4.2)
        assert p.omega_ratio == pytest.approx(8 * math.pi * 0.5 * 2.0, rel=1e-15)
        assert p.r_ratio == pytest.approx(1.05, rel=1e-15)
        assert p.hawking_temperature == pytest.approx(1 / (16 * math.pi))
        assert p.omega_ratio == pytest.approx(p.frequency / p.hawking_temperature)

    def test_domain(self):
        with pytest.raises(DomainError, match="R0 must be >= 1"):
            HorizonParams(10, 0.9)
        with pytest.raises(DomainError):
            HorizonParams(0, 1.01)
        with pytest.raises(DomainError):
            HorizonParams(10, float("nan"))

    def test_inconsistent_physical_inputs(self):
        with pytest.raises(PreconditionError):
            HorizonParams(10, 1.01, mass=1.0, frequency=1.0, radius=2.02)

    def test_warning_outside_near_horizon_range(self):
        with pytest.warns(RindlerRangeWarning):
            HorizonParams(10, 1.2)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            HorizonParams(10, 1.05)


class TestDilationAngle:
    def test_horizon(self):
        for om in (0.1, 10, 30, 1e4):
            assert dilation_angle(HorizonParams(om, 1.0)) == pytest.approx(math.pi / 4, abs=1e-12)

    def test_large_omega_limit(self):
        assert dilation_angle(HorizonParams(1e4, 1.05)) < 1e-300

    def test_against_high_precision(self):
        mp.mp.dps = 40
        ref = mp.atan(mp.exp(-mp.mpf(10) / 2 * mp.sqrt(1 - 1 / mp.mpf("1.05"))))
        assert float(ref) == pytest.approx(DILATION_10_105, abs=1e-18)
        assert dilation_angle(HorizonParams(10, 1.05)) == pytest.approx(DILATION_10_105, abs=1e-14)

    def test_monotone(self):
        r0s = np.linspace(1.0, 1.05, 30)
        for om in (1.0, 10.0, 30.0):
            qs = [dilation_angle(HorizonParams(om, r)) for r in r0s]
            assert all(b < a for a, b in zip(qs, qs[1:]))
        for r0 in (1.001, 1.02, 1.05):
            qs = [dilation_angle(HorizonParams(om, r0)) for om in np.linspace(0.5, 50, 30)]
            assert all(b < a for a, b in zip(qs, qs[1:]))


class TestModeIsometry:
    def test_zero_angle_is_embedding(self):
        v = mode_isometry(0.0).matrix
        for b in (DiracLevel.VACUUM, DiracLevel.UP, DiracLevel.DOWN):
            expected = np.zeros(16)
            expected[int(b) * 4] = 1
            assert np.array_equal(v[:, b], expected)

    def test_horizon_vacuum_column(self):
        v = mode_isometry(math.pi / 4).matrix[:, DiracLevel.VACUUM]
        idx = {"00": 0, "ud": 1 * 4 + 2, "du": 2 * 4 + 1, "pp": 15}
        for k in idx.values():
            assert v[k] == pytest.approx(0.5, abs=1e-15)
        assert np.count_nonzero(v) == 4

    def test_printed_signs(self):
        q = 0.4
        v = mode_isometry(q).matrix
        assert v[3 * 4 + 1, DiracLevel.UP] == pytest.approx(math.sin(q))
        assert v[3 * 4 + 2, DiracLevel.DOWN] == pytest.approx(-math.sin(q))
        assert v[1 * 4 + 2, 0] == v[2 * 4 + 1, 0]

    def test_pair_column_is_unsupported(self):
        bmap = mode_isometry(0.3)
        assert DiracLevel.PAIR not in bmap.supported
        assert not np.any(bmap.matrix[:, DiracLevel.PAIR])

    @pytest.mark.parametrize("q", np.linspace(0, math.pi / 4, 50))
    def test_columns_orthonormal(self, q):
        v = mode_isometry(q).matrix[:, :3]
        assert np.max(np.abs(v.conj().T @ v - np.eye(3))) <= 1e-12

    def test_range(self):
        with pytest.raises(DomainError):
            mode_isometry(1.0)
        with pytest.raises(DomainError):
            mode_isometry(-0.1)


class TestTransformMemory:
    def test_zero_angle_is_identity(self, rng):
        rho = _no_pair_state(rng)
        assert np.max(np.abs(transform_memory_at_angle(rho, 1, 0.0).matrix - rho.matrix)) <= 1e-12

    def test_bell_like_horizon_marginal(self):
        out = transform_memory(state_bell_like(), 1, HorizonParams(10, 1.0))
        assert out.factor_dims == (4, 4)
        assert abs(out.trace - 1) < 1e-12
        assert np.allclose(partial_trace(out, [0]).matrix, np.diag([0.5, 0.5, 0, 0]), atol=1e-12)

    def test_pair_support_rejected(self):
        state = StateVector.basis([0, DiracLevel.PAIR], [4, 4])
        with pytest.raises(UnsupportedPairStateError, match="unsupported pair-state input"):
            transform_memory(state, 1, HorizonParams(10, 1.01))

    def test_non_mode_factor_rejected(self):
        with pytest.raises(PreconditionError):
            transform_memory_at_angle(DensityMatrix.maximally_mixed([4, 2]), 1, 0.2)

    def test_vector_and_density_inputs_agree(self):
        psi = state_bell_like()
        a = transform_memory_at_angle(psi, 1, 0.5)
        b = transform_memory_at_angle(psi.density(), 1, 0.5)
        assert np.max(np.abs(a.matrix - b.matrix)) < 1e-14

    def test_trace_then_transform_commutes(self):
        q = 0.37
        w = state_w().density()
        trace_first = transform_memory_at_angle(partial_trace(w, [0, 1]), 1, q)
        transform_first = partial_trace(transform_memory_at_angle(w, 1, q), [0, 1])
        assert np.max(np.abs(trace_first.matrix - transform_first.matrix)) < 1e-14

    @given(seeds, st.floats(0, math.pi / 4))
    @settings(max_examples=40, deadline=None)
    def test_locality(self, seed, q):
        rng = np.random.default_rng(seed)
        rho = _no_pair_state(rng)
        out = transform_memory_at_angle(rho, 1, q)
        assert abs(out.trace - 1) <= 1e-12
        assert np.max(np.abs(partial_trace(out, [0]).matrix - partial_trace(rho, [0]).matrix)) <= 1e-10

    def test_middle_factor_of_three(self, rng):
        rho = _no_pair_state(rng, extra_dims=(2,))
        out = transform_memory_at_angle(rho, 1, 0.6)
        assert out.factor_dims == (4, 4, 2)
        assert np.allclose(partial_trace(out, [0, 2]).matrix, partial_trace(rho, [0, 2]).matrix, atol=1e-12)

    @pytest.mark.parametrize("omega", [10.0, 30.0])
    def test_bell_correlation_degrades_toward_horizon(self, omega):
        mis = [mutual_information(transform_memory(state_bell_like(), 1, HorizonParams(omega, r)))
               for r in np.linspace(1.0, 1.05, 30)]
        assert all(b >= a - 1e-9 for a, b in zip(mis, mis[1:]))


class TestExampleStates:
    def test_bell_amplitudes(self):
        amps = state_bell_like().amplitudes
        h = 1 / math.sqrt(2)
        assert amps[0] == pytest.approx(h, abs=1e-16)
        assert amps[DiracLevel.UP * 4 + DiracLevel.DOWN] == pytest.approx(h, abs=1e-16)
        assert np.count_nonzero(amps) == 2

    def test_w_traced(self):
        rho = state_w_traced()
        psi_plus = np.zeros(16)
        psi_plus[1] = psi_plus[4] = 1 / math.sqrt(2)
        vac = np.zeros(16)
        vac[0] = 1
        expected = np.outer(vac, vac) / 3 + 2 / 3 * np.outer(psi_plus, psi_plus)
        assert np.allclose(rho.matrix, expected, atol=1e-15)
        assert np.allclose(hermitian_spectrum(rho).eigenvalues, [2 / 3, 1 / 3] + [0] * 14, atol=1e-12)
        assert np.allclose(hermitian_spectrum(partial_trace(rho, [0])).eigenvalues, [2 / 3, 1 / 3, 0, 0], atol=1e-12)
        assert abs(rho.trace - 1) < 1e-15

    def test_registry(self):
        assert example_state("bell").factor_dims == (4, 4)
        with pytest.raises(PreconditionError):
            example_state("ghz")
