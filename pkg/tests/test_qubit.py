"""Two-level primitives: Pauli construction, spectral decomposition with
the deterministic gauge, and the exact SU(2) step."""

import numpy as np
import pytest
from scipy.linalg import expm

from sta_workbench.exceptions import DegenerateSpectrumError, InvalidFieldError
from sta_workbench.qubit import (
    DOWN,
    UP,
    align_phase,
    bloch_vector,
    chronological_product,
    fix_gauge,
    hamiltonian_from_field,
    reference_eigenstate,
    spectral_decompose,
    su2_matrices,
    su2_matrix,
    su2_step,
    validate_density_matrix,
    validate_pure_state,
)


class TestHamiltonian:
    def test_z_field_is_diagonal(self):
        w = 0.11
        h = hamiltonian_from_field([0.0, 0.0, w])
        np.testing.assert_allclose(h, np.diag([w / 2, -w / 2]), atol=0)

    def test_zero_field_is_zero_matrix(self):
        np.testing.assert_array_equal(hamiltonian_from_field([0, 0, 0]), np.zeros((2, 2)))

    def test_x_field_is_off_diagonal(self):
        w = 0.07
        h = hamiltonian_from_field([w, 0.0, 0.0])
        np.testing.assert_allclose(h, np.array([[0, w / 2], [w / 2, 0]]), atol=0)

    def test_traceless_hermitian_for_random_fields(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            h = hamiltonian_from_field(rng.normal(size=3))
            assert abs(np.trace(h)) == 0
            np.testing.assert_allclose(h, h.conj().T, atol=0)

    @pytest.mark.parametrize("bad", [[np.inf, 0, 0], [0, np.nan, 0], [1.0, 2.0]])
    def test_invalid_field_rejected(self, bad):
        with pytest.raises(InvalidFieldError):
            hamiltonian_from_field(bad)


class TestSpectralDecompose:
    def test_diagonal_case(self):
        w = 0.09
        eig = spectral_decompose(np.diag([w / 2, -w / 2]).astype(complex))
        assert eig.e_plus == pytest.approx(w / 2, abs=1e-15)
        assert eig.e_minus == pytest.approx(-w / 2, abs=1e-15)
        np.testing.assert_allclose(eig.psi_plus, UP, atol=1e-15)

    def test_x_case_equal_superposition(self):
        w = 0.05
        eig = spectral_decompose(hamiltonian_from_field([w, 0, 0]))
        np.testing.assert_allclose(eig.psi_plus, [1, 1] / np.sqrt(2), atol=1e-12)

    def test_tilted_field_matches_half_angle_closed_form(self):
        # independent closed form: (cos(theta/2), sin(theta/2) e^{i phi})
        theta = np.pi / 3
        eig = spectral_decompose(
            hamiltonian_from_field([0.1 * np.sin(theta), 0.0, 0.1 * np.cos(theta)])
        )
        np.testing.assert_allclose(
            eig.psi_plus, [np.cos(np.pi / 6), np.sin(np.pi / 6)], atol=1e-12
        )

    def test_thousand_random_fields(self):
        rng = np.random.default_rng(12345)
        for _ in range(1000):
            b = rng.normal(size=3) * 0.2
            if np.linalg.norm(b) < 1e-6:
                continue
            eig = spectral_decompose(hamiltonian_from_field(b))
            assert abs(eig.e_plus - 0.5 * np.linalg.norm(b)) < 1e-12
            assert abs(eig.e_plus + eig.e_minus) < 1e-12
            assert abs(np.vdot(eig.psi_plus, eig.psi_minus)) < 1e-12
            for psi in (eig.psi_plus, eig.psi_minus):
                main = psi[np.argmax(np.abs(psi))]
                assert main.real >= 0 and abs(main.imag) < 1e-12

    def test_eigen_equation_residual(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            b = rng.normal(size=3) * 0.1
            h = hamiltonian_from_field(b)
            eig = spectral_decompose(h)
            assert np.linalg.norm(h @ eig.psi_plus - eig.e_plus * eig.psi_plus) < 1e-12
            assert np.linalg.norm(h @ eig.psi_minus - eig.e_minus * eig.psi_minus) < 1e-12

    def test_degenerate_raises(self):
        with pytest.raises(DegenerateSpectrumError):
            spectral_decompose(np.zeros((2, 2), dtype=complex))

    def test_non_hermitian_rejected(self):
        with pytest.raises(ValueError, match="Hermitian"):
            spectral_decompose(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_traceful_rejected(self):
        with pytest.raises(ValueError, match="traceless"):
            spectral_decompose(np.eye(2, dtype=complex))


class TestReferenceEigenstate:
    def test_branches_are_field_eigenstates(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            theta = rng.uniform(0, np.pi)
            phi = rng.uniform(0, 2 * np.pi)
            w = rng.uniform(0.01, 0.3)
            b = w * np.array(
                [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)]
            )
            h = hamiltonian_from_field(b)
            up = reference_eigenstate(theta, phi, "up")
            down = reference_eigenstate(theta, phi, "down")
            assert np.linalg.norm(h @ up - (w / 2) * up) < 1e-14
            assert np.linalg.norm(h @ down + (w / 2) * down) < 1e-14

    def test_unknown_branch(self):
        with pytest.raises(ValueError):
            reference_eigenstate(0.1, 0.2, "sideways")


class TestSu2Step:
    def test_zero_field_is_identity(self):
        s = np.array([0.6, 0.8j])
        np.testing.assert_array_equal(su2_step([0, 0, 0], 1.7, s), s)

    def test_full_rotation_flips_spinor_sign(self):
        w = 0.3
        s = np.array([0.6, 0.8j])
        out = su2_step([0, 0, w], 2 * np.pi / w, s)
        np.testing.assert_allclose(out, -s, atol=1e-12)

    def test_pi_pulse_about_x(self):
        w = 0.25
        out = su2_step([w, 0, 0], np.pi / w, UP)
        np.testing.assert_allclose(out, [0, -1j], atol=1e-12)

    def test_nonpositive_dt_rejected(self):
        with pytest.raises(ValueError):
            su2_step([0.1, 0, 0], 0.0, UP)

    def test_matches_matrix_exponential(self):
        # composed piecewise-constant steps against scaling-and-squaring
        rng = np.random.default_rng(99)
        s = np.array([1.0, 0.0], dtype=complex)
        exact = s.copy()
        for _ in range(50):
            b = rng.normal(size=3) * 0.2
            dt = rng.uniform(0.01, 0.4)
            s = su2_step(b, dt, s)
            exact = expm(-1j * hamiltonian_from_field(b) * dt) @ exact
        np.testing.assert_allclose(s, exact, atol=1e-12)

    def test_batched_matches_single(self):
        rng = np.random.default_rng(4)
        bs = rng.normal(size=(40, 3)) * 0.3
        bs[5] = 0.0  # zero-field row must be the identity
        batch = su2_matrices(bs, 0.13)
        for row, b in zip(batch, bs):
            np.testing.assert_allclose(row, su2_matrix(b, 0.13), atol=1e-14)

    def test_norm_preserved_over_a_million_steps(self):
        rng = np.random.default_rng(11)
        fields = rng.normal(size=(1_000_000, 3)) * 0.2
        total = chronological_product(su2_matrices(fields, 0.01))
        s = total @ np.array([1.0, 0.0], dtype=complex)
        assert abs(np.linalg.norm(s) - 1.0) < 1e-10

    def test_product_ordering(self):
        rng = np.random.default_rng(21)
        mats = su2_matrices(rng.normal(size=(7, 3)), 0.3)
        sequential = np.eye(2, dtype=complex)
        for m in mats:
            sequential = m @ sequential
        np.testing.assert_allclose(chronological_product(mats), sequential, atol=1e-14)


class TestStatesAndGauge:
    def test_bloch_vectors(self):
        np.testing.assert_allclose(bloch_vector(UP), [0, 0, 1], atol=0)
        np.testing.assert_allclose(bloch_vector(DOWN), [0, 0, -1], atol=0)
        plus = np.array([1, 1]) / np.sqrt(2)
        np.testing.assert_allclose(bloch_vector(plus), [1, 0, 0], atol=1e-15)
        mixed = 0.5 * np.outer(UP, UP.conj()) + 0.5 * np.outer(DOWN, DOWN.conj())
        np.testing.assert_allclose(bloch_vector(mixed), [0, 0, 0], atol=0)

    def test_fix_gauge_tie_prefers_up_component(self):
        v = np.array([1j, -1j]) / np.sqrt(2)
        fixed = fix_gauge(v)
        assert fixed[0].real > 0 and abs(fixed[0].imag) < 1e-15

    def test_align_phase_makes_overlap_real(self):
        rng = np.random.default_rng(3)
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        v /= np.linalg.norm(v)
        ref = v * np.exp(0.83j)
        aligned = align_phase(v, ref)
        overlap = np.vdot(ref, aligned)
        assert overlap.real > 0 and abs(overlap.imag) < 1e-14

    def test_validate_pure_state(self):
        validate_pure_state(np.array([1.0, 0.0]))
        with pytest.raises(ValueError):
            validate_pure_state(np.array([1.0, 1.0]))
        with pytest.raises(ValueError):
            validate_pure_state(np.array([1.0, 0.0, 0.0]))

    def test_validate_density_matrix(self):
        validate_density_matrix(np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex))
        with pytest.raises(ValueError, match="Hermitian"):
            validate_density_matrix(np.array([[0.5, 0.2], [0.0, 0.5]], dtype=complex))
        with pytest.raises(ValueError, match="trace"):
            validate_density_matrix(np.eye(2, dtype=complex))
        with pytest.raises(ValueError, match="negative"):
            validate_density_matrix(
                np.array([[1.2, 0.0], [0.0, -0.2]], dtype=complex)
            )
