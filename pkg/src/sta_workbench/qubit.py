"""Two-level quantum mechanics on plain numpy arrays.

Pure states are complex 2-vectors ordered (up, down), up being the
ground state. Density matrices are 2x2 complex Hermitian with unit
trace. Drive fields are length-3 float arrays in rad/ns; with hbar = 1
the Hamiltonian of a field b is (b . sigma)/2, which is traceless, so
the levels sit at +/- |b|/2.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateSpectrumError, InvalidFieldError

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)

UP = np.array([1.0, 0.0], dtype=complex)
DOWN = np.array([0.0, 1.0], dtype=complex)

BRANCHES = ("up", "down")

# rad/ns; the drive amplitude never vanishes in any shipped schedule,
# so a gap below this indicates a caller bug rather than physics.
DEGENERACY_THRESHOLD = 1e-12

GAUGE_TIE_TOLERANCE = 1e-12


def hamiltonian_from_field(b):
    """Hamiltonian (b . sigma)/2 of a drive field b = (bx, by, bz) in rad/ns."""
    b = np.asarray(b, dtype=float)
    if b.shape != (3,) or not np.all(np.isfinite(b)):
        raise InvalidFieldError(f"field must be 3 finite components, got {b!r}")
    bx, by, bz = b
    return 0.5 * np.array([[bz, bx - 1j * by], [bx + 1j * by, -bz]])


def fix_gauge(state):
    """Rotate the global phase so the largest-magnitude component is real >= 0.

    Magnitude ties within GAUGE_TIE_TOLERANCE resolve toward the up
    component, making the gauge deterministic on the whole sphere.
    """
    state = np.asarray(state, dtype=complex)
    idx = 0 if abs(state[0]) >= abs(state[1]) - GAUGE_TIE_TOLERANCE else 1
    ref = state[idx]
    if ref == 0:
        return state.copy()
    return state * (ref.conjugate() / abs(ref))


def align_phase(state, reference):
    """Multiply state by the unit phase making <reference|state> real positive.

    Used before finite-differencing eigenvectors, where a smooth gauge
    across the stencil is required.
    """
    overlap = np.vdot(reference, state)
    mag = abs(overlap)
    if mag == 0:
        return np.array(state, dtype=complex)
    return state * (mag / overlap)


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenpairs of a traceless 2x2 Hermitian Hamiltonian, e_plus >= e_minus.

    Both eigenvectors carry the fix_gauge phase convention and are
    exactly orthogonal by construction.
    """

    e_plus: float
    e_minus: float
    psi_plus: np.ndarray
    psi_minus: np.ndarray


def spectral_decompose(h):
    """Spectral decomposition of a traceless Hermitian 2x2 matrix.

    Accepts input Hermitian and traceless within 1e-10 and raises
    DegenerateSpectrumError when the gap is below DEGENERACY_THRESHOLD.
    The half-angle construction is cancellation-free on both hemispheres.
    """
    h = np.asarray(h, dtype=complex)
    if h.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {h.shape}")
    if np.max(np.abs(h - h.conj().T)) > 1e-10:
        raise ValueError("matrix is not Hermitian within 1e-10")
    if abs(h[0, 0] + h[1, 1]) > 1e-10:
        raise ValueError("matrix is not traceless within 1e-10")

    bx = 2.0 * h[1, 0].real
    by = 2.0 * h[1, 0].imag
    bz = (h[0, 0] - h[1, 1]).real
    norm = float(np.sqrt(bx * bx + by * by + bz * bz))
    if norm < DEGENERACY_THRESHOLD:
        raise DegenerateSpectrumError(
            f"level splitting {norm:.3e} rad/ns below {DEGENERACY_THRESHOLD}"
        )

    cos_half = np.sqrt((norm + bz) / (2.0 * norm))
    sin_half = np.sqrt((norm - bz) / (2.0 * norm))
    bxy = np.hypot(bx, by)
    phase = (bx + 1j * by) / bxy if bxy > 0 else 1.0 + 0j
    psi_plus = np.array([cos_half, sin_half * phase])
    psi_minus = np.array([-sin_half * np.conj(phase), cos_half])
    e_plus = 0.5 * norm
    return SpectralDecomposition(
        e_plus, -e_plus, fix_gauge(psi_plus), fix_gauge(psi_minus)
    )


def reference_eigenstate(theta, phi, branch):
    """Closed-form eigenstate of a field pointing along (theta, phi).

    The 'up' branch is spin-aligned with the field (energy +|b|/2), the
    'down' branch anti-aligned. Phases follow the standard half-angle
    parameterization, not the fix_gauge convention.
    """
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    if branch == "up":
        return np.array([c, s * np.exp(1j * phi)])
    if branch == "down":
        return np.array([-s * np.exp(-1j * phi), c])
    raise ValueError(f"branch must be 'up' or 'down', got {branch!r}")


def su2_matrix(b, dt):
    """Exact propagator exp(-i (b . sigma) dt / 2) for a constant field."""
    b = np.asarray(b, dtype=float)
    norm = np.linalg.norm(b)
    if norm == 0.0:
        return IDENTITY.copy()
    angle = 0.5 * norm * dt
    n = b / norm
    axis = n[0] * SIGMA_X + n[1] * SIGMA_Y + n[2] * SIGMA_Z
    return np.cos(angle) * IDENTITY - 1j * np.sin(angle) * axis


def su2_matrices(bs, dt):
    """Batched su2_matrix for an (n, 3) field array and a shared step dt."""
    bs = np.asarray(bs, dtype=float)
    norms = np.linalg.norm(bs, axis=1)
    angles = 0.5 * norms * dt
    cos_a = np.cos(angles)
    # sin(angle)/|b| -> dt/2 as |b| -> 0; the zero-field row is exactly I.
    k = np.divide(np.sin(angles), norms, out=np.zeros_like(norms), where=norms > 0)
    out = np.empty((len(bs), 2, 2), dtype=complex)
    out[:, 0, 0] = cos_a - 1j * k * bs[:, 2]
    out[:, 0, 1] = -k * bs[:, 1] - 1j * k * bs[:, 0]
    out[:, 1, 0] = k * bs[:, 1] - 1j * k * bs[:, 0]
    out[:, 1, 1] = cos_a + 1j * k * bs[:, 2]
    return out


def su2_step(b, dt, state):
    """Advance a pure state through dt ns under a constant field b."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    return su2_matrix(b, dt) @ np.asarray(state, dtype=complex)


def chronological_product(mats):
    """Product mats[n-1] @ ... @ mats[0] by pairwise tree reduction.

    Each level is one batched matmul, so the cost stays at numpy speed
    for long step sequences.
    """
    mats = np.asarray(mats, dtype=complex)
    if mats.ndim == 2:
        return mats
    n = len(mats)
    if n == 0:
        return np.eye(2, dtype=complex)
    while n > 1:
        half = n // 2
        head = np.matmul(mats[1 : 2 * half : 2], mats[0 : 2 * half : 2])
        if n % 2:
            mats = np.concatenate([head, mats[2 * half :]], axis=0)
        else:
            mats = head
        n = len(mats)
    return mats[0]


def bloch_vector(state_or_rho):
    """Cartesian Bloch vector of a pure state or a density matrix."""
    a = np.asarray(state_or_rho, dtype=complex)
    rho = np.outer(a, a.conj()) if a.ndim == 1 else a
    return np.array(
        [2.0 * rho[1, 0].real, 2.0 * rho[1, 0].imag, (rho[0, 0] - rho[1, 1]).real]
    )


def validate_pure_state(state, tol=1e-12):
    """Raise unless the state is a normalized complex 2-vector."""
    state = np.asarray(state, dtype=complex)
    if state.shape != (2,):
        raise ValueError(f"pure state must have shape (2,), got {state.shape}")
    norm_sq = float(np.vdot(state, state).real)
    if abs(norm_sq - 1.0) > tol:
        raise ValueError(f"state norm^2 = {norm_sq!r} deviates from 1 beyond {tol}")
    return state


def validate_density_matrix(rho, tol=1e-12):
    """Raise unless rho is 2x2 Hermitian, unit trace, positive within tol."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValueError(f"density matrix must be 2x2, got {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(rho[0, 0] + rho[1, 1] - 1.0) > tol:
        raise ValueError("density matrix trace deviates from 1")
    if np.min(np.linalg.eigvalsh(rho)) < -tol:
        raise ValueError("density matrix has a negative eigenvalue")
    return rho
