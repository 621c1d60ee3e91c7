"""Geometric tensor of the drive eigenstates and Bloch-trajectory estimators.

The metric on the direction angles lambda = (theta, phi) is the real
part of Re <d_mu n| P_perp_n |d_nu n>. For either branch of a two-level
field it is diag(1, sin^2 theta) / 4, independent of the amplitude. The
second-moment excess of the work distribution equals this metric
contracted with the parameter velocities:

    excess2(t) = [ (dtheta/dtbar)^2 + sin^2 theta (dphi/dtbar)^2 ] / (4 T^2)

which falls off as 1/T^2 at fixed reduced time. A tomography-style
estimator recovers the same bracket from sampled Bloch angles by central
differences.
"""

from dataclasses import dataclass

import numpy as np

from .propagate import propagate_lindblad_sampled, propagate_pure_sampled, total_field_fn
from .qubit import (
    IDENTITY,
    align_phase,
    bloch_vector,
    hamiltonian_from_field,
    reference_eigenstate,
    spectral_decompose,
)
from .workstats import default_grid

# below this polar angle the azimuth is a pure convention (reported as 0)
POLE_ANGLE = 1e-6


@dataclass(frozen=True)
class GeometricTensor:
    """Real symmetric metric on (theta, phi) at one evaluation point."""

    g_theta_theta: float
    g_theta_phi: float
    g_phi_phi: float
    evaluated_at: tuple

    def as_matrix(self):
        return np.array(
            [
                [self.g_theta_theta, self.g_theta_phi],
                [self.g_theta_phi, self.g_phi_phi],
            ]
        )


@dataclass(frozen=True)
class BlochSample:
    """Tomography sample of the qubit Bloch vector at one grid time.

    phi_uncertain marks samples at the pole, where a small transverse
    measurement error would be amplified into a large azimuth error.
    """

    tbar: float
    r_q: float
    theta_q: float
    phi_q: float
    phi_uncertain: bool = False

    def __post_init__(self):
        if not -1e-9 <= self.r_q <= 1.0 + 1e-9:
            raise ValueError(f"Bloch radius {self.r_q} outside [0, 1]")


@dataclass(frozen=True)
class EstimatorPoint:
    """Central-difference estimate of the squared parameter speed at tbar."""

    tbar: float
    value: float
    uncertain: bool = False


def qgt_analytic(theta):
    """Closed-form metric diag(1, sin^2 theta) / 4, same for both branches."""
    return GeometricTensor(0.25, 0.0, 0.25 * np.sin(theta) ** 2, (float(theta), 0.0))


def _direction_field(theta, phi):
    return np.array(
        [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)]
    )


def qgt_numeric(n, theta, phi, d_lambda=1e-4, gauge=None):
    """Finite-difference metric Re <d_mu n| P_perp |d_nu n> on (theta, phi).

    Eigenvectors come from the spectral decomposition of a unit-amplitude
    field, independent of the closed form. Offset vectors are phase
    aligned to the center before differencing, so an extra smooth gauge
    (injected via gauge=callable(theta, phi) -> angle) cannot change the
    result.
    """
    if not 0 < d_lambda <= 1e-2:
        raise ValueError("d_lambda must lie in (0, 1e-2]")

    def eigvec(th, ph):
        eig = spectral_decompose(hamiltonian_from_field(_direction_field(th, ph)))
        v = eig.psi_plus if n == "up" else eig.psi_minus
        if gauge is not None:
            v = v * np.exp(1j * gauge(th, ph))
        return v

    center = eigvec(theta, phi)
    d_th = (
        align_phase(eigvec(theta + d_lambda, phi), center)
        - align_phase(eigvec(theta - d_lambda, phi), center)
    ) / (2.0 * d_lambda)
    d_ph = (
        align_phase(eigvec(theta, phi + d_lambda), center)
        - align_phase(eigvec(theta, phi - d_lambda), center)
    ) / (2.0 * d_lambda)
    p_perp = IDENTITY - np.outer(center, center.conj())
    a, b = p_perp @ d_th, p_perp @ d_ph
    return GeometricTensor(
        float(np.vdot(a, a).real),
        float(np.vdot(a, b).real),
        float(np.vdot(b, b).real),
        (float(theta), float(phi)),
    )


def excess_from_qgt(sch, tbar):
    """Predicted second-moment excess at reduced time(s) tbar (rad/ns)^2."""
    tbar = np.asarray(tbar, dtype=float)
    th = sch.theta(tbar)
    return (sch.d_theta(tbar) ** 2 + np.sin(th) ** 2 * sch.d_phi(tbar) ** 2) / (
        4.0 * sch.T**2
    )


def bloch_trajectory(sch, cfg, dtbar=0.02, diss=None):
    """Tomography samples of the driven qubit on a uniform reduced-time grid.

    Starts from the aligned reference eigenstate and follows the total
    field; for an ideal run theta_q and phi_q track the schedule angles.
    The azimuth is unwrapped to a continuous branch, and pole samples
    report phi_q = 0 with the uncertainty flag set.
    """
    tbars = default_grid(dtbar)
    times = tbars * sch.T
    s0 = reference_eigenstate(float(sch.theta(0.0)), float(sch.phi(0.0)), "up")
    if diss is not None and diss.enabled:
        rhos = propagate_lindblad_sampled(
            sch, total_field_fn(sch), times, np.outer(s0, s0.conj()), cfg, diss
        )
        vecs = np.array([bloch_vector(r) for r in rhos])
    else:
        states = propagate_pure_sampled(sch, total_field_fn(sch), times, s0, cfg)
        vecs = np.array([bloch_vector(s) for s in states])

    radius = np.linalg.norm(vecs, axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        cos_th = np.where(radius > 0, vecs[:, 2] / np.where(radius > 0, radius, 1.0), 1.0)
    theta_q = np.arccos(np.clip(cos_th, -1.0, 1.0))
    pole = theta_q < POLE_ANGLE
    phi_q = np.zeros_like(theta_q)
    valid = ~pole
    if np.any(valid):
        phi_q[valid] = np.unwrap(np.arctan2(vecs[valid, 1], vecs[valid, 0]))
    return [
        BlochSample(float(tb), float(r), float(th), float(ph), bool(fl))
        for tb, r, th, ph, fl in zip(tbars, radius, theta_q, phi_q, pole)
    ]


def geometric_quantity_estimator(samples, dtbar=None):
    """Squared parameter speed from sampled Bloch angles, interior points only.

    Central differences of theta_q and phi_q on a uniform grid give

        value = [ (dtheta_q/dtbar)^2 + sin^2 theta_q (dphi_q/dtbar)^2 ] / 4.

    Points whose stencil touches a pole-flagged sample are marked
    uncertain. Requires at least 3 samples.
    """
    if len(samples) < 3:
        raise ValueError("need at least 3 samples for a central difference")
    tbars = np.array([s.tbar for s in samples])
    steps = np.diff(tbars)
    if dtbar is None:
        dtbar = float(steps[0])
    if np.any(np.abs(steps - dtbar) > 1e-9):
        raise ValueError("samples must sit on a uniform tbar grid")
    theta_q = np.array([s.theta_q for s in samples])
    phi_q = np.array([s.phi_q for s in samples])
    flags = np.array([s.phi_uncertain for s in samples], dtype=bool)
    d_th = (theta_q[2:] - theta_q[:-2]) / (2.0 * dtbar)
    d_ph = (phi_q[2:] - phi_q[:-2]) / (2.0 * dtbar)
    values = 0.25 * (d_th**2 + np.sin(theta_q[1:-1]) ** 2 * d_ph**2)
    uncertain = flags[2:] | flags[1:-1] | flags[:-2]
    return [
        EstimatorPoint(float(tb), float(v), bool(u))
        for tb, v, u in zip(tbars[1:-1], values, uncertain)
    ]
