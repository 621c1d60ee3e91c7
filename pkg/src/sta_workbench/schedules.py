"""Control schedules and drive-field construction.

A schedule gives the drive amplitude omega (rad/ns) and direction angles
theta/phi (rad) as functions of reduced time tbar = t/T, together with
their analytic tbar-derivatives. The reference field is

    b0 = omega * (sin th cos ph, sin th sin ph, cos th)

and the counter-diabatic correction that suppresses transitions between
the instantaneous eigenstates of b0 is, with th_dot = (dth/dtbar)/T and
ph_dot = (dph/dtbar)/T,

    b_cd = ( -th_dot sin ph - ph_dot sin th cos th cos ph,
              th_dot cos ph - ph_dot sin th cos th sin ph,
              ph_dot sin^2 th ).

b_cd is orthogonal to the reference direction, so the drive performs no
average work on the tracked branch (parallel transport), and it scales
as 1/T at fixed tbar. A projector-based finite-difference constructor
is provided as an independent cross-check of the closed form.
"""

import abc
import dataclasses
from dataclasses import dataclass

import numpy as np

from .exceptions import ScheduleRangeError
from .qubit import (
    IDENTITY,
    align_phase,
    hamiltonian_from_field,
    spectral_decompose,
)


class Schedule(abc.ABC):
    """Control schedule over reduced time tbar in [0, 1]; T in ns.

    All six accessors are vectorized over numpy arrays. omega must stay
    strictly positive so the spectrum never degenerates.
    """

    T: float

    @abc.abstractmethod
    def omega(self, tbar):
        """Drive amplitude in rad/ns."""

    @abc.abstractmethod
    def theta(self, tbar):
        """Polar angle of the drive direction in rad."""

    @abc.abstractmethod
    def phi(self, tbar):
        """Azimuthal angle of the drive direction in rad."""

    @abc.abstractmethod
    def d_omega(self, tbar):
        """d omega / d tbar."""

    @abc.abstractmethod
    def d_theta(self, tbar):
        """d theta / d tbar."""

    @abc.abstractmethod
    def d_phi(self, tbar):
        """d phi / d tbar."""

    def with_operation_time(self, T):
        """Same parameter path compressed into a different duration."""
        return dataclasses.replace(self, T=float(T))


def _const(tbar, value):
    return value * np.ones_like(np.asarray(tbar, dtype=float))


@dataclass(frozen=True)
class RampSchedule(Schedule):
    """Amplitude ramp with raised-cosine angle sweep.

    omega rises from omega0 to omega0 + omega1 on a quarter-sine while
    the polar angle sweeps 0 -> pi/3 and the azimuth 0 -> pi on raised
    cosines. Every angular velocity vanishes at both endpoints, so the
    counter-diabatic field is zero at t = 0 and t = T.
    """

    omega0: float
    omega1: float
    T: float

    def omega(self, tbar):
        return self.omega0 + self.omega1 * np.sin(0.5 * np.pi * tbar)

    def theta(self, tbar):
        return (np.pi / 6.0) * (1.0 - np.cos(np.pi * tbar))

    def phi(self, tbar):
        return (np.pi / 2.0) * (1.0 - np.cos(np.pi * tbar))

    def d_omega(self, tbar):
        return 0.5 * np.pi * self.omega1 * np.cos(0.5 * np.pi * tbar)

    def d_theta(self, tbar):
        return (np.pi**2 / 6.0) * np.sin(np.pi * tbar)

    def d_phi(self, tbar):
        return (np.pi**2 / 2.0) * np.sin(np.pi * tbar)


@dataclass(frozen=True)
class GeodesicDragSchedule(Schedule):
    """Constant-amplitude drive riding the meridian to the +z pole.

    The direction follows the great circle from (theta_start, phi_start)
    to +z with a raised-cosine profile, so the angular speed vanishes at
    both ends and the handover counter-diabatic field is zero there.
    """

    amplitude: float
    theta_start: float
    phi_start: float
    T: float

    def omega(self, tbar):
        return _const(tbar, self.amplitude)

    def theta(self, tbar):
        return self.theta_start * 0.5 * (1.0 + np.cos(np.pi * tbar))

    def phi(self, tbar):
        return _const(tbar, self.phi_start)

    def d_omega(self, tbar):
        return _const(tbar, 0.0)

    def d_theta(self, tbar):
        return -self.theta_start * 0.5 * np.pi * np.sin(np.pi * tbar)

    def d_phi(self, tbar):
        return _const(tbar, 0.0)


@dataclass(frozen=True)
class CallableSchedule(Schedule):
    """Schedule assembled from user-supplied vectorized callables."""

    T: float
    omega_fn: object
    theta_fn: object
    phi_fn: object
    d_omega_fn: object
    d_theta_fn: object
    d_phi_fn: object

    def omega(self, tbar):
        return self.omega_fn(tbar)

    def theta(self, tbar):
        return self.theta_fn(tbar)

    def phi(self, tbar):
        return self.phi_fn(tbar)

    def d_omega(self, tbar):
        return self.d_omega_fn(tbar)

    def d_theta(self, tbar):
        return self.d_theta_fn(tbar)

    def d_phi(self, tbar):
        return self.d_phi_fn(tbar)


def validate_schedule(sch, n_grid=201, fd_step=1e-6, rel_tol=1e-6):
    """Check omega positivity and derivative consistency on a grid.

    Central differences of omega/theta/phi with the given step must match
    the supplied derivatives within rel_tol relative to (1 + |derivative|).
    """
    tbar = np.linspace(fd_step, 1.0 - fd_step, n_grid)
    if np.any(np.asarray(sch.omega(np.linspace(0, 1, n_grid))) <= 0):
        raise ValueError("schedule amplitude omega must stay positive")
    for fn, dfn, name in (
        (sch.omega, sch.d_omega, "omega"),
        (sch.theta, sch.d_theta, "theta"),
        (sch.phi, sch.d_phi, "phi"),
    ):
        fd = (np.asarray(fn(tbar + fd_step)) - np.asarray(fn(tbar - fd_step))) / (
            2.0 * fd_step
        )
        exact = np.asarray(dfn(tbar))
        err = np.max(np.abs(fd - exact) / (1.0 + np.abs(exact)))
        if err > rel_tol:
            raise ValueError(
                f"d_{name} inconsistent with finite difference of {name}: {err:.3e}"
            )
    return sch


def _tbar(sch, t):
    """Map ns times to reduced time, validating the schedule domain."""
    t = np.asarray(t, dtype=float)
    slack = 1e-9 * max(sch.T, 1.0)
    if np.any(t < -slack) or np.any(t > sch.T + slack):
        raise ScheduleRangeError(f"time outside [0, {sch.T}] ns")
    return np.clip(t / sch.T, 0.0, 1.0)


def reference_field(sch, t):
    """Reference drive field at time(s) t in ns; shape (..., 3) in rad/ns."""
    tb = _tbar(sch, t)
    om, th, ph = sch.omega(tb), sch.theta(tb), sch.phi(tb)
    sin_th = np.sin(th)
    return np.stack(
        [om * sin_th * np.cos(ph), om * sin_th * np.sin(ph), om * np.cos(th)],
        axis=-1,
    )


def cd_field_analytic(sch, t):
    """Closed-form counter-diabatic field at time(s) t in ns."""
    tb = _tbar(sch, t)
    th, ph = sch.theta(tb), sch.phi(tb)
    th_dot = sch.d_theta(tb) / sch.T
    ph_dot = sch.d_phi(tb) / sch.T
    sin_th, cos_th = np.sin(th), np.cos(th)
    sin_ph, cos_ph = np.sin(ph), np.cos(ph)
    return np.stack(
        [
            -th_dot * sin_ph - ph_dot * sin_th * cos_th * cos_ph,
            th_dot * cos_ph - ph_dot * sin_th * cos_th * sin_ph,
            ph_dot * sin_th**2,
        ],
        axis=-1,
    )


def total_field(sch, t):
    """Reference plus counter-diabatic field at time(s) t in ns."""
    return reference_field(sch, t) + cd_field_analytic(sch, t)


def cd_hamiltonian_generic(sch, t, dt_fd=None):
    """Projector-based counter-diabatic Hamiltonian by finite differences.

    Builds i * sum_n P_perp_n |dn/dt><n| from the reference eigenstates,
    differentiated by gauge-aligned central differences. Independent of
    the closed form above, this is the module's cross-check oracle; the
    result is Hermitian to finite-difference accuracy (~1e-8).
    """
    if dt_fd is None:
        dt_fd = 1e-4 * sch.T
    if dt_fd <= 0:
        raise ValueError("dt_fd must be positive")
    t = float(t)
    if t < dt_fd or t > sch.T - dt_fd:
        raise ScheduleRangeError(
            f"t = {t} ns leaves no room for the stencil of width {dt_fd} ns"
        )
    eig_0 = spectral_decompose(hamiltonian_from_field(reference_field(sch, t)))
    eig_p = spectral_decompose(hamiltonian_from_field(reference_field(sch, t + dt_fd)))
    eig_m = spectral_decompose(hamiltonian_from_field(reference_field(sch, t - dt_fd)))

    h_cd = np.zeros((2, 2), dtype=complex)
    for center, plus, minus in (
        (eig_0.psi_plus, eig_p.psi_plus, eig_m.psi_plus),
        (eig_0.psi_minus, eig_p.psi_minus, eig_m.psi_minus),
    ):
        dvec = (align_phase(plus, center) - align_phase(minus, center)) / (2.0 * dt_fd)
        p_perp = IDENTITY - np.outer(center, center.conj())
        h_cd += 1j * np.outer(p_perp @ dvec, center.conj())
    return h_cd
