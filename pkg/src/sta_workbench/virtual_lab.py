"""Virtual realizations of the two eigenbasis measurement protocols.

Frozen Hamiltonian: a Ramsey-style sequence. The qubit is prepared in an
equal superposition, driven to an interruption time tau_m, and the field
is then clamped at its tau_m value. During the hold the state precesses
between the two instantaneous eigenstates; a closing pi/2 pulse maps the
accumulated phase onto the z populations before each readout, so the
recorded fringe oscillates exactly at the level splitting E+ - E-. The
closing pulse keeps the fringe contrast bounded away from zero for every
tau_m, including tau_m = 0 where the clamped field is along z and bare
z-basis populations would not oscillate at all.

Frozen population: the drive is interrupted at tau_m and handed over to
a second counter-diabatic drive whose reference direction rides a great
circle to +z. The handover transports the instantaneous eigenstates of
the clamped field onto the z basis, so an ordinary z readout returns the
eigenstate populations at tau_m.

Preparation pulses are ideal and instantaneous; readout is an exact Born
probability unless a shot-noise sampler is applied.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm
from scipy.optimize import curve_fit

from .exceptions import FitFailureError, InvalidFieldError, ProtocolError, ScheduleRangeError
from .propagate import (
    lindblad_generator,
    propagate_lindblad_sampled,
    propagate_pure_sampled,
    total_field_fn,
)
from .qubit import DOWN, UP, su2_matrix
from .schedules import GeodesicDragSchedule, total_field
from .units import TWO_PI

# hold grid: 1 ns steps spanning 1 us, 1001 samples
TAU_D_STEP = 1.0
TAU_D_SPAN = 1000.0


def tau_d_grid():
    return np.arange(0.0, TAU_D_SPAN + 0.5 * TAU_D_STEP, TAU_D_STEP)


# closing pi/2 rotation about y: maps x-axis coherence onto z populations
_CLOSING_PULSE = su2_matrix(np.array([0.0, np.pi, 0.0]), 0.5)


@dataclass(frozen=True)
class RamseyRecord:
    """Fringe record at one interruption time: p_up over the hold grid."""

    tau_m: float
    tau_d: np.ndarray
    p_up: np.ndarray

    def __post_init__(self):
        if len(self.tau_d) != len(self.p_up):
            raise ValueError("tau_d and p_up must have equal length")
        if np.any(self.p_up < -1e-9) or np.any(self.p_up > 1.0 + 1e-9):
            raise ValueError("populations outside [0, 1]")


@dataclass(frozen=True)
class FrozenPopResult:
    """Eigenstate populations read out through the great-circle handover."""

    tau_m: float
    n: str
    p_plus_given_n: float
    p_minus_given_n: float

    def __post_init__(self):
        if abs(self.p_plus_given_n + self.p_minus_given_n - 1.0) > 1e-8:
            raise ValueError("populations do not sum to 1")


@dataclass(frozen=True)
class EnergyFit:
    """Level splitting extracted from a fringe record (energies in rad/ns)."""

    e_plus: float
    e_minus: float
    residual: float


def prepare_initial(n):
    """Ideal instantaneous preparation: 'up', 'down' (pi pulse), or
    'superposition' (pi/2 about y)."""
    if n == "up":
        return UP.copy()
    if n == "down":
        return DOWN.copy()
    if n == "superposition":
        return np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)
    raise ValueError(f"unknown preparation {n!r}")


def _check_tau_m(sch, tau_m):
    if not 0.0 <= tau_m <= sch.T:
        raise ScheduleRangeError(f"tau_m = {tau_m} outside [0, {sch.T}] ns")


def frozen_hamiltonian_run(sch, tau_m, cfg, diss=None):
    """Ramsey fringe record: drive to tau_m, clamp the field, read each 1 ns."""
    _check_tau_m(sch, tau_m)
    state0 = prepare_initial("superposition")
    b_frozen = total_field(sch, tau_m)
    grid = tau_d_grid()
    if diss is not None and diss.enabled:
        rho = propagate_lindblad_sampled(
            sch,
            total_field_fn(sch),
            [0.0, tau_m],
            np.outer(state0, state0.conj()),
            cfg,
            diss,
        )[-1]
        # the clamped generator is constant, so one exact exponential per
        # grid step replaces the stepped integrator during the hold
        hold = expm(lindblad_generator(b_frozen, diss) * TAU_D_STEP)
        v = rho.reshape(4)
        p_up = np.empty(len(grid))
        for k in range(len(grid)):
            rho_k = v.reshape(2, 2)
            rho_read = _CLOSING_PULSE @ rho_k @ _CLOSING_PULSE.conj().T
            p_up[k] = rho_read[0, 0].real
            v = hold @ v
    else:
        state = propagate_pure_sampled(
            sch, total_field_fn(sch), [0.0, tau_m], state0, cfg
        )[-1]
        hold = su2_matrix(b_frozen, TAU_D_STEP)
        p_up = np.empty(len(grid))
        for k in range(len(grid)):
            read = _CLOSING_PULSE @ state
            p_up[k] = abs(read[0]) ** 2
            state = hold @ state
    return RamseyRecord(float(tau_m), grid, p_up)


def extract_eigenenergies(rec, min_cycles=3):
    """Fit a * cos(w tau_d + p0) + c to a fringe record.

    The coarse frequency comes from the discrete spectrum peak and is
    refined by nonlinear least squares; the symmetric levels are then
    +/- w/2. Raises FitFailureError when no usable peak stands above the
    spectral floor or the record spans fewer than min_cycles periods.
    """
    y = np.asarray(rec.p_up, dtype=float)
    t = np.asarray(rec.tau_d, dtype=float)
    spectrum = np.abs(np.fft.rfft(y - y.mean()))
    if len(spectrum) < 2:
        raise FitFailureError("record too short")
    peak = int(np.argmax(spectrum[1:])) + 1
    floor = float(np.median(spectrum[1:]))
    if spectrum[peak] < max(1e-6 * len(y), 5.0 * floor):
        raise FitFailureError("no spectral peak above the noise floor")
    if peak < min_cycles:
        raise FitFailureError(
            f"record spans fewer than {min_cycles} oscillation periods"
        )

    span = t[-1] - t[0]
    w0 = TWO_PI * peak / span
    # linear least squares at fixed frequency seeds amplitude and phase
    design = np.column_stack([np.cos(w0 * t), np.sin(w0 * t), np.ones_like(t)])
    (ca, sa, c0), *_ = np.linalg.lstsq(design, y, rcond=None)
    a0 = float(np.hypot(ca, sa))
    p0 = float(np.arctan2(-sa, ca))

    def model(tt, a, w, p, c):
        return a * np.cos(w * tt + p) + c

    popt, _ = curve_fit(model, t, y, p0=[a0, w0, p0, c0], maxfev=20000)
    w_fit = abs(float(popt[1]))
    residual = float(np.sqrt(np.mean((model(t, *popt) - y) ** 2)))
    return EnergyFit(e_plus=0.5 * w_fit, e_minus=-0.5 * w_fit, residual=residual)


def make_drag_schedule(b_start, t_prime):
    """Great-circle handover drive from the direction of b_start to +z.

    The amplitude is held at |b_start|; only the direction moves, on a
    raised-cosine profile with zero endpoint speed.
    """
    b = np.asarray(b_start, dtype=float)
    norm = float(np.linalg.norm(b))
    if b.shape != (3,) or not np.all(np.isfinite(b)) or norm == 0.0:
        raise InvalidFieldError("drag schedule needs a finite non-zero start field")
    theta0 = float(np.arccos(np.clip(b[2] / norm, -1.0, 1.0)))
    bxy = np.hypot(b[0], b[1])
    phi0 = float(np.arctan2(b[1], b[0])) if bxy > 0 else 0.0
    return GeodesicDragSchedule(
        amplitude=norm, theta_start=theta0, phi_start=phi0, T=float(t_prime)
    )


def frozen_population_run(sch, tau_m, n, cfg, t_prime=100.0, diss=None):
    """Eigenstate populations at tau_m via the great-circle handover readout.

    Prepares |n(0)> with an ideal pulse (the schedule must start along
    +z), drives to tau_m under the total field, rides the handover drive
    for t_prime, and reads the z-basis populations.
    """
    _check_tau_m(sch, tau_m)
    if n not in ("up", "down"):
        raise ValueError(f"initial state must be 'up' or 'down', got {n!r}")
    if abs(float(sch.theta(0.0))) > 1e-9:
        raise ProtocolError(
            "ideal preparation pulses require the drive to start along +z"
        )
    drag = make_drag_schedule(total_field(sch, tau_m), t_prime)
    state0 = prepare_initial(n)
    if diss is not None and diss.enabled:
        rho = propagate_lindblad_sampled(
            sch,
            total_field_fn(sch),
            [0.0, tau_m],
            np.outer(state0, state0.conj()),
            cfg,
            diss,
        )[-1]
        rho = propagate_lindblad_sampled(
            drag, total_field_fn(drag), [0.0, t_prime], rho, cfg, diss
        )[-1]
        p_up = float(rho[0, 0].real)
        p_down = float(rho[1, 1].real)
    else:
        state = propagate_pure_sampled(
            sch, total_field_fn(sch), [0.0, tau_m], state0, cfg
        )[-1]
        state = propagate_pure_sampled(
            drag, total_field_fn(drag), [0.0, t_prime], state, cfg
        )[-1]
        p_up = abs(state[0]) ** 2
        p_down = abs(state[1]) ** 2
    return FrozenPopResult(
        tau_m=float(tau_m), n=n, p_plus_given_n=p_up, p_minus_given_n=p_down
    )


def frozen_hamiltonian_sweep(sch, tau_ms, cfg, diss=None):
    """Fringe records for many interruption times, sharing one forward pass."""
    tau_ms = np.asarray(tau_ms, dtype=float)
    for tau in tau_ms:
        _check_tau_m(sch, tau)
    state0 = prepare_initial("superposition")
    grid = tau_d_grid()
    records = []
    if diss is not None and diss.enabled:
        rhos = propagate_lindblad_sampled(
            sch,
            total_field_fn(sch),
            tau_ms,
            np.outer(state0, state0.conj()),
            cfg,
            diss,
        )
        for tau, rho in zip(tau_ms, rhos):
            hold = expm(lindblad_generator(total_field(sch, tau), diss) * TAU_D_STEP)
            v = rho.reshape(4)
            p_up = np.empty(len(grid))
            for k in range(len(grid)):
                rho_k = v.reshape(2, 2)
                rho_read = _CLOSING_PULSE @ rho_k @ _CLOSING_PULSE.conj().T
                p_up[k] = rho_read[0, 0].real
                v = hold @ v
            records.append(RamseyRecord(float(tau), grid, p_up))
    else:
        states = propagate_pure_sampled(sch, total_field_fn(sch), tau_ms, state0, cfg)
        for tau, state in zip(tau_ms, states):
            hold = su2_matrix(total_field(sch, tau), TAU_D_STEP)
            p_up = np.empty(len(grid))
            s = state
            for k in range(len(grid)):
                read = _CLOSING_PULSE @ s
                p_up[k] = abs(read[0]) ** 2
                s = hold @ s
            records.append(RamseyRecord(float(tau), grid, p_up))
    return records


def frozen_population_sweep(sch, tau_ms, n, cfg, t_prime=100.0, diss=None):
    """Handover readouts for many interruption times, sharing one forward pass."""
    tau_ms = np.asarray(tau_ms, dtype=float)
    for tau in tau_ms:
        _check_tau_m(sch, tau)
    if abs(float(sch.theta(0.0))) > 1e-9:
        raise ProtocolError(
            "ideal preparation pulses require the drive to start along +z"
        )
    state0 = prepare_initial(n)
    results = []
    if diss is not None and diss.enabled:
        rhos = propagate_lindblad_sampled(
            sch,
            total_field_fn(sch),
            tau_ms,
            np.outer(state0, state0.conj()),
            cfg,
            diss,
        )
        for tau, rho in zip(tau_ms, rhos):
            drag = make_drag_schedule(total_field(sch, tau), t_prime)
            rho_end = propagate_lindblad_sampled(
                drag, total_field_fn(drag), [0.0, t_prime], rho, cfg, diss
            )[-1]
            results.append(
                FrozenPopResult(
                    float(tau), n, float(rho_end[0, 0].real), float(rho_end[1, 1].real)
                )
            )
    else:
        states = propagate_pure_sampled(sch, total_field_fn(sch), tau_ms, state0, cfg)
        for tau, state in zip(tau_ms, states):
            drag = make_drag_schedule(total_field(sch, tau), t_prime)
            s_end = propagate_pure_sampled(
                drag, total_field_fn(drag), [0.0, t_prime], state, cfg
            )[-1]
            results.append(
                FrozenPopResult(
                    float(tau), n, abs(s_end[0]) ** 2, abs(s_end[1]) ** 2
                )
            )
    return results


def sample_probability(p, rng, shots):
    """Binomial shot-noise estimate of a Born probability."""
    if shots < 1:
        raise ValueError("shots must be at least 1")
    return rng.binomial(shots, float(np.clip(p, 0.0, 1.0))) / shots


def sample_record(rec, rng, shots):
    """RamseyRecord with binomial shot noise applied to every point."""
    noisy = np.array([sample_probability(p, rng, shots) for p in rec.p_up])
    return RamseyRecord(rec.tau_m, rec.tau_d, noisy)


def sample_result(res, rng, shots):
    """FrozenPopResult resampled with binomial shot noise."""
    p = sample_probability(res.p_plus_given_n, rng, shots)
    return FrozenPopResult(res.tau_m, res.n, p, 1.0 - p)
