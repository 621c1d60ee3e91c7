"""Time propagation of pure states and density matrices.

Pure states advance by exact SU(2) rotations generated by the field at
each step midpoint, an exponential-midpoint scheme: unitary to roundoff
with second-order global accuracy in dt. The dissipative path integrates
the master equation

    drho/dt = -i [H(t), rho] + (1/t1) D[L_relax] rho + (1/(2 t2*)) D[sz] rho

with D[L] rho = L rho L+ - (L+ L rho + rho L+ L)/2 and L_relax lowering
the excited (down) state to the ground (up) state, using classic
fourth-order Runge-Kutta on the vectorized density matrix. The generator
is traceless, so the trace is conserved to roundoff.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import PropagatorConfigError
from .qubit import SIGMA_Z, chronological_product, su2_matrices
from .schedules import total_field

_EYE2 = np.eye(2, dtype=complex)

# steps held in memory at once during vectorized generator construction
_CHUNK = 1 << 15


@dataclass(frozen=True)
class PropagatorConfig:
    """Stepping control. A run over a schedule of duration T needs dt <= T/100."""

    dt: float = 0.005
    method: str = "midpoint-exponential"

    def __post_init__(self):
        if self.dt <= 0:
            raise PropagatorConfigError("dt must be positive")
        if self.method != "midpoint-exponential":
            raise PropagatorConfigError(f"unknown method {self.method!r}")


@dataclass(frozen=True)
class DissipationParams:
    """Relaxation time t1 and pure dephasing time t2_star, both in ns.

    The derived total coherence time combines both channels:
    t2 = 1 / (1/(2 t1) + 1/t2_star).
    """

    t1: float
    t2_star: float
    enabled: bool = True

    def __post_init__(self):
        if self.enabled and (self.t1 <= 0 or self.t2_star <= 0):
            raise ValueError("t1 and t2_star must be positive when enabled")

    @property
    def t2(self):
        return 1.0 / (0.5 / self.t1 + 1.0 / self.t2_star)


def reference_field_fn(sch):
    """Vectorized t -> reference field of a schedule."""
    from .schedules import reference_field

    return lambda t: reference_field(sch, t)


def total_field_fn(sch):
    """Vectorized t -> reference plus counter-diabatic field."""
    return lambda t: total_field(sch, t)


def frozen_field_fn(sch, tau_m):
    """Total field up to tau_m, clamped at its tau_m value afterwards.

    Extends the domain past T: any t >= tau_m sees the frozen field.
    """
    tau_m = float(tau_m)

    def fn(t):
        return total_field(sch, np.minimum(np.asarray(t, dtype=float), tau_m))

    return fn


def _check_run(sch, cfg):
    if cfg.dt > sch.T / 100.0:
        raise PropagatorConfigError(
            f"dt = {cfg.dt} ns too coarse for T = {sch.T} ns; need dt <= T/100"
        )


def _check_times(times):
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if times.ndim != 1 or times.size < 1 or np.any(np.diff(times) < 0):
        raise ValueError("times must be a non-decreasing 1-d sequence")
    return times


def _segment_steps(ta, tb, dt):
    n = max(1, int(np.ceil((tb - ta) / dt - 1e-9)))
    return n, (tb - ta) / n


def propagate_pure_sampled(sch, field_fn, times, s0, cfg):
    """Drive a pure state, returning its value at each requested time.

    times must be non-decreasing with times[0] the start of the run. The
    result has shape (len(times), 2); norm is preserved to roundoff.
    """
    _check_run(sch, cfg)
    times = _check_times(times)
    state = np.array(s0, dtype=complex)
    out = np.empty((len(times), 2), dtype=complex)
    out[0] = state
    for i in range(1, len(times)):
        ta, tb = times[i - 1], times[i]
        if tb > ta:
            n, h = _segment_steps(ta, tb, cfg.dt)
            mids = ta + (np.arange(n) + 0.5) * h
            steps = su2_matrices(field_fn(mids), h)
            state = chronological_product(steps) @ state
        out[i] = state
    return out


def propagate_pure(sch, field_fn, t0, t1, s0, cfg):
    """Final pure state after driving s0 from t0 to t1 (ns)."""
    if t1 < t0:
        raise ValueError("t1 must not precede t0")
    if t1 == t0:
        return np.array(s0, dtype=complex)
    return propagate_pure_sampled(sch, field_fn, [t0, t1], s0, cfg)[-1]


def _hamiltonian_batch(bs):
    bs = np.asarray(bs, dtype=float)
    h = np.empty((len(bs), 2, 2), dtype=complex)
    h[:, 0, 0] = 0.5 * bs[:, 2]
    h[:, 0, 1] = 0.5 * (bs[:, 0] - 1j * bs[:, 1])
    h[:, 1, 0] = 0.5 * (bs[:, 0] + 1j * bs[:, 1])
    h[:, 1, 1] = -0.5 * bs[:, 2]
    return h


def _unitary_generator_batch(h):
    """-i (H x I - I x H^T) acting on row-major vec(rho), batched."""
    left = np.einsum("nab,cd->nacbd", h, _EYE2).reshape(len(h), 4, 4)
    right = np.einsum("ab,ncd->nacbd", _EYE2, np.transpose(h, (0, 2, 1))).reshape(
        len(h), 4, 4
    )
    return -1j * (left - right)


def dissipator_matrix(diss):
    """Constant 4x4 dissipation generator on row-major vec(rho)."""
    relax = np.zeros((2, 2), dtype=complex)
    relax[0, 1] = 1.0  # |up><down|: decay of the excited state
    out = np.zeros((4, 4), dtype=complex)
    for rate, op in ((1.0 / diss.t1, relax), (0.5 / diss.t2_star, SIGMA_Z)):
        opdop = op.conj().T @ op
        out += rate * (
            np.kron(op, op.conj())
            - 0.5 * (np.kron(opdop, _EYE2) + np.kron(_EYE2, opdop.T))
        )
    return out


def lindblad_generator(b, diss):
    """Full 4x4 master-equation generator for a constant field b."""
    h = _hamiltonian_batch(np.asarray(b, dtype=float)[None, :])
    return _unitary_generator_batch(h)[0] + dissipator_matrix(diss)


def _check_rates(cfg, diss):
    if not diss.enabled:
        raise ValueError("dissipation parameters are disabled")
    if cfg.dt * max(1.0 / diss.t1, 1.0 / diss.t2_star) > 1e-3:
        raise PropagatorConfigError(
            "dt too large for the dissipation rates; need dt * max rate <= 1e-3"
        )


def propagate_lindblad_sampled(sch, field_fn, times, rho0, cfg, diss):
    """Master-equation propagation sampled at the requested times.

    Runge-Kutta stages see the field at segment sub-times; positivity
    holds to integrator accuracy and the trace to roundoff.
    """
    _check_run(sch, cfg)
    _check_rates(cfg, diss)
    times = _check_times(times)
    dmat = dissipator_matrix(diss)
    v = np.array(rho0, dtype=complex).reshape(4)
    out = np.empty((len(times), 2, 2), dtype=complex)
    out[0] = v.reshape(2, 2)
    for i in range(1, len(times)):
        ta, tb = times[i - 1], times[i]
        if tb > ta:
            n, h = _segment_steps(ta, tb, cfg.dt)
            for start in range(0, n, _CHUNK):
                stop = min(start + _CHUNK, n)
                m = stop - start
                edges = ta + h * np.arange(start, stop + 1)
                mids = ta + h * (np.arange(start, stop) + 0.5)
                gen_edge = (
                    _unitary_generator_batch(_hamiltonian_batch(field_fn(edges))) + dmat
                )
                gen_mid = (
                    _unitary_generator_batch(_hamiltonian_batch(field_fn(mids))) + dmat
                )
                half_h = 0.5 * h
                for k in range(m):
                    a_mid = gen_mid[k]
                    k1 = gen_edge[k] @ v
                    k2 = a_mid @ (v + half_h * k1)
                    k3 = a_mid @ (v + half_h * k2)
                    k4 = gen_edge[k + 1] @ (v + h * k3)
                    v = v + (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        out[i] = v.reshape(2, 2)
    return out


def propagate_lindblad(sch, field_fn, t0, t1, rho0, cfg, diss):
    """Final density matrix after dissipative driving from t0 to t1 (ns)."""
    if t1 < t0:
        raise ValueError("t1 must not precede t0")
    if t1 == t0:
        _check_rates(cfg, diss)
        return np.array(rho0, dtype=complex)
    return propagate_lindblad_sampled(sch, field_fn, [t0, t1], rho0, cfg, diss)[-1]
