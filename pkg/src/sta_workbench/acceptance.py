"""Acceptance battery: the pinned correctness criteria for the workbench.

Every criterion carries its tolerance inline and returns a
CriterionResult with a single headline measurement. run_all executes the
battery against a RunConfig (defaults if omitted) and is the engine
behind both the verify command and the acceptance test module.

Criterion failures never raise; exceptions inside a criterion are
recorded as failures so one bad configuration cannot hide the rest of
the battery.
"""

import traceback
from dataclasses import dataclass

import numpy as np

from .config import RunConfig
from .geometry import (
    BlochSample,
    excess_from_qgt,
    geometric_quantity_estimator,
    qgt_analytic,
    qgt_numeric,
)
from .propagate import DissipationParams, PropagatorConfig, propagate_pure, total_field_fn
from .qubit import align_phase, hamiltonian_from_field, spectral_decompose
from .schedules import reference_field, total_field
from .units import rad_ns_to_mhz
from .virtual_lab import (
    extract_eigenenergies,
    frozen_hamiltonian_sweep,
    frozen_population_sweep,
)
from .workstats import conditional_probs, default_grid, initial_eigenstate, moment_table

HMHZ = rad_ns_to_mhz(1.0)  # rad/ns -> h MHz conversion factor
HMHZ2 = HMHZ * HMHZ


@dataclass(frozen=True)
class CriterionResult:
    cid: str
    name: str
    passed: bool
    measured: float
    tolerance: str
    detail: str = ""

    @property
    def status(self):
        return "pass" if self.passed else "fail"


class AcceptanceContext:
    """Shared schedules, grids, and cached propagation results."""

    def __init__(self, config):
        self.config = config
        self.cfg = config.propagator()
        self.tbars = default_grid(config.grid_step_tbar)
        self._moments = {}

    def schedule(self, T):
        return self.config.schedule(T)

    def moments(self, T, n, dissipative=False):
        key = (float(T), n, dissipative)
        if key not in self._moments:
            diss = None
            if dissipative:
                diss = DissipationParams(
                    t1=self.config.t1_us * 1000.0,
                    t2_star=self.config.t2star_us * 1000.0,
                    enabled=True,
                )
            self._moments[key] = moment_table(
                self.schedule(T), n, self.cfg, tbars=self.tbars, diss=diss
            )
        return self._moments[key]

    def moment_array(self, T, n, attr, dissipative=False):
        return np.array([getattr(r, attr) for r in self.moments(T, n, dissipative)])


def criterion_work_conservation(ctx):
    """First moment equals the closed-form adiabatic work at every grid time."""
    worst = 0.0
    endpoint_dev = 0.0
    for T in ctx.config.operation_times_ns:
        for n in ("up", "down"):
            w1 = ctx.moment_array(T, n, "w1") * HMHZ
            w1_ad = ctx.moment_array(T, n, "w1_ad") * HMHZ
            worst = max(worst, float(np.max(np.abs(w1 - w1_ad))))
            target = 5.0 if n == "up" else -5.0
            if (ctx.config.omega0_mhz, ctx.config.omega1_mhz) != (10.0, 10.0):
                target = w1_ad[-1]
            endpoint_dev = max(endpoint_dev, abs(float(w1[-1]) - target))
    passed = worst < 1e-6 and endpoint_dev < 1e-6
    return CriterionResult(
        "C01",
        "work_conservation",
        passed,
        worst,
        "< 1e-6 h MHz",
        f"endpoint |w1 -+ 5.000| = {endpoint_dev:.3e} h MHz",
    )


def criterion_fluctuation_inequality(ctx):
    """Second moment never drops below its adiabatic reference."""
    lowest = np.inf
    for T in ctx.config.operation_times_ns:
        for n in ("up", "down"):
            lowest = min(lowest, float(np.min(ctx.moment_array(T, n, "excess2"))) * HMHZ2)
    return CriterionResult(
        "C02",
        "fluctuation_inequality",
        lowest >= -1e-10,
        lowest,
        ">= -1e-10 (h MHz)^2",
    )


def criterion_qgt_equality(ctx):
    """Measured excess matches the geometric-tensor closed form at T = 25 ns."""
    sch = ctx.schedule(25.0)
    measured = ctx.moment_array(25.0, "up", "excess2") * HMHZ2
    predicted = excess_from_qgt(sch, ctx.tbars) * HMHZ2
    rel = np.abs(measured[1:-1] - predicted[1:-1]) / np.maximum(predicted[1:-1], 1e-6)
    worst = float(np.max(rel))
    return CriterionResult(
        "C03", "qgt_equality", worst < 1e-4, worst, "< 1e-4 relative"
    )


def criterion_collapse(ctx):
    """T^2-rescaled excess curves coincide across operation times."""
    times = (25.0, 50.0, 100.0, 200.0)
    curves = np.array(
        [T**2 * ctx.moment_array(T, "up", "excess2")[1:-1] * HMHZ2 for T in times]
    )
    spread = (curves.max(axis=0) - curves.min(axis=0)) / curves.mean(axis=0)
    worst = float(np.max(spread))
    return CriterionResult(
        "C04", "t2_collapse", worst < 1e-4, worst, "< 1e-4 relative spread"
    )


def criterion_frozen_hamiltonian(ctx):
    """Fringe-fitted level energies track the exact splitting; the excess
    over the adiabatic branch peaks between 7 and 9 MHz near 16 ns."""
    T = 25.0
    sch = ctx.schedule(T)
    tau_ms = np.arange(0.0, T + 0.5, 1.0)
    records = frozen_hamiltonian_sweep(sch, tau_ms, ctx.cfg)
    fitted = np.array([extract_eigenenergies(r).e_plus for r in records]) * HMHZ
    exact = np.array(
        [0.5 * np.linalg.norm(total_field(sch, tau)) for tau in tau_ms]
    ) * HMHZ
    adiabatic = rad_ns_to_mhz(0.5 * np.asarray(sch.omega(tau_ms / T)))
    fit_dev = float(np.max(np.abs(fitted - exact)))
    bump = fitted - adiabatic
    peak_idx = int(np.argmax(bump))
    peak = float(bump[peak_idx])
    peak_tau = float(tau_ms[peak_idx])
    passed = fit_dev < 0.05 and 7.0 <= peak <= 9.0 and 14.0 <= peak_tau <= 18.0
    return CriterionResult(
        "C05",
        "frozen_hamiltonian",
        passed,
        peak,
        "fit < 0.05 MHz; peak in [7, 9] MHz at tau_m in [14, 18] ns",
        f"max |fit - exact| = {fit_dev:.3e} MHz; peak {peak:.3f} MHz at {peak_tau} ns",
    )


def criterion_frozen_population(ctx):
    """Handover readout equals direct conditional probabilities; peak
    leakage for T = 25 ns is near 20 percent around 16 ns."""
    T = 25.0
    sch = ctx.schedule(T)
    tau_ms = ctx.tbars * T
    worst = 0.0
    p_minus_up = None
    for n in ("up", "down"):
        runs = frozen_population_sweep(sch, tau_ms, n, ctx.cfg)
        direct = np.array(
            [conditional_probs(sch, tau, n, ctx.cfg) for tau in tau_ms]
        )
        measured = np.array(
            [(r.p_plus_given_n, r.p_minus_given_n) for r in runs]
        )
        worst = max(worst, float(np.max(np.abs(measured - direct))))
        if n == "up":
            p_minus_up = measured[:, 1]
    peak_idx = int(np.argmax(p_minus_up))
    peak = float(p_minus_up[peak_idx])
    peak_tau = float(tau_ms[peak_idx])
    passed = worst < 1e-6 and 0.17 <= peak <= 0.23 and 14.0 <= peak_tau <= 18.0
    return CriterionResult(
        "C06",
        "frozen_population",
        passed,
        peak,
        "agreement < 1e-6; peak in [0.17, 0.23] at tau_m in [14, 18] ns",
        f"max |handover - direct| = {worst:.3e}; peak {peak:.4f} at {peak_tau} ns",
    )


def criterion_qgt_oracle(ctx):
    """Finite-difference metric matches the closed form at random points."""
    rng = np.random.default_rng(20260810)
    worst = 0.0
    branch_dev = 0.0
    for _ in range(100):
        theta = rng.uniform(0.1, np.pi - 0.1)
        phi = rng.uniform(0.0, 2.0 * np.pi)
        exact = qgt_analytic(theta).as_matrix()
        up = qgt_numeric("up", theta, phi).as_matrix()
        down = qgt_numeric("down", theta, phi).as_matrix()
        worst = max(worst, float(np.max(np.abs(up - exact))))
        worst = max(worst, float(np.max(np.abs(down - exact))))
        branch_dev = max(branch_dev, float(np.max(np.abs(up - down))))
    passed = worst < 1e-6 and branch_dev < 1e-8
    return CriterionResult(
        "C07",
        "qgt_oracle",
        passed,
        worst,
        "< 1e-6 per entry; branches agree < 1e-8",
        f"max |up - down| = {branch_dev:.3e}",
    )


def _estimator_error(sch, dtbar):
    grid = default_grid(dtbar)
    samples = [
        BlochSample(
            float(tb),
            1.0,
            float(sch.theta(tb)),
            float(sch.phi(tb)),
            bool(sch.theta(tb) < 1e-6),
        )
        for tb in grid
    ]
    points = geometric_quantity_estimator(samples, dtbar)
    estimated = np.array([p.value for p in points])
    tb_in = np.array([p.tbar for p in points])
    exact = excess_from_qgt(sch, tb_in) * sch.T**2
    return float(np.max(np.abs(estimated - exact) / exact))


def criterion_estimator(ctx):
    """Tomography-style estimator converges quadratically to the bracket."""
    sch = ctx.schedule(25.0)
    err_coarse = _estimator_error(sch, 0.02)
    err_fine = _estimator_error(sch, 0.01)
    ratio = err_coarse / err_fine if err_fine > 0 else np.inf
    passed = err_coarse < 0.05 and 3.0 <= ratio <= 5.0
    return CriterionResult(
        "C08",
        "estimator_consistency",
        passed,
        err_coarse,
        "< 5 percent; error ratio in [3, 5] on halving",
        f"halving improvement ratio = {ratio:.3f}",
    )


def criterion_eigenbasis_identity(ctx):
    """Projected-derivative identity linking the two eigenbases.

    For each reference branch n and total-field branch k,
    (E_k - eps_n) <n|psi_k> = i sum_m <n|P_perp_m|dm/dt><m|psi_k>.
    """
    T = 25.0
    sch = ctx.schedule(T)
    dt_fd = 1e-4 * T
    worst = 0.0
    for t in np.linspace(0.01 * T, 0.99 * T, 50):
        ref_0 = spectral_decompose(hamiltonian_from_field(reference_field(sch, t)))
        ref_p = spectral_decompose(
            hamiltonian_from_field(reference_field(sch, t + dt_fd))
        )
        ref_m = spectral_decompose(
            hamiltonian_from_field(reference_field(sch, t - dt_fd))
        )
        tot = spectral_decompose(hamiltonian_from_field(total_field(sch, t)))
        branches = (
            (ref_0.psi_plus, ref_p.psi_plus, ref_m.psi_plus, ref_0.e_plus),
            (ref_0.psi_minus, ref_p.psi_minus, ref_m.psi_minus, ref_0.e_minus),
        )
        vecs = []
        for center, plus, minus, eps in branches:
            dvec = (align_phase(plus, center) - align_phase(minus, center)) / (
                2.0 * dt_fd
            )
            vecs.append((center, dvec, eps))
        for psi_k, e_k in ((tot.psi_plus, tot.e_plus), (tot.psi_minus, tot.e_minus)):
            for center_n, _, eps_n in vecs:
                lhs = (e_k - eps_n) * np.vdot(center_n, psi_k)
                rhs = 0.0 + 0.0j
                for center_m, dvec_m, _ in vecs:
                    p_perp = np.eye(2) - np.outer(center_m, center_m.conj())
                    rhs += 1j * np.vdot(center_n, p_perp @ dvec_m) * np.vdot(
                        center_m, psi_k
                    )
                worst = max(worst, abs(lhs - rhs))
    return CriterionResult(
        "C09", "eigenbasis_identity", worst < 1e-7, worst, "< 1e-7"
    )


def criterion_dissipative_ordering(ctx):
    """Relaxation bias in the down-branch work grows with operation time."""
    times = (25.0, 100.0, 500.0)
    devs = []
    unitary_dev = 0.0
    for T in times:
        rec = ctx.moments(T, "down", dissipative=True)[-1]
        devs.append(abs(rec.w1 - rec.w1_ad) * HMHZ)
        rec_u = ctx.moments(T, "down")[-1]
        unitary_dev = max(unitary_dev, abs(rec_u.w1 - rec_u.w1_ad) * HMHZ)
    margin = min(devs[1] - devs[0], devs[2] - devs[1])
    passed = margin > 0 and unitary_dev < 1e-6
    return CriterionResult(
        "C10",
        "dissipative_ordering",
        passed,
        margin,
        "strictly increasing; unitary deviation < 1e-6 h MHz",
        "deviation h MHz by T: "
        + ", ".join(f"{T:.0f}: {d:.4e}" for T, d in zip(times, devs))
        + f"; unitary max {unitary_dev:.3e}",
    )


def criterion_convergence(ctx):
    """Halving dt cuts the final-state error fourfold (second order)."""
    T = 25.0
    sch = ctx.schedule(T)
    s0 = initial_eigenstate(sch, "up")
    finals = {
        dt: propagate_pure(
            sch, total_field_fn(sch), 0.0, T, s0, PropagatorConfig(dt=dt)
        )
        for dt in (0.01, 0.005, 0.00125)
    }
    err_coarse = float(np.linalg.norm(finals[0.01] - finals[0.00125]))
    err_half = float(np.linalg.norm(finals[0.005] - finals[0.00125]))
    ratio = err_coarse / err_half if err_half > 0 else np.inf
    return CriterionResult(
        "C11",
        "propagator_convergence",
        3.5 <= ratio <= 4.5,
        ratio,
        "in [3.5, 4.5]",
        f"errors vs dt = 0.00125 ns reference: {err_coarse:.3e}, {err_half:.3e}",
    )


CRITERIA = {
    "C01": criterion_work_conservation,
    "C02": criterion_fluctuation_inequality,
    "C03": criterion_qgt_equality,
    "C04": criterion_collapse,
    "C05": criterion_frozen_hamiltonian,
    "C06": criterion_frozen_population,
    "C07": criterion_qgt_oracle,
    "C08": criterion_estimator,
    "C09": criterion_eigenbasis_identity,
    "C10": criterion_dissipative_ordering,
    "C11": criterion_convergence,
}


def run_all(config=None, criteria=None, on_result=None):
    """Run the battery; returns a CriterionResult per criterion.

    criteria optionally restricts the run to a subset of ids. Exceptions
    inside a criterion become failed results rather than propagating.
    """
    config = config if config is not None else RunConfig()
    ctx = AcceptanceContext(config)
    results = []
    for cid, fn in CRITERIA.items():
        if criteria is not None and cid not in criteria:
            continue
        try:
            result = fn(ctx)
        except Exception as exc:  # noqa: BLE001 - battery must keep going
            detail = "".join(traceback.format_exception_only(type(exc), exc)).strip()
            result = CriterionResult(
                cid, fn.__name__.removeprefix("criterion_"), False, float("nan"),
                "n/a", f"error: {detail}",
            )
        results.append(result)
        if on_result is not None:
            on_result(result)
    return results
