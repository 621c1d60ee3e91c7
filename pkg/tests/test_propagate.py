"""Propagators: exact-rotation midpoint stepping and the dissipative
master-equation integrator."""

import numpy as np
import pytest

from sta_workbench import (
    DissipationParams,
    PropagatorConfig,
    frozen_field_fn,
    propagate_lindblad,
    propagate_lindblad_sampled,
    propagate_pure,
    propagate_pure_sampled,
    reference_field_fn,
    total_field_fn,
)
from sta_workbench.exceptions import PropagatorConfigError
from sta_workbench.qubit import DOWN, UP, reference_eigenstate
from sta_workbench.schedules import total_field

STANDARD_DISS = DissipationParams(t1=22_000.0, t2_star=64_000.0)


def zero_field(t):
    return np.zeros(np.shape(np.asarray(t, dtype=float)) + (3,))


class TestConfig:
    def test_dt_must_be_positive(self):
        with pytest.raises(PropagatorConfigError):
            PropagatorConfig(dt=0.0)

    def test_unknown_method(self):
        with pytest.raises(PropagatorConfigError):
            PropagatorConfig(method="euler")

    def test_dt_too_coarse_for_run(self, ramp25):
        with pytest.raises(PropagatorConfigError, match="T/100"):
            propagate_pure(
                ramp25, total_field_fn(ramp25), 0.0, 25.0, UP, PropagatorConfig(dt=0.5)
            )

    def test_dissipation_params(self):
        assert STANDARD_DISS.t2 == pytest.approx(
            1.0 / (0.5 / 22_000.0 + 1.0 / 64_000.0)
        )
        with pytest.raises(ValueError):
            DissipationParams(t1=-1.0, t2_star=10.0)


class TestPurePropagation:
    def test_zero_duration_is_identity(self, ramp25, cfg):
        s = np.array([0.6, 0.8j])
        np.testing.assert_array_equal(
            propagate_pure(ramp25, total_field_fn(ramp25), 3.0, 3.0, s, cfg), s
        )

    def test_reversed_interval_rejected(self, ramp25, cfg):
        with pytest.raises(ValueError):
            propagate_pure(ramp25, total_field_fn(ramp25), 5.0, 3.0, UP, cfg)

    def test_times_must_be_sorted(self, ramp25, cfg):
        with pytest.raises(ValueError):
            propagate_pure_sampled(ramp25, total_field_fn(ramp25), [0.0, 2.0, 1.0], UP, cfg)

    def test_corrected_drive_tracks_the_eigenstate(self, ramp25, cfg):
        final = propagate_pure(ramp25, total_field_fn(ramp25), 0.0, 25.0, UP, cfg)
        target = reference_eigenstate(np.pi / 3, np.pi, "up")
        assert abs(np.vdot(target, final)) ** 2 > 1.0 - 1e-8

    def test_bare_reference_drive_leaks(self, ramp25, cfg):
        final = propagate_pure(ramp25, reference_field_fn(ramp25), 0.0, 25.0, UP, cfg)
        target = reference_eigenstate(np.pi / 3, np.pi, "up")
        assert abs(np.vdot(target, final)) ** 2 < 0.99

    def test_norm_preserved(self, ramp25, cfg):
        sch = ramp25.with_operation_time(500.0)
        final = propagate_pure(sch, total_field_fn(sch), 0.0, 500.0, UP, cfg)
        assert abs(np.linalg.norm(final) - 1.0) < 1e-10

    def test_global_phase_equivariance(self, ramp25, cfg):
        base = propagate_pure(ramp25, total_field_fn(ramp25), 0.0, 17.0, UP, cfg)
        shifted = propagate_pure(
            ramp25, total_field_fn(ramp25), 0.0, 17.0, np.exp(0.7j) * UP, cfg
        )
        np.testing.assert_allclose(shifted, np.exp(0.7j) * base, atol=1e-12)

    def test_second_order_convergence(self, ramp25):
        finals = {
            dt: propagate_pure(
                ramp25, total_field_fn(ramp25), 0.0, 25.0, UP, PropagatorConfig(dt=dt)
            )
            for dt in (0.01, 0.005, 0.00125)
        }
        coarse = np.linalg.norm(finals[0.01] - finals[0.00125])
        half = np.linalg.norm(finals[0.005] - finals[0.00125])
        assert 3.5 <= coarse / half <= 4.5

    def test_sampled_matches_individual_runs(self, ramp25, cfg):
        times = np.array([0.0, 6.0, 14.0, 25.0])
        sampled = propagate_pure_sampled(ramp25, total_field_fn(ramp25), times, UP, cfg)
        for t, state in zip(times[1:], sampled[1:]):
            single = propagate_pure(ramp25, total_field_fn(ramp25), 0.0, t, UP, cfg)
            np.testing.assert_allclose(state, single, atol=1e-8)


class TestFrozenField:
    def test_clamps_after_tau_m(self, ramp25):
        fn = frozen_field_fn(ramp25, 10.0)
        np.testing.assert_array_equal(fn(4.0), total_field(ramp25, 4.0))
        frozen_value = total_field(ramp25, 10.0)
        np.testing.assert_array_equal(fn(10.0), frozen_value)
        np.testing.assert_array_equal(fn(1500.0), frozen_value)

    def test_vectorized(self, ramp25):
        fn = frozen_field_fn(ramp25, 10.0)
        out = fn(np.array([2.0, 10.0, 50.0]))
        assert out.shape == (3, 3)
        np.testing.assert_array_equal(out[1], out[2])


class TestLindblad:
    def test_unitary_limit_matches_pure(self, ramp25):
        cfg = PropagatorConfig(dt=0.001)
        weak = DissipationParams(t1=1e9, t2_star=1e9)
        rho = propagate_lindblad(
            ramp25, total_field_fn(ramp25), 0.0, 25.0, np.outer(UP, UP.conj()), cfg, weak
        )
        pure = propagate_pure(ramp25, total_field_fn(ramp25), 0.0, 25.0, UP, cfg)
        np.testing.assert_allclose(rho, np.outer(pure, pure.conj()), atol=1e-8)

    def test_excited_state_relaxation(self, constant_schedule):
        # zero drive, hold for t1: the excited population reaches 1/e
        sch = constant_schedule(T=22_000.0)
        rho = propagate_lindblad(
            sch,
            zero_field,
            0.0,
            22_000.0,
            np.outer(DOWN, DOWN.conj()),
            PropagatorConfig(dt=1.0),
            STANDARD_DISS,
        )
        assert abs(rho[1, 1].real - np.exp(-1.0)) / np.exp(-1.0) < 0.02

    def test_coherence_decays_at_combined_rate(self, constant_schedule):
        sch = constant_schedule(T=10_000.0)
        plus = np.array([1.0, 1.0]) / np.sqrt(2.0)
        rho = propagate_lindblad(
            sch,
            zero_field,
            0.0,
            10_000.0,
            np.outer(plus, plus.conj()),
            PropagatorConfig(dt=1.0),
            STANDARD_DISS,
        )
        expected = 0.5 * np.exp(-10_000.0 / STANDARD_DISS.t2)
        assert abs(abs(rho[0, 1]) - expected) < 1e-9

    def test_pure_dephasing_normalization(self, constant_schedule):
        # with relaxation switched off the off-diagonal decays as exp(-t/t2_star);
        # the combined-rate formula absorbs the (negligible) t1 remnant exactly
        sch = constant_schedule(T=10_000.0)
        diss = DissipationParams(t1=1e12, t2_star=64_000.0)
        plus = np.array([1.0, 1.0]) / np.sqrt(2.0)
        rho = propagate_lindblad(
            sch,
            zero_field,
            0.0,
            10_000.0,
            np.outer(plus, plus.conj()),
            PropagatorConfig(dt=1.0),
            diss,
        )
        assert abs(diss.t2 / 64_000.0 - 1.0) < 1e-7
        assert abs(abs(rho[0, 1]) - 0.5 * np.exp(-10_000.0 / diss.t2)) < 1e-9

    def test_trace_and_positivity_along_driven_run(self, ramp25, cfg):
        times = np.linspace(0.0, 25.0, 11)
        rhos = propagate_lindblad_sampled(
            ramp25,
            total_field_fn(ramp25),
            times,
            np.outer(DOWN, DOWN.conj()),
            cfg,
            STANDARD_DISS,
        )
        for rho in rhos:
            assert abs(np.trace(rho).real - 1.0) < 1e-9
            assert np.min(np.linalg.eigvalsh(rho)) > -1e-9

    def test_fixed_point_is_ground_state(self, constant_schedule):
        sch = constant_schedule(T=220_000.0)
        rho = propagate_lindblad(
            sch,
            zero_field,
            0.0,
            220_000.0,
            np.array([[0.3, 0.2j], [-0.2j, 0.7]], dtype=complex),
            PropagatorConfig(dt=20.0),
            STANDARD_DISS,
        )
        np.testing.assert_allclose(rho, np.diag([1.0, 0.0]), atol=1e-3)

    def test_rate_guard(self, constant_schedule):
        sch = constant_schedule(T=22_000.0)
        with pytest.raises(PropagatorConfigError, match="rate"):
            propagate_lindblad(
                sch,
                zero_field,
                0.0,
                100.0,
                np.outer(UP, UP.conj()),
                PropagatorConfig(dt=100.0),
                STANDARD_DISS,
            )

    def test_disabled_dissipation_rejected(self, ramp25, cfg):
        off = DissipationParams(t1=1.0, t2_star=1.0, enabled=False)
        with pytest.raises(ValueError, match="disabled"):
            propagate_lindblad(
                ramp25, total_field_fn(ramp25), 0.0, 1.0, np.outer(UP, UP.conj()), cfg, off
            )
