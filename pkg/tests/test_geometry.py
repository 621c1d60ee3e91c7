"""Geometric tensor, Bloch trajectories, and the parameter-speed estimator."""

import numpy as np
import pytest

from sta_workbench import DissipationParams, PropagatorConfig
from sta_workbench.geometry import (
    BlochSample,
    bloch_trajectory,
    excess_from_qgt,
    geometric_quantity_estimator,
    qgt_analytic,
    qgt_numeric,
)


class TestAnalyticTensor:
    def test_pole(self):
        g = qgt_analytic(0.0)
        assert (g.g_theta_theta, g.g_theta_phi, g.g_phi_phi) == (0.25, 0.0, 0.0)

    def test_equator(self):
        assert qgt_analytic(np.pi / 2).g_phi_phi == pytest.approx(0.25)

    def test_sixty_degrees(self):
        assert qgt_analytic(np.pi / 3).g_phi_phi == pytest.approx(3.0 / 16.0)

    def test_matrix_is_positive(self):
        for theta in np.linspace(0.0, np.pi, 12):
            assert np.min(np.linalg.eigvalsh(qgt_analytic(theta).as_matrix())) >= -1e-12


class TestNumericTensor:
    def test_branches_agree(self):
        up = qgt_numeric("up", np.pi / 5, 1.1).as_matrix()
        down = qgt_numeric("down", np.pi / 5, 1.1).as_matrix()
        np.testing.assert_allclose(up, down, atol=1e-8)

    def test_azimuthal_motion_at_pole_is_gauge(self):
        assert qgt_numeric("up", 0.0, 0.7).g_phi_phi < 1e-8

    def test_against_closed_form(self):
        g = qgt_numeric("up", np.pi / 3, 0.7).as_matrix()
        np.testing.assert_allclose(g, np.diag([0.25, 3.0 / 16.0]), atol=1e-6)

    def test_random_points(self):
        rng = np.random.default_rng(31)
        for _ in range(25):
            theta = rng.uniform(0.1, np.pi - 0.1)
            phi = rng.uniform(0.0, 2 * np.pi)
            g = qgt_numeric("up", theta, phi).as_matrix()
            np.testing.assert_allclose(g, qgt_analytic(theta).as_matrix(), atol=1e-6)

    def test_gauge_injection_is_inert(self):
        base = qgt_numeric("up", 0.9, 0.4).as_matrix()
        twisted = qgt_numeric(
            "up", 0.9, 0.4, gauge=lambda th, ph: 0.3 * th + 0.7 * ph
        ).as_matrix()
        np.testing.assert_allclose(twisted, base, atol=1e-10)

    @pytest.mark.parametrize("step", [0.0, 0.1])
    def test_step_validation(self, step):
        with pytest.raises(ValueError):
            qgt_numeric("up", 0.5, 0.5, d_lambda=step)


class TestExcessFromQgt:
    def test_endpoints_vanish(self, ramp25):
        assert excess_from_qgt(ramp25, 0.0) == 0.0
        assert abs(excess_from_qgt(ramp25, 1.0)) < 1e-30

    def test_doubling_time_quarters_excess(self, ramp25):
        slow = ramp25.with_operation_time(50.0)
        tb = np.linspace(0.1, 0.9, 9)
        np.testing.assert_allclose(
            excess_from_qgt(slow, tb), excess_from_qgt(ramp25, tb) / 4.0, rtol=1e-15
        )


class TestBlochTrajectory:
    def test_tracks_schedule_angles(self, ramp25, cfg):
        samples = bloch_trajectory(ramp25, cfg)
        assert len(samples) == 51
        first = samples[0]
        assert first.theta_q == 0.0 and first.phi_q == 0.0 and first.phi_uncertain
        for s in samples:
            assert abs(s.r_q - 1.0) < 1e-9
            assert abs(s.theta_q - float(ramp25.theta(s.tbar))) < 1e-6
            if not s.phi_uncertain:
                assert abs(s.phi_q - float(ramp25.phi(s.tbar))) < 1e-6
        assert samples[-1].theta_q == pytest.approx(np.pi / 3, abs=1e-6)
        assert samples[-1].phi_q == pytest.approx(np.pi, abs=1e-6)

    def test_dissipation_shrinks_the_bloch_vector(self, ramp25, cfg):
        sch = ramp25.with_operation_time(500.0)
        diss = DissipationParams(t1=22_000.0, t2_star=64_000.0)
        samples = bloch_trajectory(sch, cfg, diss=diss)
        assert 0.9 < samples[-1].r_q < 0.999

    def test_sample_validation(self):
        with pytest.raises(ValueError):
            BlochSample(tbar=0.0, r_q=1.5, theta_q=0.0, phi_q=0.0)


def exact_samples(sch, dtbar):
    n = round(1.0 / dtbar)
    grid = np.arange(n + 1) / n
    return [
        BlochSample(
            float(tb),
            1.0,
            float(sch.theta(tb)),
            float(sch.phi(tb)),
            bool(sch.theta(tb) < 1e-6),
        )
        for tb in grid
    ]


class TestEstimator:
    def test_constant_samples_give_zero(self):
        samples = [BlochSample(0.02 * k, 1.0, 0.8, 1.3) for k in range(11)]
        points = geometric_quantity_estimator(samples, 0.02)
        assert all(p.value == 0.0 for p in points)

    def test_needs_three_samples(self):
        samples = [BlochSample(0.0, 1.0, 0.1, 0.0), BlochSample(0.1, 1.0, 0.2, 0.0)]
        with pytest.raises(ValueError):
            geometric_quantity_estimator(samples)

    def test_rejects_non_uniform_grid(self):
        samples = [
            BlochSample(0.0, 1.0, 0.1, 0.0),
            BlochSample(0.1, 1.0, 0.2, 0.0),
            BlochSample(0.35, 1.0, 0.3, 0.0),
        ]
        with pytest.raises(ValueError, match="uniform"):
            geometric_quantity_estimator(samples)

    def test_interior_points_only(self, ramp25):
        points = geometric_quantity_estimator(exact_samples(ramp25, 0.02), 0.02)
        assert len(points) == 49
        assert points[0].tbar == pytest.approx(0.02)
        assert points[-1].tbar == pytest.approx(0.98)

    def test_quadratic_convergence_to_the_bracket(self, ramp25):
        errors = {}
        for dtbar in (0.02, 0.01):
            points = geometric_quantity_estimator(exact_samples(ramp25, dtbar), dtbar)
            est = np.array([p.value for p in points])
            tb = np.array([p.tbar for p in points])
            exact = excess_from_qgt(ramp25, tb) * ramp25.T**2
            errors[dtbar] = np.max(np.abs(est - exact) / exact)
        assert errors[0.02] < 0.05
        assert 3.8 < errors[0.02] / errors[0.01] < 4.2

    def test_pole_stencils_are_flagged(self, ramp25):
        points = geometric_quantity_estimator(exact_samples(ramp25, 0.02), 0.02)
        assert points[0].uncertain  # stencil touches the tbar = 0 pole sample
        assert not points[10].uncertain

    def test_estimator_on_propagated_trajectory(self, ramp25, cfg):
        samples = bloch_trajectory(ramp25, cfg)
        points = geometric_quantity_estimator(samples, 0.02)
        tb = np.array([p.tbar for p in points])
        exact = excess_from_qgt(ramp25, tb) * ramp25.T**2
        est = np.array([p.value for p in points])
        assert np.max(np.abs(est - exact) / exact) < 0.05
