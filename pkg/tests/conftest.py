import numpy as np
import pytest

from sta_workbench import CallableSchedule, PropagatorConfig, RampSchedule
from sta_workbench.units import mhz_to_rad_ns


@pytest.fixture(scope="session")
def ramp25():
    """Standard drive family at its fastest operation time."""
    return RampSchedule(mhz_to_rad_ns(10.0), mhz_to_rad_ns(10.0), 25.0)


@pytest.fixture(scope="session")
def cfg():
    return PropagatorConfig(dt=0.005)


def _as_grid(value):
    def fn(tbar):
        return value * np.ones_like(np.asarray(tbar, dtype=float))

    return fn


@pytest.fixture(scope="session")
def constant_schedule():
    """Factory for fixed-direction schedules, optionally with an amplitude ramp."""

    def make(T=25.0, omega=0.08, theta=0.6, phi=1.1, omega_slope=0.0):
        return CallableSchedule(
            T=T,
            omega_fn=lambda tb: omega + omega_slope * np.asarray(tb, dtype=float),
            theta_fn=_as_grid(theta),
            phi_fn=_as_grid(phi),
            d_omega_fn=_as_grid(omega_slope),
            d_theta_fn=_as_grid(0.0),
            d_phi_fn=_as_grid(0.0),
        )

    return make


@pytest.fixture(scope="session")
def random_schedule():
    """Factory for smooth random schedules with exact derivatives."""

    def make(rng, T=40.0):
        a0 = rng.uniform(0.06, 0.15)
        a1 = rng.uniform(-0.03, 0.03)
        k_om = int(rng.integers(1, 4))
        th0 = rng.uniform(0.3, 1.2)
        th1 = rng.uniform(-0.5, 0.5)
        k_th = int(rng.integers(1, 4))
        p_th = rng.uniform(0.0, np.pi)
        ph0 = rng.uniform(0.0, 2.0)
        ph1 = rng.uniform(-1.5, 1.5)
        k_ph = int(rng.integers(1, 4))
        p_ph = rng.uniform(0.0, np.pi)
        return CallableSchedule(
            T=T,
            omega_fn=lambda tb: a0 + a1 * np.sin(np.pi * k_om * np.asarray(tb, float)),
            d_omega_fn=lambda tb: a1
            * np.pi
            * k_om
            * np.cos(np.pi * k_om * np.asarray(tb, float)),
            theta_fn=lambda tb: th0
            + th1 * np.sin(np.pi * k_th * np.asarray(tb, float) + p_th),
            d_theta_fn=lambda tb: th1
            * np.pi
            * k_th
            * np.cos(np.pi * k_th * np.asarray(tb, float) + p_th),
            phi_fn=lambda tb: ph0
            + ph1 * np.sin(np.pi * k_ph * np.asarray(tb, float) + p_ph),
            d_phi_fn=lambda tb: ph1
            * np.pi
            * k_ph
            * np.cos(np.pi * k_ph * np.asarray(tb, float) + p_ph),
        )

    return make
