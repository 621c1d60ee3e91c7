"""The geometric tensor, measured three ways.

The metric on the drive direction angles is diag(1, sin^2 theta) / 4.
This demo checks the finite-difference construction against the closed
form, then extracts the same geometry from a simulated state-tomography
trajectory and compares it with the rescaled work-fluctuation excess.

Run:  python demos/04_geometric_tensor.py
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from sta_workbench import (
    PropagatorConfig,
    RampSchedule,
    bloch_trajectory,
    excess_from_qgt,
    geometric_quantity_estimator,
    moment_table,
    qgt_analytic,
    qgt_numeric,
)
from sta_workbench.units import mhz_to_rad_ns
from sta_workbench.workstats import default_grid

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

print("finite-difference metric vs closed form:")
for theta in (0.4, np.pi / 3, 1.4):
    numeric = qgt_numeric("up", theta, 0.8).as_matrix()
    exact = qgt_analytic(theta).as_matrix()
    print(f"  theta = {theta:.3f}   max deviation = {np.max(np.abs(numeric - exact)):.2e}")

cfg = PropagatorConfig(dt=0.005)
base = RampSchedule(mhz_to_rad_ns(10.0), mhz_to_rad_ns(10.0), T=25.0)
tbars = default_grid()

fig, axes = plt.subplots(1, 2, figsize=(9, 3.4))
for T in (25.0, 50.0, 100.0, 200.0):
    sch = base.with_operation_time(T)
    samples = bloch_trajectory(sch, cfg)
    points = geometric_quantity_estimator(samples, 0.02)
    axes[0].plot([p.tbar for p in points], [p.value for p in points],
                 "o", markersize=2, label=f"T = {T:.0f} ns")
    excess = np.array([r.excess2 for r in moment_table(sch, "up", cfg, tbars=tbars)])
    axes[1].plot(tbars, T**2 * excess, linewidth=1.0)

tb = np.linspace(0.0, 1.0, 301)
axes[0].plot(tb, excess_from_qgt(base, tb) * base.T**2, "k--", linewidth=1.0,
             label="analytic bracket")
axes[1].plot(tb, excess_from_qgt(base, tb) * base.T**2, "k--", linewidth=1.0)
axes[0].set_xlabel("t / T")
axes[0].set_ylabel("(dl/dtbar)^2 from tomography")
axes[0].legend(fontsize=7)
axes[1].set_xlabel("t / T")
axes[1].set_ylabel("T^2 x excess (rad^2)")
fig.tight_layout()
fig.savefig(os.path.join(OUT, "geometric_tensor.svg"))
print("tomography estimates and rescaled excesses for all T fall on one curve.")
print(f"wrote {OUT}/geometric_tensor.svg")
