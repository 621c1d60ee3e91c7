"""The two virtual measurement protocols, run as experiments.

Frozen Hamiltonian: clamp the drive at an interruption time and fit the
Ramsey fringe recorded during the hold; the fitted frequency is the
instantaneous level splitting. Frozen population: hand the qubit over to
a great-circle drive that rotates the instantaneous eigenbasis onto the
measurement axis, turning eigenstate populations into plain z readouts.

Run:  python demos/03_virtual_experiments.py
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from sta_workbench import (
    PropagatorConfig,
    RampSchedule,
    extract_eigenenergies,
    frozen_hamiltonian_sweep,
    frozen_population_sweep,
    total_field,
)
from sta_workbench.units import mhz_to_rad_ns, rad_ns_to_mhz
from sta_workbench.workstats import conditional_probs

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

cfg = PropagatorConfig(dt=0.005)
sch = RampSchedule(mhz_to_rad_ns(10.0), mhz_to_rad_ns(10.0), T=25.0)

tau_ms = np.arange(0.0, 26.0, 1.0)
records = frozen_hamiltonian_sweep(sch, tau_ms, cfg)
fits = [extract_eigenenergies(r) for r in records]
fitted = rad_ns_to_mhz(np.array([f.e_plus for f in fits]))
exact = rad_ns_to_mhz(
    np.array([0.5 * np.linalg.norm(total_field(sch, tau)) for tau in tau_ms])
)
adiabatic = rad_ns_to_mhz(0.5 * np.asarray(sch.omega(tau_ms / sch.T)))
print("frozen-Hamiltonian sweep, T = 25 ns:")
print(f"  worst fit error        : {np.max(np.abs(fitted - exact)):.2e} MHz")
print(f"  peak excess over bare  : {np.max(fitted - adiabatic):.3f} MHz "
      f"at tau_m = {tau_ms[np.argmax(fitted - adiabatic)]:.0f} ns")

taus = np.linspace(0.0, 25.0, 26)
pops = frozen_population_sweep(sch, taus, "up", cfg)
direct = np.array([conditional_probs(sch, tau, "up", cfg) for tau in taus])
handover = np.array([r.p_minus_given_n for r in pops])
print("frozen-population sweep:")
print(f"  worst |handover - direct| : {np.max(np.abs(handover - direct[:, 1])):.2e}")
print(f"  peak leakage              : {handover.max():.4f} "
      f"at tau_m = {taus[np.argmax(handover)]:.0f} ns")

fig, axes = plt.subplots(1, 3, figsize=(12, 3.4))
axes[0].plot(records[16].tau_d[:200], records[16].p_up[:200], linewidth=0.9)
axes[0].set_xlabel("hold time (ns)")
axes[0].set_ylabel("P_up")
axes[0].set_title("fringe at tau_m = 16 ns")
axes[1].plot(tau_ms, fitted, "o", markersize=3, label="fringe fit")
axes[1].plot(tau_ms, exact, "-", linewidth=1.0, label="exact splitting / 2")
axes[1].plot(tau_ms, adiabatic, "--", linewidth=1.0, label="bare branch")
axes[1].set_xlabel("tau_m (ns)")
axes[1].set_ylabel("E+ / h (MHz)")
axes[1].legend(fontsize=7)
axes[2].plot(taus, handover, "o", markersize=3, label="handover readout")
axes[2].plot(taus, direct[:, 1], "-", linewidth=1.0, label="direct projection")
axes[2].set_xlabel("tau_m (ns)")
axes[2].set_ylabel("P(lower branch | started up)")
axes[2].legend(fontsize=7)
fig.tight_layout()
fig.savefig(os.path.join(OUT, "virtual_experiments.svg"))
print(f"wrote {OUT}/virtual_experiments.svg")
