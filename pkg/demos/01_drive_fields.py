"""Construct the drive: reference ramp, counter-diabatic correction, total field.

The standard family ramps the amplitude from 10 to 20 MHz while the
direction sweeps 60 degrees in polar angle and 180 degrees in azimuth.
Compressing that path into T = 25 ns needs a sizeable corrective field;
at T = 500 ns the correction is a few percent and the drive is close to
adiabatic.

Run:  python demos/01_drive_fields.py
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from sta_workbench import RampSchedule, cd_field_analytic, reference_field, total_field
from sta_workbench.units import mhz_to_rad_ns, rad_ns_to_mhz

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

sch = RampSchedule(mhz_to_rad_ns(10.0), mhz_to_rad_ns(10.0), T=25.0)

print("drive endpoints (MHz, ordinary frequency):")
for t in (0.0, 12.5, 25.0):
    b0 = rad_ns_to_mhz(reference_field(sch, t))
    bcd = rad_ns_to_mhz(cd_field_analytic(sch, t))
    print(f"  t = {t:5.1f} ns   reference {np.round(b0, 3)}   correction {np.round(bcd, 3)}")
print("the correction vanishes at both endpoints, as the protocol requires.\n")

t = np.linspace(0.0, 25.0, 501)
b0 = rad_ns_to_mhz(reference_field(sch, t))
btot = rad_ns_to_mhz(total_field(sch, t))

fig, axes = plt.subplots(1, 2, figsize=(9, 3.4), sharey=True)
for ax, data, title in ((axes[0], b0, "reference"), (axes[1], btot, "total")):
    for i, label in enumerate("xyz"):
        ax.plot(t, data[:, i], label=f"b{label}")
    ax.set_xlabel("t (ns)")
    ax.set_title(f"{title} field, T = 25 ns")
axes[0].set_ylabel("component / 2 pi (MHz)")
axes[1].legend()
fig.tight_layout()
fig.savefig(os.path.join(OUT, "drive_fields.svg"))
print(f"wrote {OUT}/drive_fields.svg")

# the corrective burden shrinks as 1/T
for T in (25.0, 100.0, 500.0):
    slow = sch.with_operation_time(T)
    tt = np.linspace(0.0, T, 501)
    ratio = np.linalg.norm(cd_field_analytic(slow, tt), axis=-1) / np.linalg.norm(
        reference_field(slow, tt), axis=-1
    )
    print(f"T = {T:5.0f} ns   max |b_cd| / |b_0| = {ratio.max():.4f}")
