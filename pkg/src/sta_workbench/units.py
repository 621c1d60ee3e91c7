"""Unit conventions and conversions.

Internally hbar = 1, time is in ns, and fields/energies are angular
frequencies in rad/ns. At the reporting boundary frequencies become
ordinary MHz and energies become E/h in MHz; both are the same map.
"""

import numpy as np

TWO_PI = 2.0 * np.pi


def mhz_to_rad_ns(f_mhz):
    """Ordinary frequency in MHz -> angular frequency in rad/ns."""
    return TWO_PI * 1e-3 * f_mhz


def rad_ns_to_mhz(w):
    """Angular frequency in rad/ns -> ordinary frequency in MHz.

    With hbar = 1 this is also the map from energy to E/h in MHz.
    """
    return w * 1e3 / TWO_PI
