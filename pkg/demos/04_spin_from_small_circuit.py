"""Reading the spin weight off an infinitesimal circuit.

For a circuit of tiny solid angle alpha the geometric phase beta = -m alpha
is itself tiny, so the zero-winding branch is the only sensible one and
m = -beta / alpha needs no winding search.
"""
# %%
import numpy as np

from geophase import (TRANSPORT_SIGN, SphericalCircuit, build_spin, discretize, estimate_spin,
                      holonomy_phase, holonomy_unitary)

alpha = 1e-3
cap = SphericalCircuit.cap(np.arccos(1 - alpha / (2 * np.pi)), [0.0, 0.6, 0.8])
spin = build_spin(5)
u = holonomy_unitary(spin, discretize(cap, 10**4))
for two_m in spin.two_ms:
    h = holonomy_phase(spin, cap, two_m, 10**4, unitary=u)
    print(f"m = {h.m:+.1f}: beta = {h.beta:+.3e}, estimate = {estimate_spin(h.beta, h.alpha_used, TRANSPORT_SIGN):+.6f}")
