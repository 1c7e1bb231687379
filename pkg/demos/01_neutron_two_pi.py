"""Unpolarized neutrons, one beam rotated by 2 pi.

The internal state is I/2 and the arm unitary is -I, so Tr(U rho) = -1:
a phase shift of pi with full fringe visibility. Tracking the rotation
continuously shows the visibility passing through zero halfway.
"""
# %%
import numpy as np

from geophase import (build_spin, fit_fringes, maximally_mixed, rotation_unitary,
                      synthesize_fringes, trace_phase, track_phase)

spin = build_spin(1)
rho = maximally_mixed(2)
axis = np.array([0.3, -0.4, 0.866])
axis /= np.linalg.norm(axis)

u = rotation_unitary(spin, axis, 2 * np.pi)
res = trace_phase(u, rho)
print(f"Tr(U rho) = {res.value:.3f}   phase = {res.phase:.6f}   visibility = {res.visibility:.6f}")

# %% fringe pattern: I(chi) = 1 - cos(chi)
chis = 2 * np.pi * np.arange(16) / 16
fit = fit_fringes(synthesize_fringes(u, rho, chis))
print(f"fitted phase = {fit.phase:.6f}, visibility = {fit.visibility:.6f}")

# %% along the way
evolution = [(t, rotation_unitary(spin, axis, 2 * np.pi * t)) for t in np.linspace(0, 1, 21)]
trace = track_phase(evolution, rho)
for p in trace.samples[::4]:
    print(f"t={p.t:.2f}  visibility={p.visibility:.3f}  raw={p.raw_phase:+.3f}  unwrapped={p.unwrapped_phase:+.3f}")
print("singular crossings at t =", trace.singular_crossings, " winding =", trace.winding)
