"""Parallel transport of spin-J states around circuits on the sphere.

Every weight m of the start axis picks up exp(-i m alpha), alpha being the
(counterclockwise-positive) solid angle of the circuit. The two surfaces
bounded by the circuit have solid angles alpha and alpha - 4 pi; they give
the same phase for every half-integer m.
"""
# %%
import numpy as np

from geophase import (SphericalCircuit, build_spin, discretize, holonomy_phase, holonomy_unitary,
                      monte_carlo_solid_angle, solid_angle)

triangle = SphericalCircuit.polygon([[1, 0, 0], [0, 0.6, 0.8], [0, -0.6, 0.8]])
alpha = solid_angle(triangle)
mc, se = monte_carlo_solid_angle(triangle, 10**6, seed=0)
print(f"alpha (angle sum) = {alpha:.6f}, Monte Carlo = {mc:.4f} +- {se:.4f}")

# %%
spin = build_spin(3)  # J = 3/2
u = holonomy_unitary(spin, discretize(triangle, 2000))
print(" m     beta        -m alpha (mod 2pi)   via alpha - 4pi")
for two_m in spin.two_ms:
    h = holonomy_phase(spin, triangle, two_m, 2000, unitary=u)
    other = np.angle(np.exp(-1j * h.m * (alpha - 4 * np.pi)))
    print(f"{h.m:+.1f}  {h.beta:+.8f}  {h.predicted:+.8f}        {other:+.8f}")

# %% convergence on a small circle: error falls ~100x per 10x steps
cap = SphericalCircuit.cap(0.8)
for steps in (100, 1000, 10000):
    h = holonomy_phase(spin, cap, 3, steps)
    print(f"{steps:6d} steps: error {h.error:.2e}")
