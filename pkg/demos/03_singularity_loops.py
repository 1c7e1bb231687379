"""Modular versus history-dependent phase around the singularity.

For a qubit pure state along +z the trace Tr(U rho) vanishes for the
rotation by pi about an equatorial axis, the one carrying the state to
its antipode. Two closed loops of unitaries starting and ending at I are
compared: one encircles that point in parameter space, one does not.
Both end with the same modular phase; the unwrapped phases differ by 2 pi.
"""
# %%
import numpy as np

from geophase import build_spin, pure_state_along, rotation_unitary, trace_phase, track_phase
from geophase.scenarios import singularity_loops

spin = build_spin(1)
rho = pure_state_along(spin, [0, 0, 1], 1)


def as_evolution(loop):
    out = []
    for t, r in zip(np.linspace(0, 1, len(loop)), loop):
        angle = np.linalg.norm(r)
        out.append((t, np.eye(2) if angle == 0 else rotation_unitary(spin, r / angle, angle)))
    return out


# %%
for name, loop in singularity_loops(np.array([0.0, 0.0, 1.0]), 401).items():
    evolution = as_evolution(loop)
    trace = track_phase(evolution, rho)
    final = trace_phase(evolution[-1][1], rho)
    print(f"{name:14s} phase mod 2pi = {final.phase:+.3f}  unwrapped = {trace.unwrapped_final:+.4f}  "
          f"winding = {trace.winding:+d}  min visibility = {trace.column('visibility').min():.3f}")
