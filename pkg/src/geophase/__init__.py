"""Geometric phases of pure and mixed spin states.

Mixed-state interferometric phase ``arg Tr(U rho)``, its visibility
singularities, spin-J holonomy around circuits on the sphere, and
modular versus unwrapped phase along evolution paths.
"""

from .interferometry import FringeFit, FringeSample, fit_fringes, synthesize_fringes
from .linalg import (DEFAULT_TOL, DimensionError, NumericalError, Tolerances, adjoint,
                     expm_anti_hermitian, is_hermitian, is_unitary, mat_mul, trace)
from .phase import (TRANSPORT_SIGN, HolonomyResult, PhaseResult, PhaseTrace, estimate_spin,
                    holonomy_phase, holonomy_unitary, is_singular, mixed_phase_from_spectrum,
                    principal_arg, trace_phase, track_phase)
from .sphere import (SphericalCircuit, complementary, discretize, monte_carlo_solid_angle,
                     solid_angle, solid_angle_cap, solid_angle_polygon)
from .spin import (DensityMatrix, SpinSystem, build_spin, diagonal_state, maximally_mixed,
                   pure_state_along, rotation_unitary)

__version__ = "0.1.0"
