"""Interferometric, holonomic and mixed-state phases.

Branch convention: principal arguments live in ``(-pi, pi]``. Values
within ``BRANCH_EPS`` of the cut are reported as ``+pi`` so that a real
negative trace always carries phase ``pi``.

Sign convention: with positive (counterclockwise) solid angle ``alpha``,
parallel transport around a circuit multiplies the ``n.J = m`` state by
``exp(-i m alpha)``; ``TRANSPORT_SIGN`` records that ``-1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike

from .linalg import (DEFAULT_TOL, DimensionError, NumericalError, Tolerances, as_matrix,
                     expm_batch, is_unitary)
from .sphere import SphericalCircuit, discretize, solid_angle
from .spin import DensityMatrix, SpinSystem, axis_eigenbasis

__all__ = [
    "BRANCH_EPS",
    "TRANSPORT_SIGN",
    "SPIN_ESTIMATE_MAX_ALPHA",
    "PhaseResult",
    "PhaseSample",
    "PhaseTrace",
    "HolonomyResult",
    "principal_arg",
    "phase_from_complex",
    "trace_phase",
    "is_singular",
    "holonomy_unitary",
    "holonomy_phase",
    "mixed_phase_from_spectrum",
    "track_phase",
    "estimate_spin",
]

BRANCH_EPS = 1e-12
TRANSPORT_SIGN = -1
SPIN_ESTIMATE_MAX_ALPHA = 0.1
MAX_STEP = 0.1
CLOSURE_TOL = 1e-12


def principal_arg(z: complex) -> float:
    """Argument of ``z`` in ``(-pi, pi]``."""
    phi = float(np.angle(z))
    if np.pi - abs(phi) <= BRANCH_EPS:
        return float(np.pi)
    return phi


@dataclass(frozen=True)
class PhaseResult:
    phase: float
    visibility: float
    singular: bool
    value: complex = field(default=0j, compare=False)


def phase_from_complex(z: complex, tol: Tolerances = DEFAULT_TOL) -> PhaseResult:
    """Phase/visibility/singularity readout of a complex amplitude."""
    z = complex(z)
    vis = abs(z)
    if vis < tol.sing_tol:
        return PhaseResult(0.0, vis, True, z)
    return PhaseResult(principal_arg(z), vis, False, z)


def _check_pair(u: ArrayLike, rho, tol: Tolerances) -> tuple[np.ndarray, DensityMatrix]:
    u = as_matrix(u)
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix(rho, tol)
    if u.shape[0] != rho.dim:
        raise DimensionError(f"unitary is {u.shape[0]}-dimensional, state is {rho.dim}-dimensional")
    if not is_unitary(u, tol.unit_tol):
        raise ValueError("operator is not unitary within unit_tol")
    return u, rho


def trace_phase(u: ArrayLike, rho, tol: Tolerances = DEFAULT_TOL) -> PhaseResult:
    """``arg Tr(u rho)`` with visibility ``|Tr(u rho)|``.

    Below ``tol.sing_tol`` the phase is undefined: the result carries
    ``phase=0.0`` and ``singular=True``.
    """
    u, rho = _check_pair(u, rho, tol)
    return phase_from_complex(np.trace(u @ rho.mat), tol)


def is_singular(u: ArrayLike, rho, tol: Tolerances = DEFAULT_TOL) -> bool:
    return trace_phase(u, rho, tol).singular


def _ordered_product(stack: np.ndarray) -> np.ndarray:
    """``stack[-1] @ ... @ stack[1] @ stack[0]`` by pairwise reduction."""
    d = stack.shape[-1]
    while len(stack) > 1:
        if len(stack) % 2:
            stack = np.concatenate([stack, np.eye(d, dtype=complex)[None]])
        stack = stack[1::2] @ stack[0::2]
    return stack[0]


def holonomy_unitary(s: SpinSystem, path: ArrayLike) -> np.ndarray:
    """Parallel-transport unitary along a closed, finely sampled path of axes.

    Each step ``n_k -> n_{k+1}`` is the rotation about ``n_k x n_{k+1}`` by
    the angle between them, which has no component about the transported
    axis. Steps are composed in time order (later steps act on the left).
    """
    path = np.asarray(path, dtype=float)
    if path.ndim != 2 or path.shape[1] != 3 or len(path) < 2:
        raise ValueError("path must be an (N, 3) array with N >= 2")
    if np.max(np.abs(np.linalg.norm(path, axis=1) - 1)) > 1e-12:
        raise ValueError("path points must be unit vectors")
    if np.max(np.abs(path[0] - path[-1])) > CLOSURE_TOL:
        raise ValueError("path is not closed")
    a, b = path[:-1], path[1:]
    cross = np.cross(a, b)
    sin = np.linalg.norm(cross, axis=1)
    cos = np.einsum("ij,ij->i", a, b)
    if np.any((cos < 0) & (sin < 1e-8)):
        raise ValueError("antipodal adjacent samples")
    angle = np.arctan2(sin, cos)
    if np.any(angle >= MAX_STEP):
        raise ValueError(f"adjacent samples must be closer than {MAX_STEP} rad")
    moving = sin > 0
    if not np.any(moving):
        return np.eye(s.dim, dtype=complex)
    axes = cross[moving] / sin[moving, None]
    gens = (axes[:, 0, None, None] * s.jx + axes[:, 1, None, None] * s.jy
            + axes[:, 2, None, None] * s.jz)
    return _ordered_product(expm_batch(gens, angle[moving]))


@dataclass(frozen=True)
class HolonomyResult:
    beta: float
    alpha_used: float
    two_m: int
    steps: int

    @property
    def m(self) -> float:
        return self.two_m / 2

    @property
    def predicted(self) -> float:
        """Principal value of ``-m alpha``."""
        return principal_arg(np.exp(1j * TRANSPORT_SIGN * self.m * self.alpha_used))

    @property
    def error(self) -> float:
        """Modular distance between ``beta`` and ``-m alpha``."""
        return abs(float(np.angle(np.exp(1j * (self.beta - TRANSPORT_SIGN * self.m * self.alpha_used)))))


def holonomy_phase(s: SpinSystem, c: SphericalCircuit, two_m: int, steps_per_edge: int,
                   tol: Tolerances = DEFAULT_TOL, unitary: np.ndarray | None = None) -> HolonomyResult:
    """Geometric phase of the ``m`` eigenstate of the start axis around ``c``.

    ``unitary`` may be passed to reuse a holonomy already computed for the
    same circuit and discretisation.
    """
    k = s.index_of(two_m)
    path = discretize(c, steps_per_edge)
    if unitary is None:
        unitary = holonomy_unitary(s, path)
    psi = axis_eigenbasis(s, c.start)[:, k]
    z = psi.conj() @ unitary @ psi
    if abs(z) < tol.sing_tol:
        raise NumericalError("transported eigenstate has vanishing overlap")
    return HolonomyResult(principal_arg(z), solid_angle(c), two_m, len(path) - 1)


def mixed_phase_from_spectrum(lambdas: Sequence[float], betas: Sequence[float],
                              tol: Tolerances = DEFAULT_TOL) -> PhaseResult:
    """``arg sum_j lambda_j exp(i beta_j)`` with the :func:`trace_phase` contract."""
    lam = np.asarray(lambdas, dtype=float)
    beta = np.asarray(betas, dtype=float)
    if lam.shape != beta.shape or lam.ndim != 1:
        raise DimensionError("lambdas and betas must be equal-length 1-D sequences")
    if np.any(lam < 0):
        raise ValueError("weights must be nonnegative")
    if abs(lam.sum() - 1.0) >= 1e-12:
        raise ValueError(f"weights sum to {lam.sum()!r}, expected 1")
    return phase_from_complex(np.sum(lam * np.exp(1j * beta)), tol)


@dataclass(frozen=True)
class PhaseSample:
    t: float
    raw_phase: float
    unwrapped_phase: float
    visibility: float


@dataclass(frozen=True)
class PhaseTrace:
    samples: tuple[PhaseSample, ...]
    winding: int
    singular_crossings: tuple[float, ...]

    @property
    def raw_final(self) -> float:
        return self.samples[-1].raw_phase

    @property
    def unwrapped_final(self) -> float:
        return self.samples[-1].unwrapped_phase

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(p, name) for p in self.samples])


def track_phase(evolution: Sequence[tuple[float, ArrayLike]], rho,
                tol: Tolerances = DEFAULT_TOL) -> PhaseTrace:
    """Follow ``Tr(U(t) rho)`` along a sampled evolution ``[(t, U(t)), ...]``.

    The unwrapped (history-dependent) phase accumulates the principal
    increments ``arg(z_k / z_prev)`` between consecutive non-singular
    samples. Singular samples get a value interpolated linearly in ``t``
    across the gap and their ``t`` is recorded as a crossing. A jump larger
    than ``pi/2`` between non-singular neighbours means a zero was stepped
    over; its location is estimated and recorded as well.
    """
    if len(evolution) == 0:
        raise ValueError("empty evolution")
    ts = np.array([float(t) for t, _ in evolution])
    us = [as_matrix(u) for _, u in evolution]
    if np.any(np.diff(ts) < 0):
        raise ValueError("samples must be ordered in t")
    d = us[0].shape[0]
    if np.max(np.abs(us[0] - np.eye(d))) >= tol.unit_tol:
        raise ValueError("first sample of the evolution must be the identity")
    rho = _state(rho, tol)
    zs = np.array([np.trace(_check_pair(u, rho, tol)[0] @ rho.mat) for u in us])
    vis = np.abs(zs)
    singular = vis < tol.sing_tol
    if np.all(singular):
        raise NumericalError("every sample of the evolution is singular")

    raw = np.array([0.0 if sg else principal_arg(z) for z, sg in zip(zs, singular)])
    unwrapped = np.zeros_like(raw)
    crossings: list[float] = []
    good = np.flatnonzero(~singular)
    first = good[0]
    unwrapped[: first + 1] = raw[first]
    crossings.extend(ts[:first].tolist())
    for p, q in zip(good[:-1], good[1:]):
        step = principal_arg(zs[q] / zs[p])
        unwrapped[q] = unwrapped[p] + step
        if q > p + 1:
            frac = (ts[p + 1:q] - ts[p]) / (ts[q] - ts[p])
            unwrapped[p + 1:q] = unwrapped[p] + frac * step
            crossings.extend(ts[p + 1:q].tolist())
        elif abs(step) > np.pi / 2:
            # zero between samples: locate by linear interpolation of z
            w = vis[p] / (vis[p] + vis[q])
            crossings.append(float(ts[p] + w * (ts[q] - ts[p])))
    last = good[-1]
    unwrapped[last + 1:] = unwrapped[last]
    crossings.extend(ts[last + 1:].tolist())

    samples = tuple(PhaseSample(float(t), float(r), float(uw), float(v))
                    for t, r, uw, v in zip(ts, raw, unwrapped, vis))
    winding = int(round((unwrapped[-1] - raw[-1]) / (2 * np.pi)))
    return PhaseTrace(samples, winding, tuple(float(c) for c in crossings))


def _state(rho, tol: Tolerances) -> DensityMatrix:
    return rho if isinstance(rho, DensityMatrix) else DensityMatrix(rho, tol)


def estimate_spin(beta: float, alpha: float, sign: int = 1) -> float:
    """Weight ``sign * beta / alpha`` from an infinitesimal circuit.

    Restricted to ``0 < alpha < 0.1`` and ``|beta| < pi`` where the
    zero-winding branch is the only consistent one. Pass
    ``sign=TRANSPORT_SIGN`` to read ``m`` off a :class:`HolonomyResult`.
    """
    if not (0.0 < alpha < SPIN_ESTIMATE_MAX_ALPHA):
        raise ValueError(f"alpha = {alpha!r} is outside the infinitesimal regime "
                         f"(0, {SPIN_ESTIMATE_MAX_ALPHA}); the winding branch is ambiguous")
    if not abs(beta) < np.pi:
        raise ValueError("|beta| must be below pi")
    return sign * beta / alpha
