"""Spin-J angular momentum operators, rotations and density matrices.

Conventions
-----------
* Quantum numbers are passed doubled (``two_j``, ``two_m``) so that
  half-integers stay exact.
* The ``jz`` diagonal descends from ``+J`` to ``-J``; every weight list
  follows that order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike

from .linalg import DEFAULT_TOL, DimensionError, Tolerances, as_matrix, expm_anti_hermitian

__all__ = [
    "SpinSystem",
    "DensityMatrix",
    "as_axis",
    "unit",
    "build_spin",
    "rotation_unitary",
    "maximally_mixed",
    "diagonal_state",
    "pure_state_along",
    "axis_eigenbasis",
]

AXIS_TOL = 1e-12


def unit(v: ArrayLike) -> np.ndarray:
    """Normalise a nonzero 3-vector."""
    v = np.asarray(v, dtype=float)
    if v.shape != (3,) or not np.all(np.isfinite(v)):
        raise ValueError(f"expected a finite 3-vector, got {v!r}")
    n = np.linalg.norm(v)
    if n == 0:
        raise ValueError("cannot normalise the zero vector")
    return v / n


def as_axis(n: ArrayLike, tol: float = AXIS_TOL) -> np.ndarray:
    """Validate a unit 3-vector (no silent renormalisation)."""
    n = np.asarray(n, dtype=float)
    if n.shape != (3,) or not np.all(np.isfinite(n)):
        raise ValueError(f"axis must be a finite 3-vector, got {n!r}")
    if abs(n @ n - 1.0) >= tol:
        raise ValueError(f"axis is not a unit vector (|n|^2 = {n @ n!r})")
    return n


@dataclass(frozen=True, eq=False)
class SpinSystem:
    """Spin ``J = two_j / 2`` with its Cartesian operators ``jx, jy, jz``."""

    two_j: int
    jx: np.ndarray = field(repr=False)
    jy: np.ndarray = field(repr=False)
    jz: np.ndarray = field(repr=False)

    @property
    def j(self) -> float:
        return self.two_j / 2

    @property
    def dim(self) -> int:
        return self.two_j + 1

    @property
    def two_ms(self) -> list[int]:
        """Doubled weights in basis order: ``two_j, two_j - 2, ..., -two_j``."""
        return list(range(self.two_j, -self.two_j - 1, -2))

    def component(self, n: ArrayLike) -> np.ndarray:
        """``n . J`` for a 3-vector ``n``."""
        n = np.asarray(n, dtype=float)
        return n[0] * self.jx + n[1] * self.jy + n[2] * self.jz

    def index_of(self, two_m: int) -> int:
        """Basis index of weight ``m = two_m / 2``."""
        if two_m not in self.two_ms:
            raise ValueError(f"m = {two_m}/2 is not a weight of spin {self.two_j}/2")
        return (self.two_j - two_m) // 2


def build_spin(two_j: int) -> SpinSystem:
    """Spin matrices from the ladder operators.

    ``<m+1|J+|m> = sqrt(J(J+1) - m(m+1))`` in the descending ``jz`` basis.
    """
    if int(two_j) != two_j or two_j < 0:
        raise ValueError(f"two_j must be a nonnegative integer, got {two_j!r}")
    two_j = int(two_j)
    j = two_j / 2
    m = j - np.arange(two_j + 1)
    # J+ raises m, i.e. moves one index up in the descending ordering.
    jp = np.diag(np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1)), k=1).astype(complex)
    jm = jp.conj().T
    ops = [0.5 * (jp + jm), -0.5j * (jp - jm), np.diag(m).astype(complex)]
    for op in ops:
        op.flags.writeable = False
    return SpinSystem(two_j, *ops)


def rotation_unitary(s: SpinSystem, n: ArrayLike, theta: float,
                     tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """``exp(-i theta n.J)`` for a unit axis ``n``."""
    n = as_axis(n)
    return expm_anti_hermitian(s.component(n), theta, tol)


def axis_eigenbasis(s: SpinSystem, n: ArrayLike) -> np.ndarray:
    """Columns are eigenvectors of ``n.J`` in the order ``m = J, ..., -J``."""
    n = as_axis(n)
    w, v = np.linalg.eigh(s.component(n))
    # eigh sorts ascending; flip to match the descending jz convention
    order = np.argsort(-w)
    if np.max(np.abs(w[order] - np.array(s.two_ms) / 2)) > 1e-9:
        raise RuntimeError("n.J spectrum does not match the spin weights")
    return v[:, order]


class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace state.

    Construction validates all three properties; the stored matrix is
    read-only.
    """

    TRACE_TOL = 1e-12
    EIG_TOL = 1e-10

    def __init__(self, mat: ArrayLike, tol: Tolerances = DEFAULT_TOL):
        m = np.array(as_matrix(mat))
        if np.max(np.abs(m - m.conj().T)) >= tol.herm_tol:
            raise ValueError("density matrix is not Hermitian")
        m = 0.5 * (m + m.conj().T)
        tr = np.trace(m).real
        if abs(tr - 1.0) >= self.TRACE_TOL:
            raise ValueError(f"density matrix trace is {tr!r}, expected 1")
        if np.min(np.linalg.eigvalsh(m)) < -self.EIG_TOL:
            raise ValueError("density matrix has a negative eigenvalue")
        m.flags.writeable = False
        self.mat = m

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.mat)[::-1]

    def __array__(self, dtype=None, copy=None):
        return self.mat if dtype is None else self.mat.astype(dtype)

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"


def maximally_mixed(dim: int) -> DensityMatrix:
    if int(dim) != dim or dim < 1:
        raise ValueError(f"dim must be a positive integer, got {dim!r}")
    return DensityMatrix(np.eye(int(dim)) / dim)


def diagonal_state(s: SpinSystem, lambdas: Sequence[float], axis: ArrayLike | None = None) -> DensityMatrix:
    """``sum_m lambda_m |m><m|`` with weights ordered ``m = J, ..., -J``.

    The states ``|m>`` are ``jz`` eigenstates, or ``n.J`` eigenstates when
    ``axis`` is given. Degenerate weights are accepted.
    """
    lam = np.asarray(lambdas, dtype=float)
    if lam.shape != (s.dim,):
        raise DimensionError(f"expected {s.dim} weights, got {lam.size}")
    if np.any(lam < 0):
        raise ValueError("weights must be nonnegative")
    if abs(lam.sum() - 1.0) >= 1e-12:
        raise ValueError(f"weights sum to {lam.sum()!r}, expected 1")
    if axis is None:
        return DensityMatrix(np.diag(lam).astype(complex))
    v = axis_eigenbasis(s, axis)
    return DensityMatrix((v * lam) @ v.conj().T)


def pure_state_along(s: SpinSystem, n: ArrayLike, two_m: int) -> DensityMatrix:
    """Projector onto the ``n.J = m`` eigenstate."""
    k = s.index_of(two_m)
    psi = axis_eigenbasis(s, n)[:, k]
    return DensityMatrix(np.outer(psi, psi.conj()))
