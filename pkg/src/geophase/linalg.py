"""Small dense complex linear algebra with explicit tolerances.

Matrices are plain 2-D ``numpy`` arrays of ``complex128``; every function
here is pure and never mutates its arguments.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "DimensionError",
    "NumericalError",
    "as_matrix",
    "mat_mul",
    "trace",
    "adjoint",
    "is_hermitian",
    "is_unitary",
    "expm_anti_hermitian",
    "expm_batch",
]


class DimensionError(ValueError):
    """Operands have incompatible shapes."""


class NumericalError(RuntimeError):
    """A computation hit a numerically undefined point (e.g. all-singular trace)."""


@dataclass(frozen=True)
class Tolerances:
    herm_tol: float = 1e-10
    unit_tol: float = 1e-10
    sing_tol: float = 1e-9

    def __post_init__(self):
        for name in ("herm_tol", "unit_tol", "sing_tol"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")


DEFAULT_TOL = Tolerances()


def as_matrix(a: ArrayLike) -> np.ndarray:
    """Coerce to a finite square complex matrix (read-only view of a copy)."""
    m = np.array(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimensionError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    m.flags.writeable = False
    return m


def mat_mul(a: ArrayLike, b: ArrayLike) -> np.ndarray:
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    return a @ b


def trace(a: ArrayLike) -> complex:
    return complex(np.trace(as_matrix(a)))


def adjoint(a: ArrayLike) -> np.ndarray:
    return as_matrix(a).conj().T


def is_hermitian(a: ArrayLike, tol: float = DEFAULT_TOL.herm_tol) -> bool:
    a = as_matrix(a)
    return bool(np.max(np.abs(a - a.conj().T)) < tol)


def is_unitary(a: ArrayLike, tol: float = DEFAULT_TOL.unit_tol) -> bool:
    """True iff max |(a a^dagger - I)_ij| < tol."""
    a = as_matrix(a)
    return bool(np.max(np.abs(a @ a.conj().T - np.eye(a.shape[0]))) < tol)


def expm_anti_hermitian(h: ArrayLike, theta: float, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Return ``exp(-i * theta * h)`` for Hermitian ``h``.

    Uses the spectral decomposition of ``h``; the result is unitary up to
    rounding.

    Raises
    ------
    ValueError
        If ``h`` is not Hermitian within ``tol.herm_tol`` or ``theta`` is not finite.
    """
    h = as_matrix(h)
    if not is_hermitian(h, tol.herm_tol):
        raise ValueError("generator is not Hermitian")
    if not np.isfinite(theta):
        raise ValueError("theta must be finite")
    if theta == 0:
        return np.eye(h.shape[0], dtype=complex)
    w, v = np.linalg.eigh(0.5 * (h + h.conj().T))
    return (v * np.exp(-1j * theta * w)) @ v.conj().T


def expm_batch(hs: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """Vectorised ``exp(-i theta_k h_k)`` over a stack of Hermitian generators.

    No Hermiticity check; callers build ``hs`` from Hermitian parts.
    """
    w, v = np.linalg.eigh(hs)
    phases = np.exp(-1j * np.asarray(thetas)[:, None] * w)
    return (v * phases[:, None, :]) @ np.conj(np.swapaxes(v, -1, -2))
