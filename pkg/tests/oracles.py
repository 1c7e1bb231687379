"""Independent reference computations used only by the tests."""

import numpy as np


def expm_taylor(a, terms=40):
    """exp(a) by scaling-and-squaring with a truncated Taylor series."""
    a = np.asarray(a, dtype=complex)
    norm = np.max(np.sum(np.abs(a), axis=1))
    k = max(0, int(np.ceil(np.log2(norm))) + 1) if norm > 0 else 0
    b = a / 2**k
    out = np.eye(len(a), dtype=complex)
    term = np.eye(len(a), dtype=complex)
    for n in range(1, terms):
        term = term @ b / n
        out = out + term
    for _ in range(k):
        out = out @ out
    return out


def su2_rodrigues(n, theta):
    """cos(theta/2) I - i sin(theta/2) n.sigma"""
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]])
    sz = np.diag([1.0, -1.0]).astype(complex)
    ns = n[0] * sx + n[1] * sy + n[2] * sz
    return np.cos(theta / 2) * np.eye(2) - 1j * np.sin(theta / 2) * ns


def triangle_area_closed_form(a, b, c):
    """Oriented solid angle of a geodesic triangle, reduced to [0, 4 pi).

    tan(omega/2) = a.(b x c) / (1 + a.b + b.c + c.a); the sign of the
    triple product gives the orientation.
    """
    num = a @ np.cross(b, c)
    den = 1 + a @ b + b @ c + c @ a
    omega = 2 * np.arctan2(num, den)
    return omega % (4 * np.pi)


def random_unit(rng, size=None):
    v = rng.normal(size=(3,) if size is None else (size, 3))
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def random_unitary(rng, d):
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density(rng, d, rank=None):
    g = rng.normal(size=(d, rank or d)) + 1j * rng.normal(size=(d, rank or d))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_hermitian(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return 0.5 * (a + a.conj().T)


def modular_distance(x, y):
    return abs(np.angle(np.exp(1j * (x - y))))
