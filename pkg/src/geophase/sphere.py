"""Closed oriented circuits on the unit sphere and their solid angles.

Orientation: a circuit traversed counterclockwise as seen from outside the
sphere bounds a region on its left with positive solid angle. Solid angles
are reported in ``[0, 4*pi)``; a full sphere reduces to 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike

from .spin import as_axis

__all__ = [
    "FOUR_PI",
    "EDGE_GUARD",
    "SphericalCircuit",
    "reduce_solid_angle",
    "solid_angle_polygon",
    "solid_angle_cap",
    "solid_angle",
    "complementary",
    "discretize",
    "perpendicular",
    "monte_carlo_solid_angle",
]

FOUR_PI = 4 * np.pi
EDGE_GUARD = 1e-8


def reduce_solid_angle(alpha: float) -> float:
    a = float(np.mod(alpha, FOUR_PI))
    return 0.0 if a >= FOUR_PI else a


def perpendicular(n: ArrayLike) -> np.ndarray:
    """A fixed unit vector orthogonal to ``n`` (deterministic choice)."""
    n = np.asarray(n, dtype=float)
    helper = np.array([1.0, 0.0, 0.0]) if abs(n[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e = helper - (helper @ n) * n
    return e / np.linalg.norm(e)


@dataclass(frozen=True, eq=False)
class SphericalCircuit:
    """A polygon of geodesic edges or a small circle (cap boundary).

    Use :meth:`polygon` or :meth:`cap` rather than the raw constructor.
    """

    kind: str
    vertices: np.ndarray
    polar_angle: float | None = None
    axis: np.ndarray | None = None
    orientation: int = 1

    @classmethod
    def polygon(cls, vertices: Sequence[ArrayLike]) -> "SphericalCircuit":
        v = np.array([as_axis(p) for p in vertices], dtype=float)
        if len(v) < 3:
            raise ValueError("a polygon needs at least 3 vertices")
        for k in range(len(v)):
            sep = _angle_between(v[k], v[(k + 1) % len(v)])
            if not (EDGE_GUARD < sep < np.pi - EDGE_GUARD):
                raise ValueError(f"degenerate edge {k}: consecutive vertices "
                                 f"separated by {sep!r} rad")
        v.flags.writeable = False
        return cls("polygon", v)

    @classmethod
    def cap(cls, polar_angle: float, axis: ArrayLike = (0.0, 0.0, 1.0),
            orientation: int = 1) -> "SphericalCircuit":
        """Small circle at ``polar_angle`` from ``axis``.

        Positive orientation runs counterclockwise about ``axis`` so the
        region containing ``axis`` is enclosed. The circuit starts at
        ``cos(t) axis + sin(t) e`` with ``e = perpendicular(axis)``.
        """
        if not (0.0 <= polar_angle <= np.pi):
            raise ValueError(f"polar angle {polar_angle!r} outside [0, pi]")
        if orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")
        n = as_axis(axis).copy()
        e = perpendicular(n)
        start = np.cos(polar_angle) * n + np.sin(polar_angle) * e
        v = start[None, :].copy()
        v.flags.writeable = False
        n.flags.writeable = False
        return cls("cap", v, float(polar_angle), n, orientation)

    @property
    def start(self) -> np.ndarray:
        return self.vertices[0]

    def reversed(self) -> "SphericalCircuit":
        if self.kind == "cap":
            return SphericalCircuit.cap(self.polar_angle, self.axis, -self.orientation)
        return SphericalCircuit.polygon(self.vertices[::-1])


def _angle_between(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.arctan2(np.linalg.norm(np.cross(a, b)), a @ b))


def _tangent_toward(v: np.ndarray, w: np.ndarray) -> np.ndarray:
    t = w - (w @ v) * v
    return t / np.linalg.norm(t)


def solid_angle_polygon(c: SphericalCircuit) -> float:
    """Oriented spherical excess ``sum(interior angles) - (n - 2) pi``.

    Interior angles are measured on the left of the direction of travel.
    """
    if c.kind != "polygon":
        raise ValueError("solid_angle_polygon needs a polygon circuit")
    v = c.vertices
    n = len(v)
    total = 0.0
    for k in range(n):
        here, prev, nxt = v[k], v[k - 1], v[(k + 1) % n]
        t_out = _tangent_toward(here, nxt)
        t_back = _tangent_toward(here, prev)
        # counterclockwise (about the outward normal) from t_out to t_back
        ang = np.arctan2(here @ np.cross(t_out, t_back), t_out @ t_back)
        total += ang % (2 * np.pi)
    return reduce_solid_angle(total - (n - 2) * np.pi)


def solid_angle_cap(theta: float, orientation: int = 1) -> float:
    if not (0.0 <= theta <= np.pi):
        raise ValueError(f"polar angle {theta!r} outside [0, pi]")
    area = 2 * np.pi * (1 - np.cos(theta))
    return reduce_solid_angle(area if orientation > 0 else FOUR_PI - area)


def solid_angle(c: SphericalCircuit) -> float:
    if c.kind == "cap":
        return solid_angle_cap(c.polar_angle, c.orientation)
    return solid_angle_polygon(c)


def complementary(alpha: float) -> float:
    return reduce_solid_angle(FOUR_PI - alpha)


def _slerp(a: np.ndarray, b: np.ndarray, steps: int) -> np.ndarray:
    """``steps`` points from ``a`` (inclusive) toward ``b`` (exclusive)."""
    omega = _angle_between(a, b)
    t = np.arange(steps)[:, None] / steps
    pts = (np.sin((1 - t) * omega) * a + np.sin(t * omega) * b) / np.sin(omega)
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def discretize(c: SphericalCircuit, steps_per_edge: int) -> np.ndarray:
    """Closed polyline of unit vectors, shape ``(N + 1, 3)``, last row == first.

    Polygons are sampled along geodesic edges; a cap with ``steps_per_edge``
    gives that many equally spaced points on its circle.
    """
    if int(steps_per_edge) != steps_per_edge or steps_per_edge < 1:
        raise ValueError("steps_per_edge must be a positive integer")
    steps_per_edge = int(steps_per_edge)
    if c.kind == "cap":
        n, start = c.axis, c.start
        e1 = perpendicular(n)
        e2 = np.cross(n, e1)
        phi = c.orientation * 2 * np.pi * np.arange(steps_per_edge) / steps_per_edge
        s, z = np.sin(c.polar_angle), np.cos(c.polar_angle)
        pts = z * n + s * (np.cos(phi)[:, None] * e1 + np.sin(phi)[:, None] * e2)
        pts[0] = start
    else:
        v = c.vertices
        pts = np.concatenate([_slerp(v[k], v[(k + 1) % len(v)], steps_per_edge)
                              for k in range(len(v))])
    pts = pts / np.linalg.norm(pts, axis=1, keepdims=True)
    return np.vstack([pts, pts[:1]])


def _points_in_polygon(points: np.ndarray, vertices: np.ndarray, ref: np.ndarray) -> np.ndarray:
    """Signed crossing count of arcs ``points -> ref`` with the polygon edges.

    Returns ``[ref in L] - [p in L]`` for each point, where ``L`` is the
    region left of the boundary.
    """
    count = np.zeros(len(points), dtype=int)
    m = np.cross(points, ref)            # normals of the sample arcs
    mid = points + ref                   # arcs are < pi, so mid picks the right intersection
    for a, b in zip(vertices, np.roll(vertices, -1, axis=0)):
        ne = np.cross(a, b)
        sp = points @ ne
        sq = ref @ ne
        sa = m @ a
        sb = m @ b
        crosses = (np.sign(sp) != np.sign(sq)) & (np.sign(sa) != np.sign(sb))
        x = np.cross(ne, m)
        x *= np.sign(np.einsum("ij,ij->i", x, mid))[:, None]
        crosses &= (x @ (a + b)) > 0
        # +1 when the arc enters the left side (n_e > 0) on its way to ref
        count += np.where(crosses, np.where(sq > 0, 1, -1), 0)
    return count


def _reference_point(vertices: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Random point kept far from every edge great circle (off the boundary)."""
    cand = rng.normal(size=(64, 3))
    cand /= np.linalg.norm(cand, axis=1, keepdims=True)
    normals = np.cross(vertices, np.roll(vertices, -1, axis=0))
    normals /= np.linalg.norm(normals, axis=1, keepdims=True)
    clearance = np.min(np.abs(cand @ normals.T), axis=1)
    return cand[np.argmax(clearance)]


def monte_carlo_solid_angle(c: SphericalCircuit, n_samples: int, seed: int = 20240611,
                            chunk: int = 1_000_000) -> tuple[float, float]:
    """Monte Carlo estimate ``(alpha, standard_error)`` of a polygon's solid angle.

    Points are drawn uniformly on the sphere and classified by their
    crossing count against a fixed reference point; the angle-sum formula is
    not used.
    """
    if c.kind != "polygon":
        raise ValueError("Monte Carlo oracle supports polygon circuits")
    rng = np.random.default_rng(seed)
    verts = np.asarray(c.vertices)
    ref = _reference_point(verts, rng)
    counts = []
    left = n_samples
    while left > 0:
        k = min(chunk, left)
        p = rng.normal(size=(k, 3))
        p /= np.linalg.norm(p, axis=1, keepdims=True)
        counts.append(_points_in_polygon(p, verts, ref))
        left -= k
    w = np.concatenate(counts)
    # w takes values in {-1, 0} if ref is outside L and {0, 1} if inside
    ref_inside = 1 if np.any(w > 0) else 0
    inside = ref_inside - w
    frac = inside.mean()
    se = FOUR_PI * np.sqrt(frac * (1 - frac) / n_samples)
    return float(FOUR_PI * frac), float(se)
