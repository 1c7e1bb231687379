"""Two-beam interferometer readout.

An arm unitary ``U`` acting on internal state ``rho`` shifts the fringes
``I(chi) = 1 + |Tr(U rho)| cos(chi - arg Tr(U rho))``.  The fit inverts
this by linear least squares on ``(1, cos chi, sin chi)``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from numpy.typing import ArrayLike

from .linalg import DEFAULT_TOL, Tolerances
from .phase import principal_arg, trace_phase

__all__ = [
    "FringeSample",
    "FringeFit",
    "synthesize_fringes",
    "fit_fringes",
    "format_fringe_csv",
    "write_fringe_csv",
    "read_fringe_csv",
    "parse_fringe_csv",
]

CSV_HEADER = ("chi", "intensity")


@dataclass(frozen=True)
class FringeSample:
    chi: float
    intensity: float


@dataclass(frozen=True)
class FringeFit:
    phase: float
    visibility: float
    residual: float
    mean: float = 1.0


def synthesize_fringes(u: ArrayLike, rho, chis: Sequence[float], noise: float = 0.0,
                       seed: int | None = None, tol: Tolerances = DEFAULT_TOL) -> list[FringeSample]:
    """Fringe intensities at each arm phase in ``chis``.

    ``noise`` adds Gaussian noise of that standard deviation (seeded);
    intensities are clipped at zero.
    """
    res = trace_phase(u, rho, tol)
    chis = np.asarray(chis, dtype=float)
    if res.singular:
        intensity = np.ones_like(chis)
    else:
        intensity = 1.0 + res.visibility * np.cos(chis - res.phase)
    if noise:
        rng = np.random.default_rng(seed)
        intensity = np.clip(intensity + rng.normal(scale=noise, size=chis.shape), 0.0, None)
    return [FringeSample(float(c), float(i)) for c, i in zip(chis, intensity)]


def fit_fringes(samples: Iterable[FringeSample], tol: Tolerances = DEFAULT_TOL) -> FringeFit:
    """Recover ``(phase, visibility)`` from a sampled fringe pattern.

    Raises
    ------
    ValueError
        Fewer than three distinct arm phases, phases spanning no more than
        ``pi`` (mod ``2 pi``), or a degenerate design matrix.
    """
    samples = list(samples)
    chi = np.array([s.chi for s in samples], dtype=float)
    y = np.array([s.intensity for s in samples], dtype=float)
    if len(samples) < 3 or len(np.unique(np.round(np.mod(chi, 2 * np.pi), 12))) < 3:
        raise ValueError("need at least 3 samples at distinct arm phases")
    if _circular_span(chi) <= np.pi:
        raise ValueError("arm phases must span more than pi")
    design = np.column_stack([np.ones_like(chi), np.cos(chi), np.sin(chi)])
    coef, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    if rank < 3:
        raise ValueError("rank-deficient fringe samples")
    a, b, c = coef
    residual = float(np.sqrt(np.mean((design @ coef - y) ** 2)))
    if a <= 0:
        raise ValueError("fitted mean intensity is not positive")
    vis = float(np.hypot(b, c) / a)
    if vis < tol.sing_tol:
        return FringeFit(0.0, 0.0, residual, float(a))
    return FringeFit(principal_arg(complex(b, c)), min(vis, 1.0), residual, float(a))


def _circular_span(chi: np.ndarray) -> float:
    """Length of the shortest arc of the circle covering all phases."""
    x = np.sort(np.mod(chi, 2 * np.pi))
    gaps = np.diff(np.concatenate([x, x[:1] + 2 * np.pi]))
    return float(2 * np.pi - gaps.max())


def format_fringe_csv(samples: Iterable[FringeSample]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for s in samples:
        writer.writerow((repr(s.chi), repr(s.intensity)))
    return buf.getvalue()


def parse_fringe_csv(text: str) -> list[FringeSample]:
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(h.strip() for h in rows[0]) != CSV_HEADER:
        raise ValueError('fringe CSV must start with the header "chi,intensity"')
    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 2:
            raise ValueError(f"line {lineno}: expected 2 columns, got {len(row)}")
        try:
            chi, intensity = float(row[0]), float(row[1])
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        if not (np.isfinite(chi) and np.isfinite(intensity)):
            raise ValueError(f"line {lineno}: non-finite value")
        out.append(FringeSample(chi, intensity))
    return out


def write_fringe_csv(path: str | Path, samples: Iterable[FringeSample]) -> None:
    Path(path).write_text(format_fringe_csv(samples))


def read_fringe_csv(path: str | Path) -> list[FringeSample]:
    return parse_fringe_csv(Path(path).read_text())
