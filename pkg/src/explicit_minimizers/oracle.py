"""Discrete N-particle minimization of the interaction energy.

An independent check on the analytic minimizers: the empirical measure of N
points relaxed by gradient descent approximates the continuum minimizer, so
its support radius, radial profile and energy should match.

Initial points are drawn uniformly from the ball of radius 2 with numpy's
``Generator(PCG64(seed))``; directions come from normalized standard normals
and radii from ``2 * U^(1/d)``.
"""

from __future__ import annotations

import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import kernels
from .numerics import DomainError, sphere_area
from .potential import Potential

log = logging.getLogger(__name__)

__all__ = [
    "DescentStalledError",
    "ParticleConfig",
    "initial_points",
    "discrete_energy",
    "discrete_energy_grad",
    "minimize_particles",
    "radial_histogram",
    "support_radius",
    "write_points_csv",
    "write_histogram_csv",
]

INIT_RADIUS = 2.0
ARMIJO_SLOPE = 1e-4
BACKTRACK = 0.5
MAX_BACKTRACKS = 60


class DescentStalledError(ArithmeticError):
    """The line search found no acceptable step."""


@dataclass
class ParticleConfig:
    d: int
    points: np.ndarray
    potential: Potential
    seed: int = 0
    step_count: int = 0
    grad_norm: float = math.inf
    converged: bool = False

    def __post_init__(self):
        self.points = np.ascontiguousarray(self.points, dtype=float)
        if self.points.ndim != 2 or self.points.shape[1] != self.d:
            raise DomainError(f"points must have shape (N, {self.d}), got {self.points.shape}")
        if self.points.shape[0] < 2:
            raise DomainError("need at least two particles")
        if not np.all(np.isfinite(self.points)):
            raise DomainError("particle coordinates must be finite")

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def energy(self) -> float:
        return discrete_energy(self)


def _min_distance(x: np.ndarray) -> float:
    diff = x[:, None, :] - x[None, :, :]
    r2 = np.einsum("ijk,ijk->ij", diff, diff)
    np.fill_diagonal(r2, np.inf)
    return float(np.sqrt(r2.min()))


def initial_points(n: int, d: int, seed: int, radius: float = INIT_RADIUS) -> np.ndarray:
    """``n`` uniform samples from the ball of the given radius; redrawn until pairwise distinct."""
    rng = np.random.Generator(np.random.PCG64(seed))
    while True:
        z = rng.standard_normal((n, d))
        z /= np.linalg.norm(z, axis=1, keepdims=True)
        x = z * (radius * rng.random(n) ** (1.0 / d))[:, None]
        if _min_distance(x) > 0.0:
            return x


def discrete_energy(cfg: ParticleConfig) -> float:
    """``1/(2 N^2) * sum_{i != j} W(x_i - x_j)``; ``+inf`` for coincident points under singular repulsion."""
    pot = cfg.potential
    e = kernels.pair_energy(cfg.points, pot.a, pot.b)
    return e / (2.0 * cfg.n**2)


def discrete_energy_grad(points: np.ndarray, pot: Potential) -> tuple[float, np.ndarray]:
    n = points.shape[0]
    e, g = kernels.pair_energy_grad(np.ascontiguousarray(points, dtype=float), pot.a, pot.b)
    scale = 1.0 / (2.0 * n * n)
    return e * scale, g * scale


def minimize_particles(
    n: int,
    pot: Potential,
    seed: int = 0,
    max_steps: int = 20000,
    gtol: float = 1e-9,
    points: np.ndarray | None = None,
) -> ParticleConfig:
    """Gradient descent with Armijo backtracking on the discrete energy.

    Each line search starts from the Barzilai-Borwein step ``s.s / s.y`` of the
    previous move (doubled previous step when that is not positive) and halves
    until the Armijo condition holds, so accepted steps always decrease the
    energy. Stops when the max-norm of the gradient is at most ``gtol``, after
    ``max_steps`` accepted steps, or once the energy no longer changes in
    double precision (``converged`` is then False). The result is centered at
    the origin.
    """
    if n < 2:
        raise DomainError("need at least two particles")
    d = pot.d
    x = initial_points(n, d, seed) if points is None else np.array(points, dtype=float)
    if x.shape != (n, d):
        raise DomainError(f"initial points must have shape ({n}, {d})")
    e, g = discrete_energy_grad(x, pot)
    if not math.isfinite(e):
        raise DescentStalledError("initial energy is not finite")
    # per-particle gradients scale like 1/N, so steps start at N
    t = float(n)
    steps = 0
    gmax = float(np.max(np.abs(g)))
    while gmax > gtol and steps < max_steps:
        g2 = float(np.sum(g * g))
        for _ in range(MAX_BACKTRACKS):
            x_new = x - t * g
            e_new, g_new = discrete_energy_grad(x_new, pot)
            if math.isfinite(e_new) and e_new <= e - ARMIJO_SLOPE * t * g2:
                break
            t *= BACKTRACK
        else:
            # no decrease left at double precision
            log.info("line search exhausted after %d steps (gradient %.3e)", steps, gmax)
            break
        if e_new >= e:
            # the Armijo decrease is below the resolution of the energy
            log.info("energy stagnated after %d steps (gradient %.3e)", steps, gmax)
            break
        sk, yk = x_new - x, g_new - g
        sy = float(np.sum(sk * yk))
        t = float(np.sum(sk * sk)) / sy if sy > 0.0 else 2.0 * t
        x, e, g = x_new, e_new, g_new
        gmax = float(np.max(np.abs(g)))
        steps += 1
    if steps == 0 and gmax > gtol and max_steps > 0:
        raise DescentStalledError(f"no descent step accepted from the initial configuration (gradient {gmax:.3e})")
    x = x - x.mean(axis=0)
    return ParticleConfig(d, x, pot, seed, steps, gmax, gmax <= gtol)


def _radii(cfg: ParticleConfig) -> np.ndarray:
    return np.linalg.norm(cfg.points - cfg.points.mean(axis=0), axis=1)


def support_radius(cfg: ParticleConfig, trim: float = 0.0) -> float:
    """``(1 - trim)``-quantile of the distances to the centroid."""
    if not 0.0 <= trim <= 0.05:
        raise DomainError(f"trim must lie in [0, 0.05], got {trim}")
    return float(np.quantile(_radii(cfg), 1.0 - trim))


def radial_histogram(cfg: ParticleConfig, n_bins: int, r_max: float | None = None) -> np.ndarray:
    """Rows ``(center, density)``: bin counts over ``N`` times the shell volume.

    Centers are the volume centroids of the shells. Bins span [0, r_max],
    by default the largest distance to the centroid.
    """
    if n_bins < 2:
        raise DomainError(f"need at least 2 bins, got {n_bins}")
    r = _radii(cfg)
    d = cfg.d
    top = float(r.max()) if r_max is None else float(r_max)
    edges = np.linspace(0.0, top, n_bins + 1)
    counts, _ = np.histogram(r, bins=edges)
    lo, hi = edges[:-1], edges[1:]
    vol = sphere_area(d) * (hi**d - lo**d) / d
    centers = d / (d + 1.0) * (hi ** (d + 1) - lo ** (d + 1)) / (hi**d - lo**d)
    return np.column_stack([centers, counts / (cfg.n * vol)])


def _write_rows(path: Path, header: list[str], rows) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([format(float(v), ".17g") for v in row])
    return path


def write_points_csv(cfg: ParticleConfig, path) -> Path:
    return _write_rows(path, [f"x{i + 1}" for i in range(cfg.d)], cfg.points)


def write_histogram_csv(hist: np.ndarray, path) -> Path:
    return _write_rows(path, ["r", "density"], hist)
