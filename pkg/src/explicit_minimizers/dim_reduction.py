"""Even-dimensional minimizers by projecting odd-dimensional ones.

Integrating a radial density on R^(d+1) along one coordinate gives a radial
density on R^d. Conversely, averaging a radial potential on R^d over the lines
through the origin of R^(d+1) multiplies ``|x|^a/a`` by ``eta_{d,a}`` and shifts
``ln|x|`` by ``C_{d,ln}``. Combining both with a rescaling by ``lambda`` turns
the odd-dimension minimizer for (3, 1-d) in d+1 into the minimizer in d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

from .numerics import DomainError, gamma_fn, graded_panels, _legendre_base, sphere_area
from .odd_solver import SeriesSolution, solve_odd
from .potential import LOG, Potential, RadialDensity, convolve, convolve_terms, energy

__all__ = [
    "ProjectedDensity",
    "eta",
    "c_log",
    "q_average",
    "project",
    "even_lambda",
    "even_minimizer",
    "lifted_terms",
    "lifted_identity_residual",
]

PROJECTION_NODES = 48
_POLAR_NODES = 16
_POLAR_MIN_WIDTH = 1e-15


def eta(d: int, a: float) -> float:
    """``Gamma((a+d)/2) Gamma((d+1)/2) / (Gamma((a+d+1)/2) Gamma(d/2))``."""
    if int(d) != d or d < 1:
        raise DomainError(f"dimension must be a positive integer, got {d!r}")
    if not a > -d:
        raise DomainError(f"eta needs a > -d, got a={a} for d={d}")
    return gamma_fn(0.5 * (a + d)) * gamma_fn(0.5 * (d + 1)) / (gamma_fn(0.5 * (a + d + 1)) * gamma_fn(0.5 * d))


def _polar_average(g: Callable[[np.ndarray], np.ndarray], d: int) -> float:
    """``(|S^{d-1}| / |S^d|) * integral_0^pi g(sin phi) sin^(d-1) phi dphi``.

    The integrand is symmetric about pi/2; the half interval is graded toward
    phi = 0 where ``g`` may be singular.
    """
    x, w = _legendre_base(_POLAR_NODES)
    pts = graded_panels(0.0, 0.5 * math.pi, "lo", min_width=_POLAR_MIN_WIDTH)
    lo, hi = pts[1:-1], pts[2:]
    half = 0.5 * (hi - lo)
    phi = (0.5 * (hi + lo))[:, None] + half[:, None] * x[None, :]
    weights = half[:, None] * w[None, :]

    def f(phi):
        sphi = np.sin(phi)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return g(sphi) * sphi ** (d - 1)

    total = float(np.sum(weights * f(phi))) + _power_tail(f, pts[1])
    total *= 2.0
    if not math.isfinite(total):
        raise DomainError("polar average diverges")
    return sphere_area(d) / sphere_area(d + 1) * total


def _power_tail(f: Callable[[np.ndarray], np.ndarray], width: float) -> float:
    """``integral_0^width f`` assuming ``f(phi) ~ c phi^p`` on the innermost panel.

    ``p`` comes from ``f(width)`` and ``f(width/2)``; ``p <= -1`` means the
    average does not exist.
    """
    f1, f2 = (float(v) for v in f(np.array([width, 0.5 * width])))
    if not (math.isfinite(f1) and math.isfinite(f2)):
        raise DomainError("polar average diverges")
    if f1 == 0.0 or f2 == 0.0 or (f1 > 0) != (f2 > 0):
        return 0.5 * width * (f1 + f2)
    p = -math.log2(f2 / f1)
    if p <= -1.0 + 1e-6:
        raise DomainError(f"polar average diverges (integrand behaves like phi^{p:.3g} at 0)")
    return f1 * width / (p + 1.0)


def c_log(d: int) -> float:
    """``(|S^{d-1}| / |S^d|) * integral_0^pi sin^(d-1) phi ln(sin phi) dphi``."""
    if int(d) != d or d < 1:
        raise DomainError(f"dimension must be a positive integer, got {d!r}")
    return _polar_average(np.log, int(d))


def q_average(w: Callable[[np.ndarray], np.ndarray], d: int, x) -> float:
    """Average of ``w(dist(line, x))`` over the lines through the origin of R^(d+1).

    ``w`` is a radial profile on R^d (a function of the distance); ``x`` is a
    point of R^(d+1) or its norm.
    """
    if int(d) != d or d < 1:
        raise DomainError(f"dimension must be a positive integer, got {d!r}")
    rx = float(np.linalg.norm(np.atleast_1d(np.asarray(x, dtype=float))))
    if rx == 0.0:
        with np.errstate(divide="ignore", invalid="ignore"):
            val = float(w(np.asarray(0.0)))
        if not math.isfinite(val):
            raise DomainError("q_average at the origin needs w bounded near 0")
        return val
    return _polar_average(lambda s: w(rx * s), int(d))


# ---------------------------------------------------------------------------
# projection


def _projected_smooth(source: RadialDensity, n_nodes: int) -> Callable[[np.ndarray], np.ndarray]:
    """Smooth factor ``g`` with ``P[u](x) = (R - x)^(1/2 + e) g(x)``, ``e`` the source edge exponent.

    With ``t = h sin(psi)``, ``h = sqrt(R^2 - x^2)``,
    ``P[u](x) = 2 h * integral_0^(pi/2) u(sqrt(x^2 + h^2 sin^2 psi)) cos(psi) dpsi``.
    """
    R = source.R
    edge = source.edge
    if edge == 0.0:
        x_gl, w_gl = _legendre_base(n_nodes)
        tau = 0.25 * math.pi * (x_gl + 1.0)
        wtau = 0.25 * math.pi * w_gl
    else:
        # an edge factor of the source becomes a tau^(2 edge) singularity, tau = pi/2 - psi
        pts = graded_panels(0.0, 0.5 * math.pi, "lo", min_width=1e-12)
        x_gl, w_gl = _legendre_base(_POLAR_NODES)
        lo, hi = pts[:-1], pts[1:]
        half = 0.5 * (hi - lo)
        tau = ((0.5 * (hi + lo))[:, None] + half[:, None] * x_gl[None, :]).ravel()
        wtau = (half[:, None] * w_gl[None, :]).ravel()
    # psi = pi/2 - tau keeps cos(psi) = sin(tau) accurate near the edge
    sin2 = np.cos(tau) ** 2
    cos2 = np.sin(tau) ** 2
    cw = np.sin(tau) * wtau

    def smooth(xs):
        xs = np.asarray(xs, dtype=float)
        flat = np.clip(np.abs(xs.ravel()), 0.0, R)
        h2 = (R * R - flat * flat)[:, None]
        rr = np.minimum(np.sqrt(flat[:, None] ** 2 + h2 * sin2[None, :]), R)
        u = source.smooth(rr)
        if edge != 0.0:
            # R - rr = h^2 cos^2(psi) / (R + rr); the h^(2 edge) factor moves into the edge exponent
            u = u * (cos2[None, :] / (R + rr)) ** edge
        out = 2.0 * (R + flat) ** (0.5 + edge) * (u @ cw)
        return out.reshape(xs.shape)

    return smooth


def project(rho: RadialDensity, n_nodes: int = PROJECTION_NODES) -> RadialDensity:
    """Integrate a radial profile on R^(d+1) along the last coordinate."""
    if rho.kind != "profile":
        raise DomainError("only profile densities can be projected, not sphere shells")
    if rho.d < 2:
        raise DomainError("projection needs a source dimension of at least 2")
    smooth = _projected_smooth(rho, n_nodes)
    label = f"P[{rho.label}]" if rho.label else "projection"
    return RadialDensity(rho.d - 1, "profile", rho.R, smooth, 0.5 + rho.edge, rho.mass, label)


# ---------------------------------------------------------------------------
# even dimensions


def even_lambda(d: int) -> float:
    """``(Gamma((3+d)/2) / (Gamma((4+d)/2) sqrt(pi)))^(1/(d+2))``."""
    return (gamma_fn(0.5 * (3 + d)) / (gamma_fn(0.5 * (4 + d)) * math.sqrt(math.pi))) ** (1.0 / (d + 2))


def lifted_terms(d: int, a: float, b: float) -> tuple[tuple[float, object], ...]:
    """Terms of ``eta_{d,a}^-1 |x|^a/a - eta_{d,b}^-1 |x|^b/b`` (log for a zero exponent)."""
    out = []
    for sign, p in ((1.0, a), (-1.0, b)):
        if p == 0.0:
            out.append((sign, LOG))
        else:
            out.append((sign / (eta(d, p) * p), float(p)))
    return tuple(out)


@dataclass
class ProjectedDensity:
    """Minimizer in even ``d`` built from the odd solution in ``d + 1``."""

    d: int
    source: SeriesSolution
    lam: float
    projected: RadialDensity
    density: RadialDensity

    @property
    def R(self) -> float:
        return self.density.R

    @property
    def potential(self) -> Potential:
        return Potential(self.d, 3.0, 1.0 - self.d)

    def __call__(self, r):
        return self.density(r)

    @cached_property
    def C0(self) -> float:
        return convolve(self.potential, self.density, 0.0)

    @cached_property
    def energy(self) -> float:
        return energy(self.potential, self.density)


def even_minimizer(d: int, **solver_kw) -> ProjectedDensity:
    """Minimizer for (a, b) = (3, 1 - d) in even ``d``."""
    if int(d) != d or d < 2 or d % 2:
        raise DomainError(f"dimension must be an even integer >= 2, got {d!r}")
    d = int(d)
    source = solve_odd(d + 1, **solver_kw)
    projected = project(source.density)
    lam = even_lambda(d)
    density = projected.rescaled(lam)
    density = RadialDensity(d, "profile", source.R / lam, density.smooth, density.edge, 1.0, f"even-d{d}")
    return ProjectedDensity(d, source, lam, projected, density)


def lifted_identity_residual(sol: ProjectedDensity, n_points: int = 16) -> float:
    """Relative spread of ``W~ * P[rho]`` over [0, R] for the unscaled projection.

    ``W~`` is the eta-weighted potential; it must be constant on the support.
    """
    d = sol.d
    terms = lifted_terms(d, 3.0, 1.0 - d)
    R = sol.projected.R
    rs = np.linspace(0.0, R * (1.0 - 1e-4), n_points)
    vals = np.array([convolve_terms(d, terms, sol.projected, float(r)) for r in rs])
    return float((vals.max() - vals.min()) / abs(np.median(vals)))
