"""Power-law potentials, radial densities, radial convolution and energy.

A potential ``W(x) = |x|^a/a - |x|^b/b`` is stored as a list of terms
``(coef, exponent)``; exponent 0 stands for ``ln|x|``. Convolutions with radial
densities reduce to one-dimensional radial integrals against the spherical
average

    K_p(r, s) = integral over S^{d-1} of |r e - s w|^p dS(w),

which has closed forms in d = 1 and d = 3 and is computed by graded
Gauss-Legendre quadrature in the polar angle otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence, Union

import numpy as np

from . import kernels
from .numerics import DomainError, gauss_jacobi_edge, graded_panels, sphere_area, _legendre_base

__all__ = [
    "LOG",
    "Potential",
    "RadialDensity",
    "profile_density",
    "shell_density",
    "eval_potential",
    "radial_kernel",
    "radial_rule",
    "kernel_convolve",
    "convolve",
    "convolve_many",
    "convolve_terms",
    "energy_terms",
    "kernel_energy",
    "energy",
]

LOG = "log"
Exponent = Union[float, str]

# quadrature parameters shared by every radial integral
PANEL_NODES = 16
GRADING = 0.25
MIN_PANEL_REL = 1e-11  # keeps every node at least ~1e-13 r away from a singular point
ANGULAR_NODES = 16


def _is_log(p: Exponent) -> bool:
    return isinstance(p, str)


@dataclass(frozen=True)
class Potential:
    """``W(x) = |x|^a/a - |x|^b/b`` in dimension ``d``; an exponent of 0 means ``ln|x|``."""

    d: int
    a: float
    b: float

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise DomainError(f"dimension must be a positive integer, got {self.d!r}")
        if not (-self.d < self.b < self.a):
            raise DomainError(f"need -d < b < a, got d={self.d}, a={self.a}, b={self.b}")
        object.__setattr__(self, "d", int(self.d))
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))

    @property
    def terms(self) -> tuple[tuple[float, Exponent], ...]:
        out = []
        for sign, p in ((1.0, self.a), (-1.0, self.b)):
            if p == 0.0:
                out.append((sign, LOG))
            else:
                out.append((sign / p, p))
        return tuple(out)

    def __call__(self, r):
        return eval_potential(self, r)


def eval_potential(pot: Potential, r):
    """Value of ``W`` at distance ``r``; ``+inf`` at 0 for singular repulsion."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0.0):
        raise DomainError("distance must be nonnegative")
    out = np.zeros_like(r)
    with np.errstate(divide="ignore", invalid="ignore"):
        for coef, p in pot.terms:
            out = out + (coef * np.log(r) if _is_log(p) else coef * r**p)
    # -ln 0 or -r^b/b with b < 0: the repulsive term wins
    if pot.b <= 0.0:
        out = np.where(r == 0.0, np.inf, out)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# spherical kernel


def _check_exponent(d: int, p: Exponent) -> None:
    if not _is_log(p) and not p > -d:
        raise DomainError(f"kernel |x|^{p} is not locally integrable in d={d}")
    if not _is_log(p) and p == 0.0:
        raise DomainError("exponent 0 is ambiguous; pass LOG for the logarithm")


def _kernel_d1(p: Exponent, r: float, s: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        if _is_log(p):
            return np.log(np.abs(r - s)) + np.log(r + s)
        return np.abs(r - s) ** p + (r + s) ** p


def _kernel_d3(p: float, r: float, s: np.ndarray) -> np.ndarray:
    big = np.maximum(r, s)
    small = np.minimum(r, s)
    out = np.empty_like(s)
    zero = small == 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        out[zero] = 4.0 * math.pi * big[zero] ** p
        nz = ~zero
        bg, sm = big[nz], small[nz]
        x = sm / bg
        q = p + 2.0
        if q == 0.0:
            diff = np.log1p(x) - np.log1p(-x)
            out[nz] = 2.0 * math.pi / (bg * sm) * diff
        else:
            # (1+x)^q - (1-x)^q without cancellation for small x
            diff = np.expm1(q * np.log1p(x)) - np.expm1(q * np.log1p(-x))
            out[nz] = 2.0 * math.pi / (q * bg * sm) * bg**q * diff
    return out


def _kernel_generic(d: int, p: Exponent, r: float, s: np.ndarray) -> np.ndarray:
    out = np.empty_like(s)
    big = np.maximum(r, s)
    degenerate = (s == 0.0) | (r == 0.0)
    area = sphere_area(d)
    with np.errstate(divide="ignore"):
        if _is_log(p):
            out[degenerate] = area * np.log(big[degenerate])
        else:
            out[degenerate] = area * big[degenerate] ** p
    rest = ~degenerate
    if np.any(rest):
        x, w = _legendre_base(ANGULAR_NODES)
        out[rest] = kernels.angular_kernel(
            d, 0.0 if _is_log(p) else float(p), _is_log(p), float(r), s[rest], x, w, sphere_area(d - 1)
        )
    if not _is_log(p) and p <= 1 - d:
        out[(s == r) & rest] = np.inf
    return out


def radial_kernel(d: int, p: Exponent, r: float, s):
    """Spherical average ``K_p(r, s)`` of ``|r e - s w|^p`` (``p=LOG`` for the logarithm).

    Vectorized over ``s``. Returns ``+inf`` where the kernel diverges.
    """
    _check_exponent(d, p)
    if r < 0.0:
        raise DomainError("radii must be nonnegative")
    s_arr = np.atleast_1d(np.asarray(s, dtype=float))
    if np.any(s_arr < 0.0):
        raise DomainError("radii must be nonnegative")
    if d == 1:
        out = _kernel_d1(p, float(r), s_arr)
    elif d == 3 and not _is_log(p):
        out = _kernel_d3(float(p), float(r), s_arr)
    else:
        out = _kernel_generic(d, p, float(r), s_arr)
    return float(out[0]) if np.ndim(s) == 0 else out


# ---------------------------------------------------------------------------
# densities


@dataclass(frozen=True)
class RadialDensity:
    """Radial measure: a profile ``u(r) = (R - r)^edge * smooth(r)`` on [0, R] or a sphere shell.

    ``mass`` is the total integral of the stored (already scaled) density.
    """

    d: int
    kind: str
    R: float
    smooth: Callable[[np.ndarray], np.ndarray] | None = field(default=None, compare=False)
    edge: float = 0.0
    mass: float = 1.0
    label: str = ""

    def __post_init__(self):
        if self.kind not in ("profile", "shell"):
            raise DomainError(f"unknown density kind {self.kind!r}")
        if not self.R > 0.0:
            raise DomainError(f"support radius must be positive, got {self.R}")
        if self.kind == "profile" and self.smooth is None:
            raise DomainError("profile densities need an evaluator")
        if self.edge <= -1.0:
            raise DomainError("edge exponent must exceed -1 for integrability")

    def __call__(self, r):
        if self.kind == "shell":
            raise TypeError("a sphere shell has no density function")
        r = np.asarray(r, dtype=float)
        inside = (r >= 0.0) & (r <= self.R)
        rc = np.where(inside, r, 0.0)
        vals = self.smooth(rc)
        if self.edge != 0.0:
            with np.errstate(divide="ignore"):
                vals = vals * (self.R - rc) ** self.edge
        out = np.where(inside, vals, 0.0)
        return float(out) if out.ndim == 0 else out

    def radial_moment(self, k: float = 0.0) -> float:
        """``|S^{d-1}| * integral_0^R u(r) r^(d-1+k) dr`` (the mass for k=0)."""
        if self.kind == "shell":
            return self.mass * self.R**k
        nodes, weights = radial_rule(self.R, self.edge, None)
        return sphere_area(self.d) * float(np.dot(weights, self.smooth(nodes) * nodes ** (self.d - 1 + k)))

    def scaled(self, factor: float) -> "RadialDensity":
        if self.kind == "shell":
            return RadialDensity(self.d, "shell", self.R, None, 0.0, self.mass * factor, self.label)
        g = self.smooth
        return RadialDensity(self.d, "profile", self.R, lambda r: factor * g(r), self.edge, self.mass * factor, self.label)

    def normalized(self) -> "RadialDensity":
        m = self.radial_moment(0.0)
        if not m > 0.0:
            raise DomainError(f"cannot normalize a density of mass {m}")
        out = self.scaled(1.0 / m)
        return RadialDensity(out.d, out.kind, out.R, out.smooth, out.edge, 1.0, out.label)

    def rescaled(self, lam: float) -> "RadialDensity":
        """The density ``lam^d * rho(lam * x)``, supported on radius ``R / lam``; mass unchanged."""
        if self.kind == "shell":
            return RadialDensity(self.d, "shell", self.R / lam, None, 0.0, self.mass, self.label)
        g, d, q = self.smooth, self.d, self.edge
        factor = lam**d * lam**q
        return RadialDensity(d, "profile", self.R / lam, lambda r: factor * g(lam * r), q, self.mass, self.label)

    def with_support(self, R: float) -> "RadialDensity":
        """Same evaluator on a different support radius, renormalized to unit mass."""
        if self.kind == "shell":
            return RadialDensity(self.d, "shell", R, None, 0.0, 1.0, self.label)
        return RadialDensity(self.d, "profile", R, self.smooth, self.edge, 1.0, self.label).normalized()


def profile_density(d: int, R: float, smooth, edge: float = 0.0, normalize: bool = True, label: str = "") -> RadialDensity:
    rho = RadialDensity(int(d), "profile", float(R), smooth, float(edge), 1.0, label)
    if normalize:
        return rho.normalized()
    return RadialDensity(rho.d, "profile", rho.R, smooth, rho.edge, rho.radial_moment(0.0), label)


def shell_density(d: int, R: float, mass: float = 1.0, label: str = "") -> RadialDensity:
    return RadialDensity(int(d), "shell", float(R), None, 0.0, float(mass), label)


# ---------------------------------------------------------------------------
# radial quadrature


@lru_cache(maxsize=1024)
def _radial_rule_cached(R: float, edge: float, singular: float | None, outer: bool):
    n = PANEL_NODES
    if singular is None:
        if outer:
            segments = [(0.0, R, "hi", 1e-4 * R)]
        else:
            segments = [(0.0, R, "uniform", 0.0)]
    elif singular <= 0.0:
        segments = [(0.0, R, "lo", MIN_PANEL_REL * R)]
    elif singular < R:
        segments = [
            (0.0, singular, "hi", MIN_PANEL_REL * R),
            (singular, R, "lo", MIN_PANEL_REL * R),
        ]
    else:
        gap = singular - R
        segments = [(0.0, R, "hi", max(MIN_PANEL_REL * R, gap))]
    x, w = _legendre_base(n)
    nodes, weights = [], []
    for lo, hi, toward, width in segments:
        if toward == "uniform":
            pts = np.linspace(lo, hi, 5)
        else:
            pts = graded_panels(lo, hi, toward, GRADING, width)
        for a, b in zip(pts[:-1], pts[1:]):
            if b <= a:
                continue
            if b == R and edge != 0.0:
                rule = gauss_jacobi_edge(n, a, b, edge)
                nodes.append(rule.nodes)
                weights.append(rule.weights)
                continue
            half = 0.5 * (b - a)
            s = 0.5 * (a + b) + half * x
            ww = half * w
            if edge != 0.0:
                ww = ww * (R - s) ** edge
            nodes.append(s)
            weights.append(ww)
    nodes = np.concatenate(nodes)
    weights = np.concatenate(weights)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def radial_rule(R: float, edge: float = 0.0, singular: float | None = None, outer: bool = False):
    """Nodes and weights for ``integral_0^R (R - s)^edge f(s) ds``.

    ``singular`` marks a point where ``f`` is non-smooth (a kernel kink or a
    logarithmic singularity); panels are refined geometrically toward it. The
    panel touching ``R`` uses Gauss-Jacobi weights when ``edge != 0``.
    """
    return _radial_rule_cached(float(R), float(edge), None if singular is None else float(singular), bool(outer))


# ---------------------------------------------------------------------------
# convolution and energy


def convolve_terms(d: int, terms: Sequence[tuple[float, Exponent]], rho: RadialDensity, r: float) -> float:
    """``sum coef * (|x|^p * rho)(r)`` over ``terms``; ``Potential.terms`` has this shape."""
    if rho.d != d:
        raise DomainError(f"density dimension {rho.d} differs from kernel dimension {d}")
    r = float(r)
    if r < 0.0:
        raise DomainError("radius must be nonnegative")
    total = 0.0
    if rho.kind == "shell":
        for coef, p in terms:
            total += coef * radial_kernel(d, p, r, rho.R)
        return total * rho.mass / sphere_area(d)
    nodes, weights = radial_rule(rho.R, rho.edge, r)
    dens = rho.smooth(nodes) * nodes ** (d - 1) * weights
    for coef, p in terms:
        k = radial_kernel(d, p, r, nodes)
        val = float(np.dot(dens, k))
        if not math.isfinite(val):
            raise DomainError(f"convolution with |x|^{p} diverges at r={r}")
        total += coef * val
    return total


def kernel_convolve(d: int, p: Exponent, rho: RadialDensity, r: float) -> float:
    """``(|x|^p * rho)`` at radius ``r`` (``p=LOG`` for ``ln|x|``)."""
    _check_exponent(d, p)
    return convolve_terms(d, ((1.0, p),), rho, r)


def convolve(pot: Potential, rho: RadialDensity, r: float) -> float:
    """``(W * rho)`` at radius ``r``."""
    return convolve_terms(pot.d, pot.terms, rho, r)


def convolve_many(pot: Potential, rho: RadialDensity, rs) -> np.ndarray:
    return np.array([convolve(pot, rho, float(r)) for r in np.asarray(rs, dtype=float)])


def energy_terms(d: int, terms, rho: RadialDensity) -> float:
    if rho.kind == "shell":
        val = 0.5 * rho.mass * convolve_terms(d, terms, rho, rho.R)
    else:
        nodes, weights = radial_rule(rho.R, rho.edge, None, outer=True)
        conv = np.array([convolve_terms(d, terms, rho, float(s)) for s in nodes])
        val = 0.5 * sphere_area(d) * float(np.dot(weights, conv * rho.smooth(nodes) * nodes ** (d - 1)))
    if not math.isfinite(val):
        raise DomainError("energy integral diverges")
    return val


def kernel_energy(d: int, p: Exponent, rho: RadialDensity) -> float:
    """``1/2 * double integral of |x - y|^p d rho d rho``."""
    _check_exponent(d, p)
    return energy_terms(d, ((1.0, p),), rho)


def energy(pot: Potential, rho: RadialDensity) -> float:
    """Interaction energy ``1/2 * integral of (W * rho) d rho``."""
    if rho.d != pot.d:
        raise DomainError("potential and density dimensions differ")
    return energy_terms(pot.d, pot.terms, rho)
