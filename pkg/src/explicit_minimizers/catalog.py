"""Previously known explicit minimizers, used as cross-validation targets.

* quadratic attraction ``a = 2``: ``C (R^2 - |x|^2)_+^(1 - (b+d)/2)``
* uniform measures on a sphere for ``2 <= a <= 4`` and ``b_*(a) <= b <= 2``
* the one-dimensional family with ``b = 2``, ``2 < a < 3``: ``C (R^2 - x^2)_+^(-(a-1)/2)``
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .numerics import DomainError, gamma_fn, sphere_area
from .potential import Potential, RadialDensity, shell_density
from .verify import ELReport, check_euler_lagrange

__all__ = [
    "CatalogEntry",
    "ExcludedCaseError",
    "UnknownEntryError",
    "quadratic_attraction",
    "quadratic_radius",
    "sphere_shell",
    "shell_radius",
    "b_star",
    "frank_interval",
    "frank_radius",
    "REGISTRY",
    "list_entries",
    "get_entry",
]


class ExcludedCaseError(DomainError):
    """Parameters at which the minimizer is not unique."""


class UnknownEntryError(KeyError):
    pass


@dataclass(frozen=True)
class CatalogEntry:
    label: str
    potential: Potential
    density: RadialDensity
    validity: str

    def verify(self, **kw) -> ELReport:
        return check_euler_lagrange(self.potential, self.density, **kw)


def _beta(x: float, y: float) -> float:
    return gamma_fn(x) * gamma_fn(y) / gamma_fn(x + y)


def _power_profile(d: int, R: float, q: float, label: str) -> RadialDensity:
    """Unit-mass ``C (R^2 - r^2)^q`` stored as ``(R - r)^q * C (R + r)^q``."""
    # integral_0^R (R^2 - r^2)^q r^(d-1) dr = R^(2q+d) B(d/2, q+1) / 2
    moment = 0.5 * R ** (2 * q + d) * _beta(0.5 * d, q + 1.0)
    C = 1.0 / (sphere_area(d) * moment)
    if q == 0.0:
        smooth: Callable = lambda r: np.full(np.shape(r), C)  # noqa: E731
    else:
        smooth = lambda r: C * (R + np.asarray(r, dtype=float)) ** q  # noqa: E731
    return RadialDensity(d, "profile", R, smooth, q, 1.0, label)


def quadratic_radius(d: int, b: float) -> float:
    return (gamma_fn(0.5 * (4 - b)) * gamma_fn(0.5 * (b + d)) / gamma_fn(0.5 * (2 + d))) ** (1.0 / (2 - b))


def quadratic_attraction(d: int, b: float, label: str = "") -> CatalogEntry:
    """Minimizer for ``a = 2`` and ``-d < b < min(4 - d, 2)``."""
    if int(d) != d or d < 1:
        raise DomainError(f"dimension must be a positive integer, got {d!r}")
    if not -d < b < min(4 - d, 2):
        raise DomainError(f"quadratic attraction needs -d < b < min(4-d, 2), got b={b} in d={d}")
    d = int(d)
    q = 1.0 - 0.5 * (b + d)
    R = quadratic_radius(d, b)
    label = label or f"rx2-d{d}-b{b:g}"
    return CatalogEntry(label, Potential(d, 2.0, b), _power_profile(d, R, q, label), "-d < b < min(4-d, 2), a = 2")


def b_star(d: int, a: float) -> float:
    return (-10.0 + 3.0 * a + 7.0 * d - a * d - d * d) / (d + a - 3.0)


def shell_radius(d: int, a: float, b: float) -> float:
    ratio = (gamma_fn(0.5 * (d + b - 1)) * gamma_fn(0.5 * (2 * d + a - 2))) / (
        gamma_fn(0.5 * (d + a - 1)) * gamma_fn(0.5 * (2 * d + b - 2))
    )
    return 0.5 * ratio ** (1.0 / (a - b))


def sphere_shell(d: int, a: float, b: float, label: str = "") -> CatalogEntry:
    """Uniform measure on a sphere, for ``2 <= a <= 4`` and ``b_*(a) <= b <= 2``, ``(a, b) != (4, 2)``."""
    if int(d) != d or d < 2:
        raise DomainError(f"sphere shells need an integer d >= 2, got {d!r}")
    d = int(d)
    if (a, b) == (4.0, 2.0):
        raise ExcludedCaseError("(a, b) = (4, 2) has infinitely many minimizers")
    if not b < a:
        raise DomainError(f"need b < a, got a={a}, b={b}")
    if not 2.0 <= a <= 4.0:
        raise DomainError(f"sphere shells need 2 <= a <= 4, got a={a}")
    lo = b_star(d, a)
    if not lo <= b <= 2.0:
        raise DomainError(f"sphere shells need b_*(a) = {lo:.6g} <= b <= 2, got b={b}")
    R = shell_radius(d, a, b)
    label = label or f"shell-d{d}-a{a:g}-b{b:g}"
    return CatalogEntry(label, Potential(d, a, b), shell_density(d, R, 1.0, label), "2 <= a <= 4, b_*(a) <= b <= 2")


def frank_radius(a: float) -> float:
    num = math.sqrt(math.pi) * gamma_fn(0.5 * (3 - a)) * math.sin(0.5 * (a - 1) * math.pi)
    den = gamma_fn(0.5 * (4 - a)) * (a - 1) * math.pi
    return (num / den) ** (1.0 / (a - 2))


def frank_interval(a: float, label: str = "") -> CatalogEntry:
    """One-dimensional minimizer for ``b = 2``, ``2 < a < 3``; singular at the edge."""
    if not 2.0 < a < 3.0:
        raise DomainError(f"the interval family needs 2 < a < 3, got a={a}")
    R = frank_radius(a)
    label = label or f"frank-a{a:g}"
    return CatalogEntry(label, Potential(1, a, 2.0), _power_profile(1, R, -0.5 * (a - 1), label), "d = 1, b = 2, 2 < a < 3")


REGISTRY: dict[str, Callable[[], CatalogEntry]] = {
    "uniform-ball-d3-b-1": lambda: quadratic_attraction(3, -1.0, "uniform-ball-d3-b-1"),
    "uniform-disk-d2-log": lambda: quadratic_attraction(2, 0.0, "uniform-disk-d2-log"),
    "uniform-interval-d1-b1": lambda: quadratic_attraction(1, 1.0, "uniform-interval-d1-b1"),
    "rx2-d1-b0.5": lambda: quadratic_attraction(1, 0.5, "rx2-d1-b0.5"),
    "rx2-d2-b-1": lambda: quadratic_attraction(2, -1.0, "rx2-d2-b-1"),
    "rx2-d3-log": lambda: quadratic_attraction(3, 0.0, "rx2-d3-log"),
    "shell-d3-a2-b1": lambda: sphere_shell(3, 2.0, 1.0, "shell-d3-a2-b1"),
    "shell-d3-a3-b1.5": lambda: sphere_shell(3, 3.0, 1.5, "shell-d3-a3-b1.5"),
    "shell-d4-a4-b1": lambda: sphere_shell(4, 4.0, 1.0, "shell-d4-a4-b1"),
    "frank-a2.2": lambda: frank_interval(2.2, "frank-a2.2"),
    "frank-a2.5": lambda: frank_interval(2.5, "frank-a2.5"),
    "frank-a2.8": lambda: frank_interval(2.8, "frank-a2.8"),
}


def list_entries() -> list[str]:
    return list(REGISTRY)


def get_entry(label: str) -> CatalogEntry:
    try:
        factory = REGISTRY[label]
    except KeyError:
        raise UnknownEntryError(f"unknown catalog entry {label!r}; known: {', '.join(REGISTRY)}") from None
    return factory()
