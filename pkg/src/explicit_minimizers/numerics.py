"""Special functions, quadrature rules, root isolation and null vectors.

Everything here is a pure function of its arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import roots_jacobi

__all__ = [
    "DomainError",
    "EvaluationError",
    "NoNullSpaceError",
    "QuadratureRule",
    "Bracket",
    "gamma_fn",
    "sphere_area",
    "gauss_legendre",
    "gauss_jacobi_edge",
    "graded_panels",
    "bracket_roots",
    "bisect",
    "null_vector",
]


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class EvaluationError(ArithmeticError):
    """A function returned a non-finite value where a finite one was needed."""

    def __init__(self, message: str, x: float):
        super().__init__(message)
        self.x = x


class NoNullSpaceError(ArithmeticError):
    """Matrix is numerically nonsingular at the requested tolerance."""


# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


# B_{2k} / (2k (2k-1)) for the Stirling correction series, k = 1..8
_STIRLING_COEF = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)


def gamma_fn(x: float) -> float:
    """Gamma function for positive real ``x``.

    Lanczos (g=7, n=9) below 10; Stirling series above, where the Lanczos
    error grows roughly linearly in ``x`` and reaches 1e-13 near 170.
    """
    x = float(x)
    if not x > 0.0 or not math.isfinite(x):
        raise DomainError(f"gamma_fn requires x > 0, got {x!r}")
    if x < 0.5:
        return gamma_fn(x + 1.0) / x
    if x >= 10.0:
        inv = 1.0 / x
        inv2 = inv * inv
        series = 0.0
        for c in reversed(_STIRLING_COEF):
            series = series * inv2 + c
        series *= inv
        half = math.pow(x, 0.5 * (x - 0.5))
        return math.sqrt(2.0 * math.pi) * half * math.exp(-x) * half * math.exp(series)
    z = x - 1.0
    acc = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * math.pow(t, z + 0.5) * math.exp(-t) * acc


def sphere_area(d: int) -> float:
    """Surface area of the unit sphere S^{d-1} in R^d."""
    if int(d) != d or d < 1:
        raise DomainError(f"sphere_area requires an integer d >= 1, got {d!r}")
    d = int(d)
    if d == 1:
        return 2.0
    if d == 2:
        return 2.0 * math.pi
    if d == 3:
        return 4.0 * math.pi
    return 2.0 * math.pi ** (0.5 * d) / gamma_fn(0.5 * d)


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    interval: tuple[float, float]

    def integrate(self, f: Callable[[np.ndarray], np.ndarray]) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


@lru_cache(maxsize=64)
def _legendre_base(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_legendre(n: int, lo: float, hi: float) -> QuadratureRule:
    """n-point Gauss-Legendre rule mapped to [lo, hi]."""
    if int(n) != n or n < 1:
        raise DomainError(f"gauss_legendre requires n >= 1, got {n!r}")
    if not lo < hi:
        raise DomainError(f"gauss_legendre requires lo < hi, got [{lo}, {hi}]")
    x, w = _legendre_base(int(n))
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    return QuadratureRule(mid + half * x, half * w, (float(lo), float(hi)))


@lru_cache(maxsize=64)
def _jacobi_base(n: int, alpha: float) -> tuple[np.ndarray, np.ndarray]:
    x, w = roots_jacobi(n, alpha, 0.0)
    return x, w


def gauss_jacobi_edge(n: int, lo: float, hi: float, alpha: float) -> QuadratureRule:
    """Rule for integrals of ``(hi - s)**alpha * f(s)`` over [lo, hi].

    The returned weights already contain the factor ``(hi - s)**alpha``.
    """
    if alpha <= -1.0:
        raise DomainError(f"edge exponent must exceed -1, got {alpha}")
    x, w = _jacobi_base(int(n), float(alpha))
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    return QuadratureRule(mid + half * x, w * half ** (alpha + 1.0), (float(lo), float(hi)))


def graded_panels(
    lo: float,
    hi: float,
    toward: str | None,
    sigma: float = 0.25,
    min_width: float = 0.0,
) -> np.ndarray:
    """Panel breakpoints on [lo, hi], geometrically refined toward one or both ends.

    ``toward`` is ``"lo"``, ``"hi"``, ``"both"`` or None. Refinement stops once
    the smallest panel is no wider than ``min_width``.
    """
    length = hi - lo
    if toward is None or length <= 0.0:
        return np.array([lo, hi])
    if toward == "both":
        mid = 0.5 * (lo + hi)
        left = graded_panels(lo, mid, "lo", sigma, min_width)
        right = graded_panels(mid, hi, "hi", sigma, min_width)
        return np.concatenate([left, right[1:]])
    width = max(min_width, 1e-300)
    levels = 0 if width >= length else int(math.ceil(math.log(length / width) / -math.log(sigma)))
    offsets = length * sigma ** np.arange(1, levels + 1)
    if toward == "hi":
        pts = np.concatenate([[lo], hi - offsets, [hi]])
    elif toward == "lo":
        pts = np.concatenate([[lo], lo + offsets[::-1], [hi]])
    else:
        raise ValueError(f"unknown grading direction {toward!r}")
    return pts


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")
        if not self.f_lo * self.f_hi < 0.0:
            raise DomainError(f"no certified sign change on [{self.lo}, {self.hi}]")

    def __contains__(self, x: float) -> bool:
        return self.lo <= x <= self.hi


def bracket_roots(f: Callable[[float], float], lo: float, hi: float, n_scan: int) -> list[Bracket]:
    """Scan ``f`` on ``n_scan`` equispaced points and return every sign change."""
    if n_scan < 2:
        raise DomainError(f"n_scan must be >= 2, got {n_scan}")
    if not lo < hi:
        raise DomainError(f"need lo < hi, got [{lo}, {hi}]")
    xs = np.linspace(lo, hi, int(n_scan))
    vals = []
    for x in xs:
        v = float(f(float(x)))
        if not math.isfinite(v):
            raise EvaluationError(f"non-finite function value {v} at x={x!r}", float(x))
        vals.append(v)
    out: list[Bracket] = []
    i = 0
    while i < len(xs) - 1:
        v0, v1 = vals[i], vals[i + 1]
        if v0 * v1 < 0.0:
            out.append(Bracket(float(xs[i]), float(xs[i + 1]), v0, v1))
        elif v1 == 0.0 and v0 != 0.0 and i + 2 < len(xs) and v0 * vals[i + 2] < 0.0:
            # exact zero on a grid point: widen to the neighbours
            out.append(Bracket(float(xs[i]), float(xs[i + 2]), v0, vals[i + 2]))
            i += 1
        i += 1
    return out


def bisect(f: Callable[[float], float], bracket: Bracket, tol: float) -> float:
    """Bisection on a certified bracket until its width is at most ``tol``."""
    if not tol > 0.0:
        raise DomainError(f"tol must be positive, got {tol}")
    lo, hi = bracket.lo, bracket.hi
    f_lo = bracket.f_lo
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = float(f(mid))
        if fm == 0.0:
            return mid
        if (fm < 0.0) == (f_lo < 0.0):
            lo, f_lo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def null_vector(m, tol: float = 1e-9, scale: float | None = None) -> np.ndarray:
    """Unit vector spanning the numerical null space of a small square matrix.

    The smallest singular value must not exceed ``tol * scale``; ``scale``
    defaults to the largest singular value, which is useless for 1x1 input, so
    callers with a natural matrix scale should pass it. The sign is fixed so the
    first nonzero entry is positive.
    """
    m = np.atleast_2d(np.asarray(m, dtype=float))
    if m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DomainError(f"null_vector needs a square matrix, got shape {m.shape}")
    _, sv, vt = np.linalg.svd(m)
    smax = sv[0] if scale is None else float(scale)
    if sv[-1] > tol * smax:
        raise NoNullSpaceError(
            f"smallest singular value {sv[-1]:.3e} exceeds {tol:.1e} x scale {smax:.3e}"
        )
    v = vt[-1].copy()
    v /= np.linalg.norm(v)
    scale = np.max(np.abs(v))
    for x in v:
        if abs(x) > 1e-12 * scale:
            if x < 0.0:
                v = -v
            break
    return v
