"""Minimizers for odd d with (a, b) = (3, 2 - d).

On its support the minimizer solves the radial polyharmonic equation
``Delta^((d+1)/2) u = A_{d-1} (2 - d) u``. Its even power series splits into
(d+1)/2 entire basis functions

    u_{2k}(r) = sum_n (prod_{i<n} B_{i(d+1)+2k}) r^(n(d+1)+2k),

and the support radius R is the root of ``det M(R)`` whose null vector gives a
nonnegative combination of the basis.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .numerics import (
    DomainError,
    NoNullSpaceError,
    bisect,
    bracket_roots,
    gauss_legendre,
    null_vector,
    sphere_area,
)
from .potential import Potential, RadialDensity, convolve, energy, kernel_convolve, profile_density

log = logging.getLogger(__name__)

__all__ = [
    "SeriesAccuracyError",
    "ConstructionError",
    "AmbiguityError",
    "coef_A",
    "coef_B",
    "coef_D",
    "SeriesBasis",
    "series_basis",
    "eval_u",
    "matrix_M",
    "det_M",
    "RootCandidate",
    "SeriesSolution",
    "solve_odd",
    "closed_form",
    "u0_d3",
    "u2_d3",
    "det_M_d3",
    "odd_potential",
    "pde_residual",
    "moment_residuals",
]

DEFAULT_SCAN_MAX = 5.0
DEFAULT_N_SCAN = 512
DEFAULT_ROOT_TOL = 1e-14
DEFAULT_NULL_TOL = 1e-9
BETA = 2.0**0.25


class SeriesAccuracyError(ArithmeticError):
    """Requested radius lies beyond the range the truncated series was built for."""


class ConstructionError(ArithmeticError):
    """No root of det M(R) yields a nonnegative density."""

    def __init__(self, message: str, candidates=()):
        super().__init__(message)
        self.candidates = list(candidates)


class AmbiguityError(ConstructionError):
    """More than one root of det M(R) yields a nonnegative density."""


def _check_odd(d: int) -> int:
    if int(d) != d or d < 1 or d % 2 == 0:
        raise DomainError(f"dimension must be a positive odd integer, got {d!r}")
    return int(d)


def _check_k(d: int, k: int) -> int:
    if int(k) != k or not 0 <= k <= (d - 1) // 2:
        raise DomainError(f"k must lie in 0..{(d - 1) // 2} for d={d}, got {k!r}")
    return int(k)


def coef_A(d: int, k: int) -> int:
    """``(d+1) * (1 * (-1) * ... * (3-2k)) * ((d-1)(d-3)...(d-2k+1))``."""
    d = _check_odd(d)
    k = _check_k(d, k)
    out = d + 1
    for j in range(k):
        out *= (1 - 2 * j) * (d - 1 - 2 * j)
    return out


@lru_cache(maxsize=None)
def _coef_B_exact(d: int, n: int) -> Fraction:
    m = 2 * n
    num = coef_A(d, (d - 1) // 2) * (2 - d)
    den = 1
    for j in range(1, (d + 1) // 2 + 1):
        den *= m + 2 * j
    for j in range((d + 1) // 2):
        den *= m + d + 2 * j
    return Fraction(num, den)


def coef_B(d: int, n: int) -> float:
    """Recursion factor B_{2n}: the coefficient of r^(2n+d+1) is B_{2n} times that of r^(2n)."""
    d = _check_odd(d)
    if int(n) != n or n < 0:
        raise DomainError(f"n must be a nonnegative integer, got {n!r}")
    return float(_coef_B_exact(d, int(n)))


def coef_D(d: int, k: int) -> int:
    """``(Delta^k r^(2k))`` at the origin: ``(2k)(2k-2)...2 * (2k+d-2)(2k+d-4)...d``."""
    d = _check_odd(d)
    k = _check_k(d, k)
    out = 1
    for j in range(k):
        out *= (2 * k - 2 * j) * (2 * k + d - 2 - 2 * j)
    return out


class SeriesBasis:
    """Truncated coefficient streams of the basis functions u_{2k}, valid for r <= r_max."""

    def __init__(self, d: int, r_max: float = DEFAULT_SCAN_MAX, max_terms: int = 2000):
        self.d = _check_odd(d)
        self.r_max = float(r_max)
        self.step = self.d + 1
        self.coefs: list[np.ndarray] = []
        log_r = math.log(self.r_max) if self.r_max > 0 else -math.inf
        for k in range((self.d + 1) // 2):
            coefs = [1.0]
            log_terms = [2 * k * log_r]
            prod = 1.0
            small = 0
            n = 0
            while True:
                prod *= coef_B(self.d, (n * self.step + 2 * k) // 2)
                n += 1
                coefs.append(prod)
                if prod == 0.0:
                    break
                lt = math.log(abs(prod)) + (n * self.step + 2 * k) * log_r
                log_terms.append(lt)
                total = np.logaddexp.reduce(np.array(log_terms))
                small = small + 1 if lt < total + math.log(1e-17) else 0
                if small >= 3:
                    break
                if n >= max_terms:
                    raise SeriesAccuracyError(f"series for u_{2 * k} did not converge at r_max={r_max}")
            self.coefs.append(np.array(coefs))

    @property
    def size(self) -> int:
        return len(self.coefs)

    def _check_r(self, r: np.ndarray) -> None:
        if np.any(r > self.r_max * (1 + 1e-12)):
            raise SeriesAccuracyError(
                f"radius {float(np.max(r))} exceeds series range {self.r_max}; rebuild with a larger r_max"
            )
        if np.any(r < 0.0):
            raise DomainError("radius must be nonnegative")

    def eval(self, k: int, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        self._check_r(r)
        z = r**self.step
        acc = np.zeros_like(r)
        for c in self.coefs[k][::-1]:
            acc = acc * z + c
        return acc * r ** (2 * k)

    def power_series(self, c: Sequence[float]) -> np.ndarray:
        """Dense coefficient array ``a`` with ``sum_k c_k u_{2k}(r) = sum_m a[m] r^m``."""
        top = max((len(cf) - 1) * self.step + 2 * k for k, cf in enumerate(self.coefs))
        a = np.zeros(top + 1)
        for k, cf in enumerate(self.coefs):
            a[2 * k :: self.step][: len(cf)] += c[k] * cf
        return a

    def moment(self, k: int, R: float, power: int) -> float:
        """``integral_0^R r^power u_{2k}(r) dr`` by term-wise integration."""
        self._check_r(np.asarray(R))
        e = np.arange(len(self.coefs[k])) * self.step + 2 * k + power + 1
        return float(np.sum(self.coefs[k] * np.power(R, e) / e))


@lru_cache(maxsize=32)
def series_basis(d: int, r_max: float = DEFAULT_SCAN_MAX) -> SeriesBasis:
    return SeriesBasis(d, r_max)


def eval_u(basis: SeriesBasis, k: int, r):
    """Basis function u_{2k} at ``r`` (vectorized)."""
    _check_k(basis.d, k)
    out = basis.eval(k, r)
    return float(out) if np.ndim(r) == 0 else out


def matrix_M(d: int, R: float, basis: SeriesBasis | None = None) -> np.ndarray:
    """Moment-condition matrix whose null vectors give E-L-compatible coefficients."""
    d = _check_odd(d)
    if R < 0.0:
        raise DomainError("R must be nonnegative")
    basis = basis or series_basis(d, max(DEFAULT_SCAN_MAX, float(R)))
    K = basis.size
    m = np.empty((K, K))
    for k in range(K):
        ak = coef_A(d, k)
        for j in range(K):
            m[k, j] = ak * basis.moment(j, R, d - 2 * k) if R > 0.0 else 0.0
        m[k, k] -= coef_D(d, k)
    return m


def det_M(d: int, R: float, basis: SeriesBasis | None = None) -> float:
    return float(np.linalg.det(matrix_M(d, R, basis)))


def odd_potential(d: int) -> Potential:
    return Potential(_check_odd(d), 3.0, 2.0 - d)


@dataclass
class RootCandidate:
    R: float
    accepted: bool
    reason: str
    c: np.ndarray | None = None
    min_u: float | None = None


@dataclass
class SeriesSolution:
    """A normalized minimizer ``u = sum_k c_k u_{2k}`` supported on [0, R]."""

    d: int
    R: float
    c: np.ndarray
    norm_const: float
    basis_funcs: Sequence[Callable[[np.ndarray], np.ndarray]] = field(repr=False)
    candidates: list[RootCandidate] = field(default_factory=list, repr=False)
    method: str = "series"

    @property
    def potential(self) -> Potential:
        return odd_potential(self.d)

    def u(self, r):
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        for ck, f in zip(self.c, self.basis_funcs):
            out = out + ck * f(r)
        return out

    @cached_property
    def density(self) -> RadialDensity:
        return RadialDensity(self.d, "profile", self.R, self.u, 0.0, 1.0, f"odd-d{self.d}")

    @cached_property
    def C0(self) -> float:
        return convolve(self.potential, self.density, 0.0)

    @cached_property
    def energy(self) -> float:
        return energy(self.potential, self.density)


def _basis_funcs(basis: SeriesBasis):
    return [lambda r, k=k: basis.eval(k, r) for k in range(basis.size)]


def _min_on_support(f: Callable[[np.ndarray], np.ndarray], R: float, n: int = 1000) -> float:
    grid = np.linspace(0.0, R, n)
    vals = f(grid)
    i = int(np.argmin(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, n - 1)]
    best = float(vals[i])
    if hi > lo:
        res = minimize_scalar(lambda t: float(f(np.asarray(t))), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-12 * R})
        best = min(best, float(res.fun))
    return best


def _normalize(basis_moment: Callable[[int], float], c: np.ndarray, d: int) -> float:
    mass = sphere_area(d) * sum(ck * basis_moment(k) for k, ck in enumerate(c))
    return 1.0 / mass


def solve_odd(
    d: int,
    r_scan_max: float = DEFAULT_SCAN_MAX,
    n_scan: int = DEFAULT_N_SCAN,
    root_tol: float = DEFAULT_ROOT_TOL,
    null_tol: float = DEFAULT_NULL_TOL,
) -> SeriesSolution:
    """Construct the minimizer for odd ``d`` with (a, b) = (3, 2 - d).

    Every sign change of ``det M`` on (0, r_scan_max] is refined; a root is kept
    when its null vector gives a density of one sign on [0, R]. Exactly one root
    must survive.
    """
    d = _check_odd(d)
    basis = series_basis(d, float(r_scan_max))
    f = lambda R: det_M(d, R, basis)  # noqa: E731
    brackets = bracket_roots(f, 0.0, r_scan_max, n_scan)
    candidates: list[RootCandidate] = []
    for br in brackets:
        R = bisect(f, br, root_tol)
        try:
            m = matrix_M(d, R, basis)
            # the D_{2k} diagonal sets the natural scale of M
            scale = max(np.linalg.norm(m, 2), float(max(coef_D(d, k) for k in range(basis.size))))
            c = null_vector(m, null_tol, scale)
        except NoNullSpaceError as exc:
            candidates.append(RootCandidate(R, False, f"no null space: {exc}"))
            continue
        u = lambda r, c=c: sum(ck * basis.eval(k, r) for k, ck in enumerate(c))  # noqa: E731
        lo = _min_on_support(u, R)
        hi = -_min_on_support(lambda r: -u(r), R)
        if lo >= 0.0:
            candidates.append(RootCandidate(R, True, "nonnegative", c, lo))
        elif hi <= 0.0:
            candidates.append(RootCandidate(R, True, "nonnegative after sign flip", -c, -hi))
        else:
            log.info("discarding root R=%.15g: density changes sign (min %.3e, max %.3e)", R, lo, hi)
            candidates.append(RootCandidate(R, False, "density changes sign", c, lo))
    good = [cand for cand in candidates if cand.accepted]
    if not good:
        raise ConstructionError(
            f"no admissible root of det M on (0, {r_scan_max}] for d={d} "
            f"({len(brackets)} sign changes scanned with n_scan={n_scan})",
            candidates,
        )
    if len(good) > 1:
        radii = ", ".join(f"{g.R:.15g}" for g in good)
        raise AmbiguityError(f"several admissible roots for d={d}: {radii}", candidates)
    chosen = good[0]
    norm = _normalize(lambda k: basis.moment(k, chosen.R, d - 1), chosen.c, d)
    return SeriesSolution(d, chosen.R, chosen.c * norm, norm, _basis_funcs(basis), candidates, "series")


# ---------------------------------------------------------------------------
# elementary closed forms


def u0_d3(r):
    """``(cosh(br) sin(br) + sinh(br) cos(br)) / (2 b r)`` with ``b = 2^(1/4)``."""
    r = np.asarray(r, dtype=float)
    x = BETA * r
    with np.errstate(invalid="ignore", divide="ignore"):
        out = (np.cosh(x) * np.sin(x) + np.sinh(x) * np.cos(x)) / (2.0 * x)
    return np.where(r == 0.0, 1.0, out)


def u2_d3(r):
    """``3 (cosh(br) sin(br) - sinh(br) cos(br)) / (2 b^3 r)``."""
    r = np.asarray(r, dtype=float)
    x = BETA * r
    with np.errstate(invalid="ignore", divide="ignore"):
        out = 3.0 * (np.cosh(x) * np.sin(x) - np.sinh(x) * np.cos(x)) / (2.0 * BETA**3 * r)
    return np.where(r == 0.0, 0.0, out)


def det_M_d3(R):
    """Elementary form of det M(R) in d = 3."""
    t = BETA * np.asarray(R, dtype=float)
    return 3.0 * (np.cos(2 * t) + np.cosh(2 * t) + t * np.sin(2 * t) - t * np.sinh(2 * t))


def _root(f, lo, hi, n_scan=DEFAULT_N_SCAN, tol=DEFAULT_ROOT_TOL) -> float:
    brackets = bracket_roots(f, lo, hi, n_scan)
    if len(brackets) != 1:
        raise ConstructionError(f"expected one root on [{lo}, {hi}], found {len(brackets)}")
    return bisect(f, brackets[0], tol)


def closed_form(d: int) -> SeriesSolution:
    """d = 1 and d = 3 minimizers from elementary functions."""
    if d == 1:
        s2 = math.sqrt(2.0)
        R = _root(lambda t: s2 * t - 1.0 / math.tanh(s2 * t), 1e-3, DEFAULT_SCAN_MAX)
        c0 = s2 / (2.0 * math.sinh(s2 * R))
        funcs = [lambda r: np.cosh(s2 * np.asarray(r, dtype=float))]
        return SeriesSolution(1, R, np.array([c0]), c0, funcs, [], "closed-form")
    if d == 3:
        R = _root(lambda t: float(det_M_d3(t)), 0.0, DEFAULT_SCAN_MAX)
        ratio = math.sqrt(2.0) / 3.0 * math.tan(BETA * R) * math.tanh(BETA * R)
        rule = gauss_legendre(64, 0.0, R)
        mass = 4.0 * math.pi * rule.integrate(lambda r: (u0_d3(r) + ratio * u2_d3(r)) * r * r)
        c0 = 1.0 / mass
        return SeriesSolution(3, R, np.array([c0, c0 * ratio]), c0, [u0_d3, u2_d3], [], "closed-form")
    raise DomainError(f"closed forms exist only for d in (1, 3), got {d!r}")


# ---------------------------------------------------------------------------
# diagnostics


def pde_residual(sol: SeriesSolution, n_points: int = 20, basis: SeriesBasis | None = None) -> float:
    """Relative residual of ``Delta^((d+1)/2) u = A_{d-1}(2-d) u`` at interior points.

    Computed by term-wise differentiation of the power series.
    """
    d = sol.d
    basis = basis or series_basis(d, max(DEFAULT_SCAN_MAX, sol.R))
    a = basis.power_series(sol.c)
    lap = a.copy()
    for _ in range((d + 1) // 2):
        m = np.arange(len(lap))
        shifted = np.zeros_like(lap)
        shifted[:-2] = (lap * m * (m + d - 2))[2:]
        lap = shifted
    rs = np.linspace(0.0, sol.R, n_points + 2)[1:-1]
    lhs = np.polynomial.polynomial.polyval(rs, lap)
    rhs = coef_A(d, (d - 1) // 2) * (2 - d) * np.polynomial.polynomial.polyval(rs, a)
    return float(np.max(np.abs(lhs - rhs)) / np.max(np.abs(rhs)))


def moment_residuals(sol: SeriesSolution) -> list[float]:
    """Relative mismatch of ``A_{2k} (|x|^(1-2k) * rho)(0)`` and ``|S^{d-1}| D_{2k} c_{2k}`` per k."""
    d = sol.d
    out = []
    for k in range((d + 1) // 2):
        lhs = coef_A(d, k) * kernel_convolve(d, 1.0 - 2 * k, sol.density, 0.0)
        rhs = sphere_area(d) * coef_D(d, k) * sol.c[k]
        out.append(abs(lhs - rhs) / abs(rhs))
    return out
