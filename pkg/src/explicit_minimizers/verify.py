"""Euler-Lagrange checks for radial densities.

A minimizer satisfies ``W * rho = C0`` on its support and ``W * rho >= C0``
everywhere. ``check_euler_lagrange`` samples both conditions on radial grids
and reports the worst deviations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .numerics import DomainError
from .potential import Potential, RadialDensity, convolve_many, energy

__all__ = [
    "ELReport",
    "check_euler_lagrange",
    "c0_identity_check",
    "fmt17",
    "DEFAULT_TOL_IN",
    "DEFAULT_TOL_OUT",
    "EDGE_OFFSET",
]

DEFAULT_TOL_IN = 1e-6
DEFAULT_TOL_OUT = 1e-8
DEFAULT_N_INTERIOR = 64
DEFAULT_N_EXTERIOR = 64
# the interior grid stops this fraction of R short of the edge
EDGE_OFFSET = 1e-4


def fmt17(x: float) -> str:
    """Round-trip decimal string with 17 significant digits."""
    return format(float(x), ".17g")


@dataclass
class ELReport:
    C0_estimate: float
    interior_residual: float
    exterior_margin: float
    interior_grid: np.ndarray = field(repr=False)
    exterior_grid: np.ndarray = field(repr=False)
    interior_values: np.ndarray = field(repr=False)
    exterior_values: np.ndarray = field(repr=False)
    tol_in: float = DEFAULT_TOL_IN
    tol_out: float = DEFAULT_TOL_OUT
    label: str = ""

    @property
    def passed(self) -> bool:
        return self.interior_residual <= self.tol_in and self.exterior_margin >= -self.tol_out

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "C0_estimate": fmt17(self.C0_estimate),
            "interior_residual": fmt17(self.interior_residual),
            "exterior_margin": fmt17(self.exterior_margin),
            "tol_in": fmt17(self.tol_in),
            "tol_out": fmt17(self.tol_out),
            "pass": self.passed,
            "grids": {
                "interior": [fmt17(r) for r in self.interior_grid],
                "exterior": [fmt17(r) for r in self.exterior_grid],
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _grids(rho: RadialDensity, n_interior: int, n_exterior: int, r_ext_max: float):
    R = rho.R
    if r_ext_max <= R:
        raise DomainError(f"exterior grid end {r_ext_max} must exceed R={R}")
    frac = np.arange(1, n_exterior + 1) / n_exterior
    outside = R + (r_ext_max - R) * frac
    if rho.kind == "shell":
        # the support is the sphere itself; the inside of the ball is exterior too
        interior = np.array([R])
        inside = R * np.arange(n_interior) / n_interior
        return interior, np.concatenate([inside, outside])
    interior = np.linspace(0.0, R * (1.0 - EDGE_OFFSET), n_interior)
    return interior, outside


def check_euler_lagrange(
    pot: Potential,
    rho: RadialDensity,
    tol_in: float = DEFAULT_TOL_IN,
    tol_out: float = DEFAULT_TOL_OUT,
    n_interior: int = DEFAULT_N_INTERIOR,
    r_ext_max: float | None = None,
    n_exterior: int = DEFAULT_N_EXTERIOR,
) -> ELReport:
    """Sample ``W * rho`` on the support and outside it up to ``r_ext_max`` (default 3R).

    ``C0`` is the median over the interior grid, so a few poor edge samples do
    not shift it.
    """
    if pot.d != rho.d:
        raise DomainError(f"potential is {pot.d}-dimensional but density is {rho.d}-dimensional")
    if n_interior < 1 or n_exterior < 1:
        raise DomainError("grids need at least one point")
    r_ext_max = 3.0 * rho.R if r_ext_max is None else float(r_ext_max)
    interior, exterior = _grids(rho, n_interior, n_exterior, r_ext_max)
    vin = convolve_many(pot, rho, interior)
    vout = convolve_many(pot, rho, exterior)
    c0 = float(np.median(vin))
    scale = abs(c0) if c0 != 0.0 else 1.0
    return ELReport(
        C0_estimate=c0,
        interior_residual=float(np.max(np.abs(vin - c0)) / scale),
        exterior_margin=float(np.min(vout - c0)),
        interior_grid=interior,
        exterior_grid=exterior,
        interior_values=vin,
        exterior_values=vout,
        tol_in=tol_in,
        tol_out=tol_out,
        label=rho.label,
    )


def c0_identity_check(pot: Potential, rho: RadialDensity, report: ELReport | None = None) -> float:
    """``|C0 - 2 E| / |C0|``; for a minimizer ``E = C0 / 2``."""
    report = report or check_euler_lagrange(pot, rho, n_interior=16, n_exterior=1)
    c0 = report.C0_estimate
    return abs(c0 - 2.0 * energy(pot, rho)) / abs(c0)
