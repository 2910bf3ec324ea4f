"""Explicit minimizers of attractive-repulsive power-law interaction energies.

``W(x) = |x|^a/a - |x|^b/b`` (exponent 0 meaning ``ln|x|``). The package
builds the minimizers for (a, b) = (3, 2 - d) in odd d by a power series, for
(3, 1 - d) in even d by projecting one dimension down, checks them against
the Euler-Lagrange conditions and against discrete particle minimization.
"""

from .catalog import CatalogEntry, frank_interval, get_entry, list_entries, quadratic_attraction, sphere_shell
from .dim_reduction import ProjectedDensity, c_log, eta, even_minimizer, project, q_average
from .kernels import BACKEND
from .numerics import DomainError, EvaluationError, NoNullSpaceError
from .odd_solver import (
    AmbiguityError,
    ConstructionError,
    SeriesAccuracyError,
    SeriesSolution,
    closed_form,
    det_M,
    matrix_M,
    solve_odd,
)
from .oracle import ParticleConfig, discrete_energy, minimize_particles, radial_histogram, support_radius
from .potential import LOG, Potential, RadialDensity, convolve, energy, profile_density, shell_density
from .verify import ELReport, c0_identity_check, check_euler_lagrange

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "LOG",
    "AmbiguityError",
    "CatalogEntry",
    "ConstructionError",
    "DomainError",
    "ELReport",
    "EvaluationError",
    "NoNullSpaceError",
    "ParticleConfig",
    "Potential",
    "ProjectedDensity",
    "RadialDensity",
    "SeriesAccuracyError",
    "SeriesSolution",
    "c0_identity_check",
    "c_log",
    "check_euler_lagrange",
    "closed_form",
    "convolve",
    "det_M",
    "discrete_energy",
    "energy",
    "eta",
    "even_minimizer",
    "frank_interval",
    "get_entry",
    "list_entries",
    "matrix_M",
    "minimize_particles",
    "profile_density",
    "project",
    "q_average",
    "quadratic_attraction",
    "radial_histogram",
    "shell_density",
    "solve_odd",
    "sphere_shell",
    "support_radius",
]
