"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage or input error,
3 numerical construction error. Every command writes ``manifest.json`` next
to its outputs. Global flags may also be given through environment variables
``EXPLICIT_MINIMIZERS_TOL_IN``, ``..._TOL_OUT``, ``..._GRID_N``, ``..._OUT_DIR``
and ``..._SEED``.
"""

from __future__ import annotations

import csv
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import click
import numpy as np

from . import __version__
from .catalog import UnknownEntryError, get_entry, list_entries
from .dim_reduction import ProjectedDensity, even_minimizer, project
from .numerics import DomainError
from .odd_solver import (
    DEFAULT_N_SCAN,
    DEFAULT_SCAN_MAX,
    ConstructionError,
    SeriesAccuracyError,
    SeriesSolution,
    series_basis,
    solve_odd,
)
from .oracle import (
    DescentStalledError,
    minimize_particles,
    radial_histogram,
    support_radius,
    write_histogram_csv,
    write_points_csv,
)
from .potential import Potential, RadialDensity, convolve_many, energy
from .verify import DEFAULT_TOL_IN, DEFAULT_TOL_OUT, check_euler_lagrange, fmt17

ENV_PREFIX = "EXPLICIT_MINIMIZERS"
DEFAULT_GRID_N = 512

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_CONSTRUCTION = 3


class InputError(click.ClickException):
    exit_code = EXIT_USAGE


class NumericalError(click.ClickException):
    exit_code = EXIT_CONSTRUCTION


@dataclass
class Settings:
    tol_in: float = DEFAULT_TOL_IN
    tol_out: float = DEFAULT_TOL_OUT
    grid_n: int = DEFAULT_GRID_N
    out_dir: Path = Path(".")
    seed: int = 0


@dataclass
class RunManifest:
    command: str
    parameters: dict
    version: str
    tolerances: dict
    timestamp: str
    outputs: list[str] = field(default_factory=list)

    def write(self, out_dir: Path) -> Path:
        path = out_dir / "manifest.json"
        path.write_text(json.dumps(asdict(self), indent=2, sort_keys=True) + "\n")
        return path


# ---------------------------------------------------------------------------
# flags shared by the group and every subcommand

_GLOBAL_FLAGS = [
    click.option("--tol-in", type=float, default=None, help="Interior residual tolerance (relative)."),
    click.option("--tol-out", type=float, default=None, help="Allowed exterior margin below C0."),
    click.option("--grid-n", type=click.IntRange(min=2), default=None, help="Points in profile CSVs."),
    click.option("--out-dir", type=click.Path(file_okay=False, path_type=Path), default=None,
                 help="Directory for output files."),
    click.option("--seed", type=int, default=None, help="Seed for the particle oracle."),
]


def global_flags(f):
    for opt in reversed(_GLOBAL_FLAGS):
        f = opt(f)
    return f


def _settings(ctx: click.Context, **local) -> Settings:
    base: Settings = ctx.find_object(Settings) or Settings()
    merged = {k: (v if v is not None else getattr(base, k)) for k, v in local.items()}
    s = Settings(**{**asdict(base), **merged})
    s.out_dir.mkdir(parents=True, exist_ok=True)
    return s


def _tolerances(s: Settings) -> dict:
    return {"tol_in": fmt17(s.tol_in), "tol_out": fmt17(s.tol_out)}


def _manifest(command: str, params: dict, s: Settings, outputs: list[Path]) -> Path:
    m = RunManifest(
        command=command,
        parameters={k: str(v) for k, v in params.items()},
        version=__version__,
        tolerances=_tolerances(s),
        timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        outputs=sorted(p.name for p in outputs),
    )
    return m.write(s.out_dir)


def _dump_json(obj, path: Path) -> Path:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    return path


def _write_csv(path: Path, header: list[str], columns) -> Path:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in zip(*columns):
            w.writerow([fmt17(v) for v in row])
    return path


# ---------------------------------------------------------------------------
# solution files


def _build(d: int, r_scan_max: float = DEFAULT_SCAN_MAX, n_scan: int = DEFAULT_N_SCAN):
    if d < 1:
        raise InputError(f"dimension must be >= 1, got {d}")
    kw = {"r_scan_max": r_scan_max, "n_scan": n_scan}
    try:
        return solve_odd(d, **kw) if d % 2 else even_minimizer(d, **kw)
    except (ConstructionError, SeriesAccuracyError) as exc:
        detail = "".join(f"\n  root R={c.R:.15g}: {c.reason}" for c in getattr(exc, "candidates", []))
        raise NumericalError(f"{exc}{detail}") from exc


def _potential_and_density(sol) -> tuple[Potential, RadialDensity]:
    return sol.potential, sol.density


def _odd_record(sol: SeriesSolution) -> dict:
    return {"d": sol.d, "R": fmt17(sol.R), "coefficients": [fmt17(c) for c in sol.c],
            "norm_const": fmt17(sol.norm_const)}


def solution_to_dict(sol) -> dict:
    pot = sol.potential
    out = {"a": fmt17(pot.a), "b": fmt17(pot.b), "d": sol.d, "R": fmt17(sol.R),
           "C0": fmt17(sol.C0), "energy": fmt17(sol.energy)}
    if isinstance(sol, ProjectedDensity):
        out.update(kind="even-projection", **{"lambda": fmt17(sol.lam)}, source=_odd_record(sol.source))
    else:
        out.update(kind="odd-series", coefficients=[fmt17(c) for c in sol.c], norm_const=fmt17(sol.norm_const))
    return out


def _series_density(d: int, R: float, coefs: list[float]) -> RadialDensity:
    basis = series_basis(d, max(DEFAULT_SCAN_MAX, R))
    c = np.asarray(coefs, dtype=float)
    if c.size != basis.size:
        raise InputError(f"d={d} needs {basis.size} coefficients, got {c.size}")

    def u(r):
        return sum(ck * basis.eval(k, r) for k, ck in enumerate(c))

    return RadialDensity(d, "profile", R, u, 0.0, 1.0, f"odd-d{d}").normalized()


def _num(obj: dict, key: str, where: str) -> float:
    try:
        val = float(obj[key])
    except KeyError:
        raise InputError(f"{where}: missing field {key!r}") from None
    except (TypeError, ValueError):
        raise InputError(f"{where}: field {key!r} is not a number: {obj[key]!r}") from None
    if not math.isfinite(val):
        raise InputError(f"{where}: field {key!r} is not finite")
    return val


def load_solution(path: Path) -> tuple[Potential, RadialDensity]:
    """Rebuild the potential and the unit-mass density described by a solution file."""
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise InputError(f"{path}: line 1, column 1: expected a JSON object")
    where = str(path)
    kind = data.get("kind")
    d = int(_num(data, "d", where))
    a, b, R = _num(data, "a", where), _num(data, "b", where), _num(data, "R", where)
    try:
        pot = Potential(d, a, b)
        if kind == "odd-series":
            coefs = [float(c) for c in data.get("coefficients", [])]
            return pot, _series_density(d, R, coefs)
        if kind == "even-projection":
            src = data.get("source")
            if not isinstance(src, dict):
                raise InputError(f"{where}: missing object 'source'")
            sd = int(_num(src, "d", where + ":source"))
            sR = _num(src, "R", where + ":source")
            lam = _num(data, "lambda", where)
            source = _series_density(sd, sR, [float(c) for c in src.get("coefficients", [])])
            dens = project(source).rescaled(lam)
            dens = RadialDensity(d, "profile", R, dens.smooth, dens.edge, 1.0, f"even-d{d}").normalized()
            return pot, dens
    except (DomainError, ValueError) as exc:
        raise InputError(f"{where}: {exc}") from None
    raise InputError(f"{where}: unknown solution kind {kind!r}")


# ---------------------------------------------------------------------------
# commands


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--tol-in", type=float, default=DEFAULT_TOL_IN, envvar=f"{ENV_PREFIX}_TOL_IN", show_default=True)
@click.option("--tol-out", type=float, default=DEFAULT_TOL_OUT, envvar=f"{ENV_PREFIX}_TOL_OUT", show_default=True)
@click.option("--grid-n", type=click.IntRange(min=2), default=DEFAULT_GRID_N, envvar=f"{ENV_PREFIX}_GRID_N",
              show_default=True)
@click.option("--out-dir", type=click.Path(file_okay=False, path_type=Path), default=Path("."),
              envvar=f"{ENV_PREFIX}_OUT_DIR")
@click.option("--seed", type=int, default=0, envvar=f"{ENV_PREFIX}_SEED", show_default=True)
@click.version_option(__version__, prog_name="explicit-minimizers")
@click.pass_context
def main(ctx, tol_in, tol_out, grid_n, out_dir, seed):
    """Construct and verify explicit minimizers of power-law interaction energies."""
    ctx.obj = Settings(tol_in, tol_out, grid_n, out_dir, seed)


@main.command()
@click.option("--d", "d", type=int, required=True, help="Dimension.")
@click.option("--r-scan-max", type=float, default=DEFAULT_SCAN_MAX, show_default=True,
              help="Upper end of the det M root scan.")
@click.option("--n-scan", type=click.IntRange(min=2), default=DEFAULT_N_SCAN, show_default=True)
@click.option("--r-max", type=float, default=None, help="Profile grid end (default 2R).")
@global_flags
@click.pass_context
def solve(ctx, d, r_scan_max, n_scan, r_max, **flags):
    """Minimizer for (3, 2-d) in odd d or (3, 1-d) in even d."""
    s = _settings(ctx, **flags)
    sol = _build(d, r_scan_max, n_scan)
    pot, rho = _potential_and_density(sol)
    sol_path = _dump_json(solution_to_dict(sol), s.out_dir / f"solution-d{d}.json")
    top = 2.0 * sol.R if r_max is None else r_max
    rs = np.linspace(0.0, top, s.grid_n)
    prof = _write_csv(s.out_dir / f"profile-d{d}.csv", ["r", "rho", "W_conv_rho"],
                      [rs, rho(rs), convolve_many(pot, rho, rs)])
    _manifest("solve", {"d": d, "r_scan_max": r_scan_max, "n_scan": n_scan, "r_max": top,
                        "grid_n": s.grid_n}, s, [sol_path, prof])
    click.echo(f"d={d} R={fmt17(sol.R)} C0={fmt17(sol.C0)} -> {sol_path}")


@main.command()
@click.argument("source", required=False, type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--catalog", "label", default=None, help="Verify a catalog entry instead of a file.")
@click.option("--n-interior", type=click.IntRange(min=1), default=64, show_default=True)
@click.option("--n-exterior", type=click.IntRange(min=1), default=64, show_default=True)
@global_flags
@click.pass_context
def verify(ctx, source, label, n_interior, n_exterior, **flags):
    """Check the Euler-Lagrange conditions for a solution file or catalog entry."""
    s = _settings(ctx, **flags)
    if (source is None) == (label is None):
        raise click.UsageError("give exactly one of SOURCE or --catalog LABEL")
    if label is not None:
        pot, rho, name = *_catalog(label), label
    else:
        (pot, rho), name = load_solution(source), source.stem
    _run_verify(ctx, s, pot, rho, name, n_interior, n_exterior,
                {"source": source or "", "catalog": label or ""})


def _catalog(label: str):
    try:
        e = get_entry(label)
    except UnknownEntryError as exc:
        raise InputError(str(exc.args[0])) from None
    return e.potential, e.density


def _run_verify(ctx, s: Settings, pot, rho, name: str, n_interior: int, n_exterior: int, params: dict):
    rep = check_euler_lagrange(pot, rho, s.tol_in, s.tol_out, n_interior, None, n_exterior)
    path = s.out_dir / f"report-{name}.json"
    path.write_text(rep.to_json())
    _manifest("verify", {**params, "n_interior": n_interior, "n_exterior": n_exterior}, s, [path])
    verdict = "PASS" if rep.passed else "FAIL"
    click.echo(f"{verdict} {name}: interior_residual={rep.interior_residual:.3e} "
               f"exterior_margin={rep.exterior_margin:.3e} C0={fmt17(rep.C0_estimate)}")
    ctx.exit(EXIT_OK if rep.passed else EXIT_FAIL)


@main.group()
def catalog():
    """Previously known explicit minimizers."""


@catalog.command("list")
def catalog_list():
    for label in list_entries():
        e = get_entry(label)
        p = e.potential
        kind = e.density.kind
        click.echo(f"{label}\td={p.d}\ta={p.a:g}\tb={p.b:g}\tR={fmt17(e.density.R)}\t{kind}")


@catalog.command("verify")
@click.argument("label")
@click.option("--n-interior", type=click.IntRange(min=1), default=64, show_default=True)
@click.option("--n-exterior", type=click.IntRange(min=1), default=64, show_default=True)
@global_flags
@click.pass_context
def catalog_verify(ctx, label, n_interior, n_exterior, **flags):
    """Verify one catalog entry."""
    s = _settings(ctx, **flags)
    pot, rho = _catalog(label)
    _run_verify(ctx, s, pot, rho, label, n_interior, n_exterior, {"catalog": label})


@main.command()
@click.option("--d", "d", type=int, required=True)
@click.option("--n", "n", type=click.IntRange(min=2), required=True, help="Number of particles.")
@click.option("--max-steps", type=click.IntRange(min=1), default=20000, show_default=True)
@click.option("--gtol", type=float, default=1e-9, show_default=True)
@click.option("--bins", type=click.IntRange(min=2), default=20, show_default=True)
@global_flags
@click.pass_context
def oracle(ctx, d, n, max_steps, gtol, bins, **flags):
    """Discrete particle minimization compared with the analytic minimizer."""
    s = _settings(ctx, **flags)
    sol = _build(d)
    try:
        cfg = minimize_particles(n, sol.potential, s.seed, max_steps, gtol)
    except DescentStalledError as exc:
        raise NumericalError(str(exc)) from exc
    stem = f"d{d}-n{n}-seed{s.seed}"
    pts = write_points_csv(cfg, s.out_dir / f"points-{stem}.csv")
    hist = write_histogram_csv(radial_histogram(cfg, bins), s.out_dir / f"histogram-{stem}.csv")
    radius = support_radius(cfg)
    e_disc = cfg.energy
    comparison = {
        "d": d, "n": n, "seed": s.seed, "steps": cfg.step_count, "converged": cfg.converged,
        "grad_norm": fmt17(cfg.grad_norm),
        "support_radius": fmt17(radius), "analytic_R": fmt17(sol.R),
        "radius_gap": fmt17(radius / sol.R - 1.0),
        "discrete_energy": fmt17(e_disc), "analytic_energy": fmt17(sol.energy),
        "energy_gap": fmt17(e_disc / sol.energy - 1.0),
    }
    cmp_path = _dump_json(comparison, s.out_dir / f"comparison-{stem}.json")
    _manifest("oracle", {"d": d, "n": n, "max_steps": max_steps, "gtol": gtol, "bins": bins,
                         "seed": s.seed}, s, [pts, hist, cmp_path])
    click.echo(f"support radius {radius:.6f} vs R={sol.R:.6f} ({100 * (radius / sol.R - 1):+.2f}%), "
               f"energy {e_disc:.6f} vs {sol.energy:.6f}")


@main.command("plot-data")
@click.option("--d", "d", type=int, required=True)
@global_flags
@click.pass_context
def plot_data(ctx, d, **flags):
    """Columns r, rho(r) and (W*rho)(r) - C0 on [0, 2R]."""
    s = _settings(ctx, **flags)
    sol = _build(d)
    pot, rho = _potential_and_density(sol)
    rs = np.linspace(0.0, 2.0 * sol.R, s.grid_n)
    path = _write_csv(s.out_dir / f"plot-d{d}.csv", ["r", "rho", "W_conv_rho_minus_C0"],
                      [rs, rho(rs), convolve_many(pot, rho, rs) - sol.C0])
    _manifest("plot-data", {"d": d, "grid_n": s.grid_n}, s, [path])
    click.echo(str(path))


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
