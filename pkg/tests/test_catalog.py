import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from explicit_minimizers.catalog import (
    REGISTRY,
    ExcludedCaseError,
    UnknownEntryError,
    b_star,
    frank_interval,
    frank_radius,
    get_entry,
    list_entries,
    quadratic_attraction,
    quadratic_radius,
    shell_radius,
    sphere_shell,
)
from explicit_minimizers.numerics import DomainError
from explicit_minimizers.verify import check_euler_lagrange

G = mpmath.gamma


def mp_quadratic_radius(d, b):
    return float((G(mpmath.mpf(4 - b) / 2) * G(mpmath.mpf(b + d) / 2) / G(mpmath.mpf(2 + d) / 2)) ** (1 / mpmath.mpf(2 - b)))


def mp_shell_radius(d, a, b):
    num = G(mpmath.mpf(d + b - 1) / 2) * G(mpmath.mpf(2 * d + a - 2) / 2)
    den = G(mpmath.mpf(d + a - 1) / 2) * G(mpmath.mpf(2 * d + b - 2) / 2)
    return float((num / den) ** (1 / mpmath.mpf(a - b)) / 2)


def mp_frank_radius(a):
    a = mpmath.mpf(a)
    num = mpmath.sqrt(mpmath.pi) * G((3 - a) / 2) * mpmath.sin((a - 1) * mpmath.pi / 2)
    return float((num / (G((4 - a) / 2) * (a - 1) * mpmath.pi)) ** (1 / (a - 2)))


# radii ---------------------------------------------------------------------------

def test_derived_unit_radii():
    assert quadratic_radius(3, -1.0) == pytest.approx(1.0, rel=1e-14)
    assert quadratic_radius(2, 0.0) == pytest.approx(1.0, rel=1e-14)
    assert shell_radius(3, 2.0, 1.0) == pytest.approx(2 / 3, rel=1e-14)


@pytest.mark.parametrize("d,b", [(1, 0.5), (1, 1.0), (2, -1.0), (2, 1.5), (3, 0.0), (3, -2.5), (5, -1.0)])
def test_quadratic_radius_against_mpmath(d, b):
    assert quadratic_radius(d, b) == pytest.approx(mp_quadratic_radius(d, b), rel=1e-13)


@pytest.mark.parametrize("d,a,b", [(3, 2.0, 1.0), (3, 3.0, 1.5), (4, 4.0, 1.0), (2, 2.5, 1.9)])
def test_shell_radius_against_mpmath(d, a, b):
    assert shell_radius(d, a, b) == pytest.approx(mp_shell_radius(d, a, b), rel=1e-13)


@pytest.mark.parametrize("a", [2.2, 2.5, 2.8])
def test_frank_radius_against_mpmath(a):
    assert frank_radius(a) == pytest.approx(mp_frank_radius(a), rel=1e-13)


def test_b_star_boundary_value():
    assert b_star(3, 2.0) == pytest.approx(1.0, abs=1e-15)


# densities -----------------------------------------------------------------------

@pytest.mark.parametrize("label", list(REGISTRY))
def test_every_entry_has_unit_mass(label):
    entry = get_entry(label)
    assert entry.label == label
    assert entry.density.radial_moment(0) == pytest.approx(1.0, abs=1e-9)
    assert entry.potential.d == entry.density.d


@pytest.mark.parametrize("d", [1, 2, 3])
def test_newtonian_quadratic_entry_is_flat(d):
    entry = quadratic_attraction(d, 2.0 - d)
    assert entry.density.edge == 0.0
    r = np.linspace(0, entry.density.R, 9)
    vals = entry.density(r)
    assert np.ptp(vals) <= 1e-15 * vals[0]


def test_quadratic_profile_shape():
    entry = quadratic_attraction(2, -1.0)
    q = 1 - (-1 + 2) / 2
    rho, R = entry.density, entry.density.R
    r = np.array([0.0, 0.3, 0.6, 0.9]) * R
    ratio = rho(r) / (R * R - r * r) ** q
    assert np.ptp(ratio) <= 1e-13 * ratio[0]


@pytest.mark.parametrize("a", [2.2, 2.5, 2.8])
def test_frank_profile_diverges_at_edge(a):
    entry = frank_interval(a)
    rho = entry.density
    assert rho.edge == pytest.approx(-(a - 1) / 2)
    R = rho.R
    near = rho(R * (1 - np.array([1e-4, 1e-6])))
    # doubling exponent: ratio of values is (1e-2)^(-(a-1)/2) up to the smooth factor
    assert near[1] / near[0] == pytest.approx(100 ** ((a - 1) / 2), rel=1e-4)


def test_shell_entry_is_a_sphere():
    entry = sphere_shell(3, 2.0, 1.0)
    assert entry.density.kind == "shell"
    assert entry.density.R == pytest.approx(2 / 3)


# validity ranges -----------------------------------------------------------------

def test_excluded_degenerate_case():
    with pytest.raises(ExcludedCaseError):
        sphere_shell(3, 4.0, 2.0)


@pytest.mark.parametrize(
    "args",
    [(2, 2.0, 2.0), (3, 1.5, 1.0), (3, 4.5, 1.0), (3, 2.0, 0.5), (1, 3.0, 1.0)],
)
def test_shell_out_of_range(args):
    with pytest.raises(DomainError):
        sphere_shell(*args)


@pytest.mark.parametrize("d,b", [(3, -3.0), (3, 1.0), (1, 2.0), (2, 2.0)])
def test_quadratic_out_of_range(d, b):
    with pytest.raises(DomainError):
        quadratic_attraction(d, b)


@pytest.mark.parametrize("a", [2.0, 3.0, 1.5])
def test_frank_out_of_range(a):
    with pytest.raises(DomainError):
        frank_interval(a)


def test_registry_lookup():
    assert "uniform-ball-d3-b-1" in list_entries()
    with pytest.raises(UnknownEntryError):
        get_entry("no-such-entry")


# Euler-Lagrange ------------------------------------------------------------------

@pytest.mark.parametrize("label", list(REGISTRY))
def test_every_entry_passes(label):
    rep = get_entry(label).verify()
    assert rep.passed, (rep.interior_residual, rep.exterior_margin)
    assert rep.interior_residual <= 1e-7


@pytest.mark.parametrize("label", list(REGISTRY))
@pytest.mark.parametrize("factor", [0.95, 1.05])
def test_every_entry_fails_when_radius_is_off(label, factor):
    entry = get_entry(label)
    rho = entry.density
    rep = check_euler_lagrange(entry.potential, rho.with_support(factor * rho.R))
    assert not rep.passed
    if rho.kind == "profile":
        assert rep.interior_residual >= 1e-3
    else:
        # a shell has a single support radius; the wrong sphere shows up outside
        assert rep.exterior_margin <= -1e-3


@given(st.sampled_from([2, 3, 4]), st.floats(2.0, 4.0), st.floats(0.0, 1.0))
@settings(max_examples=15, deadline=None)
def test_random_valid_shells_pass(d, a, t):
    lo = max(b_star(d, a), 2.0 - d + 1e-3)
    hi = min(2.0, a - 1e-3)
    if (a, hi) == (4.0, 2.0):
        hi = 2.0 - 1e-3
    if lo > hi:
        return
    b = lo + t * (hi - lo)
    rep = sphere_shell(d, a, b).verify(n_interior=16, n_exterior=16)
    assert rep.passed, (d, a, b, rep.exterior_margin)
