import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from explicit_minimizers.numerics import DomainError
from explicit_minimizers.odd_solver import (
    BETA,
    AmbiguityError,
    ConstructionError,
    SeriesAccuracyError,
    SeriesBasis,
    _coef_B_exact,
    closed_form,
    coef_A,
    coef_B,
    coef_D,
    det_M,
    det_M_d3,
    eval_u,
    matrix_M,
    moment_residuals,
    pde_residual,
    series_basis,
    solve_odd,
    u0_d3,
    u2_d3,
)

from conftest import R1, R3


# The series bookkeeping is checked against the elementary solutions first:
# everything else relies on it.

def test_series_reproduces_cosh_in_one_dimension():
    basis = series_basis(1)
    r = np.linspace(0.0, 2.0, 101)
    np.testing.assert_allclose(eval_u(basis, 0, r), np.cosh(math.sqrt(2) * r), rtol=1e-14)


def test_series_reproduces_elementary_basis_in_three_dimensions():
    basis = series_basis(3)
    r = np.linspace(0.0, 1.5, 101)
    np.testing.assert_allclose(eval_u(basis, 0, r), u0_d3(r), rtol=1e-13, atol=1e-15)
    np.testing.assert_allclose(eval_u(basis, 1, r), u2_d3(r), rtol=1e-13, atol=1e-15)


def test_d1_recursion_matches_cosh_coefficients():
    # coefficient of r^(2n+2) over that of r^(2n) for cosh(sqrt 2 r) is 2 / ((2n+1)(2n+2))
    for n in range(6):
        assert _coef_B_exact(1, n) == Fraction(2, (2 * n + 1) * (2 * n + 2))


# coefficients -------------------------------------------------------------------

@pytest.mark.parametrize("d", [1, 3, 5, 7, 9])
def test_A0_is_d_plus_one(d):
    assert coef_A(d, 0) == d + 1


def test_coefficient_examples():
    assert coef_A(3, 1) == 8
    assert coef_A(5, 2) == -48
    assert coef_B(3, 0) == pytest.approx(-1 / 15, rel=1e-15)
    assert coef_D(3, 1) == 6
    assert coef_D(5, 2) == 280
    for d in (1, 3, 5):
        assert coef_D(d, 0) == 1


@given(st.sampled_from([1, 3, 5, 7, 9, 11]), st.integers(0, 200))
def test_B_sign_is_fixed(d, n):
    sign = np.sign(coef_A(d, (d - 1) // 2) * (2 - d))
    assert np.sign(coef_B(d, n)) == sign


def test_coefficient_domain_errors():
    with pytest.raises(DomainError):
        coef_A(3, 2)
    with pytest.raises(DomainError):
        coef_D(5, -1)
    with pytest.raises(DomainError):
        coef_A(4, 0)


# basis -----------------------------------------------------------------------

def test_basis_values_at_spot_points():
    b1 = series_basis(1)
    assert eval_u(b1, 0, 1.0) == pytest.approx(math.cosh(math.sqrt(2)), rel=1e-15)
    b3 = series_basis(3)
    expect = (math.cosh(BETA) * math.sin(BETA) + math.sinh(BETA) * math.cos(BETA)) / (2 * BETA)
    assert eval_u(b3, 0, 1.0) == pytest.approx(expect, rel=1e-14)
    for d in (1, 3, 5, 7):
        assert eval_u(series_basis(d), 0, 0.0) == 1.0


def test_basis_refuses_radius_beyond_range():
    basis = SeriesBasis(3, r_max=1.0)
    with pytest.raises(SeriesAccuracyError):
        basis.eval(0, 1.5)


@pytest.mark.parametrize("d", [1, 3, 5, 7, 9, 11])
def test_basis_term_degrees_and_tail(d):
    basis = series_basis(d)
    for k, c in enumerate(basis.coefs):
        assert np.all(np.isfinite(c))
        n = len(c) - 1
        last_term = abs(c[-1]) * basis.r_max ** (n * (d + 1) + 2 * k)
        total = sum(abs(ci) * basis.r_max ** (i * (d + 1) + 2 * k) for i, ci in enumerate(c))
        assert last_term <= 1e-16 * total


# matrix M --------------------------------------------------------------------

def test_d1_matrix_condition_is_coth_equation():
    s2 = math.sqrt(2)
    for R in (0.3, 0.7, R1, 1.2):
        m = matrix_M(1, R)[0, 0]
        # m_00 = 2 int_0^R r cosh(sqrt2 r) dr - 1, which vanishes iff sqrt2 R = coth(sqrt2 R)
        t = s2 * R
        assert m == pytest.approx(t * math.sinh(t) - math.cosh(t), rel=1e-12, abs=1e-14)
    assert abs(det_M(1, R1)) <= 1e-12


def test_det_M_three_dimensions_at_zero():
    assert det_M(3, 0.0) == pytest.approx(6.0, rel=1e-15)


@pytest.mark.parametrize("R", [0.0, 0.25, 0.5, 0.75, 1.0])
def test_det_M_matches_elementary_form(R):
    assert det_M(3, R) == pytest.approx(float(det_M_d3(R)), abs=1e-10)


@pytest.mark.parametrize("d", [1, 3, 5, 7, 9, 11])
def test_det_M_at_zero_is_product_of_D(d):
    expect = math.prod(coef_D(d, k) for k in range((d + 1) // 2))
    assert abs(det_M(d, 0.0)) == pytest.approx(expect, rel=1e-14)


def test_M_singular_at_R3():
    m = matrix_M(3, R3)
    sv = np.linalg.svd(m, compute_uv=False)
    assert sv[-1] <= 1e-9 * sv[0]


def test_elementary_determinant_is_concave():
    # phi''(t) = -4 t (sin 2t + sinh 2t) < 0 on (0, 4]
    t = np.linspace(0.01, 4.0, 400)
    phi = lambda t: np.cos(2 * t) + np.cosh(2 * t) + t * np.sin(2 * t) - t * np.sinh(2 * t)  # noqa: E731
    h = 1e-4
    second = (phi(t + h) - 2 * phi(t) + phi(t - h)) / h**2
    assert np.all(second < 0)
    np.testing.assert_allclose(second, -4 * t * (np.sin(2 * t) + np.sinh(2 * t)), rtol=1e-4, atol=1e-5)


# solve -------------------------------------------------------------------------

def test_solve_d1(odd_solutions):
    sol = odd_solutions[1]
    assert abs(sol.R - R1) <= 1e-12
    r = np.linspace(0, sol.R, 50)
    ratio = sol.u(r) / np.cosh(math.sqrt(2) * r)
    assert np.ptp(ratio) <= 1e-13 * ratio[0]


def test_solve_d3(odd_solutions):
    sol = odd_solutions[3]
    assert abs(sol.R - R3) <= 1e-12
    expect = math.sqrt(2) / 3 * math.tan(BETA * sol.R) * math.tanh(BETA * sol.R)
    assert sol.c[1] / sol.c[0] == pytest.approx(expect, rel=1e-10)


@pytest.mark.parametrize("d", [1, 3, 5])
def test_solution_invariants(odd_solutions, d):
    sol = odd_solutions[d]
    m = matrix_M(d, sol.R)
    scale = max(np.linalg.norm(m, 2), max(coef_D(d, k) for k in range(len(sol.c))))
    assert np.linalg.norm(m @ (sol.c / np.linalg.norm(sol.c))) <= 1e-9 * scale
    assert sol.density.radial_moment(0) == pytest.approx(1.0, abs=1e-10)
    grid = np.linspace(0, sol.R, 1000)
    assert np.min(sol.u(grid)) > 0
    assert abs(sol.C0 - 2 * sol.energy) <= 1e-7 * abs(sol.C0)


@pytest.mark.parametrize("d", [1, 3, 5, 7])
def test_pde_residual(odd_solutions, d):
    sol = odd_solutions.get(d) or solve_odd(d)
    assert pde_residual(sol, 20) <= 1e-8


@pytest.mark.parametrize("d", [1, 3, 5])
def test_moment_conditions(odd_solutions, d):
    assert max(moment_residuals(odd_solutions[d])) <= 1e-8


def test_solver_reports_every_root_candidate():
    for d in (5, 7, 9, 11):
        sol = solve_odd(d)
        assert sum(c.accepted for c in sol.candidates) == 1
        assert sol.R in [c.R for c in sol.candidates]


def test_solver_is_deterministic():
    a, b = solve_odd(5), solve_odd(5)
    assert a.R == b.R
    np.testing.assert_array_equal(a.c, b.c)


def test_solver_without_roots_raises_construction_error():
    with pytest.raises(ConstructionError) as info:
        solve_odd(3, r_scan_max=0.5)
    assert not isinstance(info.value, AmbiguityError)


def test_ambiguity_error_is_a_construction_error():
    assert issubclass(AmbiguityError, ConstructionError)


# closed forms ------------------------------------------------------------------

@pytest.mark.parametrize("d", [1, 3])
def test_closed_form_agrees_with_series(odd_solutions, closed_forms, d):
    a, b = odd_solutions[d], closed_forms[d]
    assert abs(a.R - b.R) <= 1e-12
    r = np.linspace(0, a.R, 300)
    tol = 1e-12 if d == 1 else 1e-11
    assert np.max(np.abs(a.u(r) - b.u(r))) <= tol


def test_closed_form_d3_matches_bracketed_expression(closed_forms):
    sol = closed_forms[3]
    R = sol.R
    r = np.linspace(0.01, R, 40)
    x = BETA * r
    shape = ((np.cosh(x) * np.sin(x) + np.sinh(x) * np.cos(x))
             + math.tan(BETA * R) * math.tanh(BETA * R) * (np.cosh(x) * np.sin(x) - np.sinh(x) * np.cos(x))) / r
    ratio = sol.u(r) / shape
    assert np.ptp(ratio) <= 1e-12 * abs(ratio[0])


def test_closed_form_rejects_other_dimensions():
    with pytest.raises(DomainError):
        closed_form(5)
