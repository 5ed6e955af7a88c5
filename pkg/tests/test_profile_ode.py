import numpy as np
import pytest
import sympy as sp
from hypothesis import given, strategies as st

from s3flat.construct import helicoidal_patch
from s3flat.errors import DomainError, SingularInitialData, StiffnessAbort
from s3flat.forms import forms_at
from s3flat.profile_ode import (ProfileSolution, convergence_order, cos_nu, first_form_det,
                                gauss_flatness_residual, integrate, ode_residual, ode_rhs)

s_, al, be = sp.symbols("s alpha beta", real=True)
ph = sp.Function("phi")(s_)
P, V, A = sp.symbols("P V A", real=True)


def _jets(expr):
    """Replace phi and its derivatives by plain symbols."""
    return expr.subs(sp.Derivative(ph, (s_, 2)), A).subs(sp.Derivative(ph, s_), V).subs(ph, P)


E_sym = al ** 2 * sp.cos(ph) ** 2 + be ** 2 * sp.sin(ph) ** 2
W_sym = be ** 2 * sp.sin(ph) ** 2 + al ** 2 * ph.diff(s_) ** 2 * sp.cos(ph) ** 2
GAUSS = _jets(E_sym.diff(s_) * W_sym.diff(s_) - 2 * W_sym * E_sym.diff(s_, 2))
ODE = (be ** 2 * A * sp.sin(P) ** 3 * sp.cos(P) - be ** 2 * V ** 2 * sp.sin(P) ** 4
       + al ** 2 * V ** 4 * sp.cos(P) ** 4)

gauss_fn = sp.lambdify((P, V, A, al, be), GAUSS)
ode_fn = sp.lambdify((P, V, A, al, be), ODE)

angles = st.floats(0.05, 1.5)
slopes = st.floats(-0.9, 0.9)
rates = st.floats(-40, 40)


def test_gauss_functional_factorizes():
    assert sp.simplify(sp.expand_trig(GAUSS + 4 * (be ** 2 - al ** 2) * ODE)) == 0


@given(angles, slopes, st.floats(-3, 3), rates, rates)
def test_residuals_match_symbolic(p, v, a, alpha, beta):
    scale = 1 + alpha ** 2 + beta ** 2
    assert ode_residual(p, v, a, alpha, beta) == pytest.approx(ode_fn(p, v, a, alpha, beta), abs=1e-10 * scale)
    g = gauss_flatness_residual(p, v, a, alpha, beta)
    assert g == pytest.approx(gauss_fn(p, v, a, alpha, beta), abs=1e-9 * scale ** 2)
    assert g == pytest.approx(-4 * (beta ** 2 - alpha ** 2) * ode_residual(p, v, a, alpha, beta),
                              abs=1e-9 * scale ** 2)


def test_angle_is_first_integral():
    cn = (be - al) * ph.diff(s_) * sp.sin(ph) * sp.cos(ph) / sp.sqrt(W_sym)
    rhs = sp.solve(ODE, A)[0]
    d = _jets(cn.diff(s_)).subs(A, rhs)
    for vals in [(0.7, 0.3, 5.0, 35.0), (1.2, -0.6, 2.0, -7.0), (0.2, 0.8, 11.0, 3.0)]:
        assert abs(float(d.subs(dict(zip((P, V, al, be), vals))))) < 1e-12


@given(angles, slopes, rates, st.floats(1, 40))
def test_rhs_solves_equation(p, v, alpha, beta):
    a = ode_rhs(p, v, alpha, beta)
    assert abs(ode_residual(p, v, a, alpha, beta)) < 1e-9 * (1 + beta ** 2 + alpha ** 2 * v ** 4 + abs(a) * beta ** 2)


def test_determinant_matches_chart():
    sol = integrate(5.0, 35.0, np.pi / 4, 0.1, 0.5)
    p = helicoidal_patch(5.0, 35.0, sol)
    for s in (0.1, 0.25, 0.4):
        phi, dphi = sol.evaluate(s)[:2]
        assert forms_at(p, 0.3, s).det_first == pytest.approx(first_form_det(phi, dphi, 5.0, 35.0), rel=1e-10)


def test_constant_solution():
    sol = integrate(5.0, 35.0, np.pi / 4, 0.0, 1.0)
    assert np.all(sol.phi == np.pi / 4) and np.all(sol.dphi == 0)
    assert not sol.truncated
    assert sol.arc_length_residual() < 1e-12


def test_angle_constant_along_solution():
    sol = integrate(5.0, 35.0, np.pi / 4, 0.1, 1.0)
    assert np.std(cos_nu(sol.phi, sol.dphi, 5.0, 35.0)) < 1e-9
    assert sol.arc_length_residual() < 1e-6


def test_truncation_near_equator():
    sol = integrate(5.0, 35.0, 0.1, -0.5, 5.0)
    assert sol.truncated
    assert sol.s[-1] < 5.0
    assert sol.phi.min() >= 1e-3


def test_initial_data_checks():
    with pytest.raises(SingularInitialData):
        integrate(5.0, 35.0, 0.0, 0.1, 1.0)
    with pytest.raises(SingularInitialData):
        integrate(5.0, 35.0, np.pi / 2, 0.1, 1.0)
    with pytest.raises(SingularInitialData):
        integrate(5.0, 35.0, 0.7, 1.0, 1.0)
    with pytest.raises(SingularInitialData):
        integrate(5.0, 0.0, 0.7, 0.1, 1.0)


def test_stiffness_abort():
    with pytest.raises(StiffnessAbort):
        integrate(5.0, 35.0, np.pi / 4, 0.5, 1.0, h=0.1, local_tol=1e-30)


def test_convergence_order():
    order, e1, e2 = convergence_order(5.0, 35.0, np.pi / 4, 0.1, 0.5, 0.05)
    assert order >= 3.8
    assert e2 < e1


def test_csv_round_trip(tmp_path):
    sol = integrate(5.0, 35.0, np.pi / 4, 0.1, 0.2)
    path = tmp_path / "p.csv"
    sol.to_csv(path)
    assert path.read_text().splitlines()[0] == "s,phi,dphi,theta"
    back = ProfileSolution.from_csv(path, 5.0, 35.0)
    for name in ("s", "phi", "dphi", "theta"):
        assert np.array_equal(getattr(back, name), getattr(sol, name))


def test_evaluate_off_grid():
    sol = integrate(5.0, 35.0, np.pi / 4, 0.1, 0.5, h=1e-3)
    fine = integrate(5.0, 35.0, np.pi / 4, 0.1, 0.5, h=1e-4)
    for s in (0.1234, 0.3337):
        k = int(round(s / 1e-4))
        assert sol.evaluate(s)[0] == pytest.approx(fine.phi[k], abs=1e-10)
        assert sol.evaluate(s)[3] == pytest.approx(fine.theta[k], abs=1e-8)
    with pytest.raises(DomainError):
        sol.evaluate(0.6)
