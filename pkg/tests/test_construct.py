import math
from types import SimpleNamespace

import numpy as np
import pytest

from s3flat.construct import (LinearMap, bianchi_spivak, check_radius, helicoidal_params,
                              mo_constants, mo_curve, mo_patch, orbit_profile, realize_linear_angle,
                              reconstruct, shift_rates, theorem1_patch)
from s3flat.curves import CurveS3, base_curve, curve_ca, curve_cb
from s3flat.errors import (ConstraintViolation, DegenerateDenominator, DomainError, NonConstantAngle,
                           PreconditionViolation)
from s3flat.forms import Grid, fit_linear_angle, forms_at, grid_values, hopf_angle
from s3flat.profile_ode import integrate
from s3flat.s3core import ONE, normalize


def test_patch_at_origin():
    np.testing.assert_allclose(theorem1_patch(2.0, 3.0)(0.0, 0.0),
                               np.array([6.0, 1.0, 3.0, 2.0]) / np.sqrt(50.0), atol=1e-15)


@pytest.mark.parametrize("bad", [1.0, 0.5, -2.0])
def test_radius_domain(bad):
    with pytest.raises(DomainError, match="a must satisfy a > 1"):
        theorem1_patch(bad, 3.0)
    with pytest.raises(DomainError):
        check_radius("b", bad)


@pytest.mark.parametrize("a,b", [(2.0, 3.0), (math.sqrt(3), math.sqrt(2))])
def test_product_of_curves_equals_factored_patch(a, b):
    bs = bianchi_spivak(curve_ca(a), curve_cb(b))
    x = theorem1_patch(a, b, include_factors=True)
    for u, v in [(0.0, 0.0), (0.5, -1.2), (2.0, 3.0)]:
        np.testing.assert_allclose(bs(u, v), x(u, v), atol=1e-14)
        np.testing.assert_allclose(bs.jet_fn(u, v), x.jet_fn(u, v), atol=1e-13)
        np.testing.assert_allclose(forms_at(bs, u, v).as_array(), forms_at(x, u, v).as_array(), atol=1e-12)


def test_product_preconditions():
    ca, cb = curve_ca(2.0), curve_cb(3.0)
    with pytest.raises(PreconditionViolation, match="identity|\\(1,0,0,0\\)"):
        bianchi_spivak(ca.transformed(left=normalize(np.array([1.0, 0.2, 0.0, 0.0]))), cb)
    with pytest.raises(PreconditionViolation, match="torsion"):
        bianchi_spivak(cb, cb)
    fast = CurveS3(lambda t: ca(2 * t))
    with pytest.raises(PreconditionViolation, match="arc length"):
        bianchi_spivak(fast, cb)
    # unchecked construction still evaluates
    assert np.allclose(bianchi_spivak(fast, cb, check=False)(0.0, 0.0), ONE)


def test_helicoidal_parameters():
    alpha, z, w = helicoidal_params(2.0, 3.0, 35.0)
    assert alpha == pytest.approx(5.0)
    assert z(1.0) == pytest.approx(16.0)
    assert w(1.0) == pytest.approx(-9.0)
    assert shift_rates(2.0, 3.0, 5.0, 35.0) == pytest.approx((16.0, -9.0))
    with pytest.raises(DomainError):
        helicoidal_params(0.5, 3.0, 35.0)
    with pytest.raises(DegenerateDenominator):
        helicoidal_params(1.0, 1.0, 35.0)


@pytest.mark.parametrize("nu", [0.3, 1.0, np.pi / 2, 2.5])
def test_constant_angle_constants(nu):
    d = mo_constants(nu)
    assert d.c1 + d.c2 == pytest.approx(1.0)
    assert d.B == pytest.approx(1.0)
    speed = np.linalg.norm(mo_curve(d).jet(0.4, 1)[1])
    assert speed == pytest.approx(2 * np.sqrt(d.c1 * d.c2), rel=1e-12)


def test_constant_angle_examples():
    d = mo_constants(np.pi / 2)
    assert (d.c1, d.c2, d.alpha1, d.alpha2) == pytest.approx((0.5, 0.5, 1.0, 1.0))
    with pytest.raises(DomainError):
        mo_constants(0.0)
    with pytest.raises(DomainError):
        mo_constants(1.0, eps=0.0)


def test_constant_angle_patch_has_constant_hopf_angle():
    nu = 1.1
    d = mo_constants(nu).with_angles(np.pi / 2, 0.3, LinearMap(np.sin(nu) * np.sin(0.3) ** 2, 0.0),
                                     LinearMap(np.sin(nu) * np.cos(0.3) ** 2, 0.0))
    p = mo_patch(d)
    values = grid_values(lambda u, v: hopf_angle(p, u, v), Grid.square(2.0, 5))
    np.testing.assert_allclose(values, np.cos(nu), atol=1e-9)


def test_constraint_violation():
    d = mo_constants(1.0).with_angles(np.pi / 2, 0.3, LinearMap(1.0, 0.0), LinearMap(1.0, 0.0))
    with pytest.raises(ConstraintViolation):
        mo_patch(d)
    with pytest.raises(DomainError):
        mo_patch(mo_constants(1.0))


def test_reconstruction_round_trip():
    res = reconstruct(5.0, 35.0, orbit_profile(2.0, 3.0, 35.0))
    assert res.a == pytest.approx(2.0, abs=1e-6)
    assert res.b == pytest.approx(3.0, abs=1e-6)
    assert res.nu_stddev < 1e-7
    assert all(v < 1e-6 for k, v in res.residual_report.items() if k != "nu_stddev")


def test_reconstruction_of_other_radii():
    a, b, beta = math.sqrt(3), math.sqrt(2), 35.0
    alpha, _, _ = helicoidal_params(a, b, beta)
    res = reconstruct(alpha, beta, orbit_profile(a, b, beta, s_max=0.5))
    assert (res.a, res.b) == pytest.approx((a, b), abs=1e-6)


def test_reconstruction_rejects_non_solutions():
    fake = SimpleNamespace(phi=np.linspace(0.5, 1.0, 50), dphi=np.full(50, 0.1))
    with pytest.raises(NonConstantAngle):
        reconstruct(5.0, 35.0, fake)
    with pytest.raises(DomainError, match="alpha"):
        reconstruct(35.0, 35.0, fake)
    with pytest.raises(DomainError):
        reconstruct(-35.0, 35.0, fake)


def test_reconstruction_needs_a_genuine_solution():
    # a flat profile for one motion is not flat for another
    sol = integrate(5.0, 35.0, np.pi / 4, 0.5, 0.5)
    with pytest.raises(NonConstantAngle):
        reconstruct(20.0, 35.0, sol)


@pytest.mark.parametrize("l1,l2", [(-1.5, -8 / 3), (1.5, 2.0), (0.5, -0.7), (-0.2, 3.0)])
def test_realize_linear_angle(l1, l2):
    fit = fit_linear_angle(realize_linear_angle(l1, l2), Grid.square(1.0, 11))
    assert (fit.lambda1, fit.lambda2) == pytest.approx((l1, l2), abs=1e-8)
    assert fit.rms_residual < 1e-8


def test_base_curve_radius_sets_curvature():
    from s3flat.curves import frenet
    assert frenet(base_curve(3.0), 0.0).kappa == pytest.approx(8 / 3)
