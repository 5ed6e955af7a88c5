import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from s3flat.errors import NotTangent, PoleProximity
from s3flat.s3core import (ONE, QI, QJ, QK, HelicoidalMotion, berger_inner, cross4, hamilton,
                           hopf_frame, hopf_map, hopf_vector, inverse_stereographic, normalize,
                           quat_conj, quat_mul, quat_mul_many, stereographic, stereographic_many)

finite = st.floats(-10, 10, allow_nan=False)
vec4 = arrays(np.float64, 4, elements=finite).filter(lambda v: np.linalg.norm(v) > 1e-3)
unit4 = vec4.map(normalize)


def sympy_product(p, q):
    r = sympy.Quaternion(*map(sympy.Float, p)) * sympy.Quaternion(*map(sympy.Float, q))
    return np.array([float(r.a), float(r.b), float(r.c), float(r.d)])


@given(vec4, vec4)
def test_hamilton_matches_sympy(p, q):
    np.testing.assert_allclose(hamilton(p, q), sympy_product(p, q), atol=1e-10 * (1 + np.abs(p).max() * np.abs(q).max()))


def test_unit_relations():
    assert np.array_equal(hamilton(QI, QJ), QK)
    assert np.array_equal(hamilton(QJ, QK), QI)
    assert np.array_equal(hamilton(QI, QI), -ONE)


@given(unit4, unit4, unit4)
def test_associative(p, q, r):
    np.testing.assert_allclose(hamilton(hamilton(p, q), r), hamilton(p, hamilton(q, r)), atol=1e-12)


@given(vec4, vec4)
def test_norm_multiplicative(p, q):
    assert np.isclose(np.linalg.norm(hamilton(p, q)), np.linalg.norm(p) * np.linalg.norm(q), rtol=1e-12)


@given(unit4)
def test_conjugate_is_inverse(q):
    np.testing.assert_allclose(hamilton(q, quat_conj(q)), ONE, atol=1e-14)


@given(unit4, unit4)
def test_quat_mul_stays_on_sphere(p, q):
    assert abs(np.linalg.norm(quat_mul(p, q)) - 1) < 1e-15


def test_quat_mul_many_rows(rng):
    P = normalize(rng.standard_normal((50, 4)))
    Q = normalize(rng.standard_normal((50, 4)))
    np.testing.assert_allclose(quat_mul_many(P, Q), hamilton(P, Q), atol=1e-14)


def test_longdouble_kept():
    p = np.array([1, 2, 3, 4], dtype=np.longdouble)
    assert hamilton(p, p).dtype == np.longdouble


@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(-3, 3), st.floats(-3, 3))
def test_motion_group_law(alpha, beta, s, t):
    m = HelicoidalMotion(alpha, beta)
    np.testing.assert_allclose(m.matrix(s) @ m.matrix(t), m.matrix(s + t), atol=1e-12)
    np.testing.assert_allclose(m.matrix(t) @ m.matrix(t).T, np.eye(4), atol=1e-14)


def test_motion_generator():
    from scipy.linalg import expm
    m = HelicoidalMotion(5.0, 35.0)
    np.testing.assert_allclose(expm(0.3 * m.generator()), m.matrix(0.3), atol=1e-12)
    assert HelicoidalMotion(2.0, -2.0).is_clifford()
    assert not m.is_clifford()


@given(unit4)
def test_hopf_frame_orthonormal(q):
    frame = np.array([q, *hopf_frame(q)])
    np.testing.assert_allclose(frame @ frame.T, np.eye(4), atol=1e-14)
    np.testing.assert_allclose(hopf_vector(q), hamilton(QI, q), atol=1e-15)


@given(unit4, st.floats(-np.pi, np.pi))
def test_hopf_map_constant_on_fibres(q, t):
    moved = hamilton(np.array([np.cos(t), np.sin(t), 0, 0]), q)
    np.testing.assert_allclose(hopf_map(moved), hopf_map(q), atol=1e-13)
    assert abs(np.linalg.norm(hopf_map(q)) - 1) < 1e-13


def test_berger_examples():
    e1 = hopf_vector(ONE)
    assert berger_inner(2.0, ONE, e1, e1) == pytest.approx(4.0)
    assert berger_inner(1.0, ONE, QJ, QK) == 0.0
    with pytest.raises(NotTangent):
        berger_inner(2.0, ONE, ONE, QI)


@given(arrays(np.float64, (3, 4), elements=finite), arrays(np.float64, 4, elements=finite))
def test_cross4_is_determinant(m, d):
    expected = float(sympy.Matrix([*m.tolist(), d.tolist()]).det())
    scale = 1 + np.abs(m).max() ** 3 * np.abs(d).max()
    assert abs(cross4(*m) @ d - expected) < 1e-10 * scale


def test_stereographic_example():
    np.testing.assert_allclose(stereographic(QI), [1.0, 0.0, 0.0], atol=1e-15)
    np.testing.assert_allclose(stereographic(ONE), [0.0, 0.0, 0.0], atol=1e-15)
    with pytest.raises(PoleProximity):
        stereographic(-ONE)


@given(unit4, unit4)
def test_stereographic_roundtrip(q, pole):
    if 1 - q @ pole < 1e-3:
        return
    y = stereographic(q, pole)
    np.testing.assert_allclose(inverse_stereographic(y, pole), q, atol=1e-8 * (1 + y @ y))


def test_stereographic_many_matches(rng):
    Q = normalize(rng.standard_normal((200, 4)))
    pole = normalize(np.array([0.1, -0.9, 0.2, 0.3]))
    Q = Q[1 - Q @ pole > 1e-2]
    Y = stereographic_many(Q, pole)
    np.testing.assert_allclose(Y, [stereographic(q, pole) for q in Q], atol=1e-10)
    with pytest.raises(PoleProximity):
        stereographic_many(np.array([pole]), pole)


@given(unit4, st.floats(-np.pi, np.pi))
def test_hopf_map_constant_along_clifford_flow(q, t):
    np.testing.assert_allclose(hopf_map(HelicoidalMotion(1.0, 1.0).matrix(t) @ q), hopf_map(q), atol=1e-13)
    np.testing.assert_allclose(hopf_map(ONE), [1.0, 0.0, 0.0], atol=1e-15)
