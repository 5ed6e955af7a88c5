"""Quaternion algebra on the unit 3-sphere.

Points of S^3 are plain float arrays of shape (4,) holding the quaternion
components in the order (w, x, y, z). The complex identification used for
the Hopf frame is (z1, z2) = (w + i x, y + i z).
"""
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import NotTangent, PoleProximity

ONE = np.array([1.0, 0.0, 0.0, 0.0])
QI = np.array([0.0, 1.0, 0.0, 0.0])
QJ = np.array([0.0, 0.0, 1.0, 0.0])
QK = np.array([0.0, 0.0, 0.0, 1.0])

ALGEBRAIC_TOL = 1e-12
PRECONDITION_TOL = 1e-9
POLE_TOL = 1e-8


def hamilton(p, q):
    """Hamilton product without renormalisation; broadcasts over leading axes
    and keeps extended precision inputs."""
    dtype = np.result_type(p, q, np.float64)
    p = np.asarray(p, dtype=dtype)
    q = np.asarray(q, dtype=dtype)
    w0, x0, y0, z0 = np.moveaxis(p, -1, 0)
    w1, x1, y1, z1 = np.moveaxis(q, -1, 0)
    return np.stack([
        w0 * w1 - x0 * x1 - y0 * y1 - z0 * z1,
        w0 * x1 + x0 * w1 + y0 * z1 - z0 * y1,
        w0 * y1 - x0 * z1 + y0 * w1 + z0 * x1,
        w0 * z1 + x0 * y1 - y0 * x1 + z0 * w1,
    ], axis=-1)


def normalize(q):
    q = np.asarray(q, dtype=float)
    return q / np.linalg.norm(q, axis=-1, keepdims=True)


def quat_mul(p, q):
    """Product of two unit quaternions, renormalised to suppress drift."""
    return normalize(hamilton(p, q))


def quat_mul_many(P, Q):
    """Row-wise unit-quaternion products of two (n, 4) arrays."""
    P = np.ascontiguousarray(P, dtype=float)
    Q = np.ascontiguousarray(Q, dtype=float)
    return normalize(kernels.hamilton_many(P, Q))


def quat_conj(q):
    q = np.asarray(q, dtype=float)
    return q * np.array([1.0, -1.0, -1.0, -1.0])


def random_unit(rng, n=None):
    """Uniform random points of S^3 (Gaussian normalisation)."""
    shape = (4,) if n is None else (n, 4)
    return normalize(rng.standard_normal(shape))


def _rotation_block(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True)
class HelicoidalMotion:
    """The one-parameter group rotating coordinates (1,2) at rate ``alpha``
    (translation along the axis) and (3,4) at rate ``beta`` (rotation about it)."""

    alpha: float
    beta: float

    def matrix(self, t):
        m = np.zeros((4, 4))
        m[:2, :2] = _rotation_block(self.alpha * t)
        m[2:, 2:] = _rotation_block(self.beta * t)
        return m

    def generator(self):
        """Infinitesimal generator K with matrix(t) = exp(tK)."""
        k = np.zeros((4, 4))
        k[0, 1], k[1, 0] = -self.alpha, self.alpha
        k[2, 3], k[3, 2] = -self.beta, self.beta
        return k

    def is_clifford(self, tol=1e-12):
        return abs(abs(self.alpha) - abs(self.beta)) <= tol * max(1.0, abs(self.beta))


def motion_matrix(m, t):
    return m.matrix(t)


def hopf_vector(q):
    """E1(q) = i q, the unit Killing field tangent to the Hopf fibres."""
    q = np.asarray(q, dtype=float)
    w, x, y, z = np.moveaxis(q, -1, 0)
    return np.stack([-x, w, -z, y], axis=-1)


def hopf_frame(q):
    """Orthonormal frame (E1, E2, E3) of T_q S^3; E1 vertical, E2 and E3 horizontal."""
    q = np.asarray(q, dtype=float)
    w, x, y, z = np.moveaxis(q, -1, 0)
    e1 = np.stack([-x, w, -z, y], axis=-1)
    e2 = np.stack([-z, -y, x, w], axis=-1)
    e3 = np.stack([-y, z, w, -x], axis=-1)
    return e1, e2, e3


def hopf_map(q):
    """Hopf projection conj(q) i q, returned as its (i, j, k) components.

    Constant along the integral curves of E1 (left multiplication by e^{it}).
    """
    r = hamilton(hamilton(quat_conj(q), QI), q)
    return r[..., 1:]


def berger_inner(eps, q, X, Y):
    """Berger-sphere metric <X,Y> + (eps^2 - 1) <X,E1><Y,E1> at q."""
    q, X, Y = (np.asarray(a, dtype=float) for a in (q, X, Y))
    if abs(X @ q) > PRECONDITION_TOL or abs(Y @ q) > PRECONDITION_TOL:
        raise NotTangent("berger_inner needs vectors tangent to S^3 at q")
    e1 = hopf_vector(q)
    return float(X @ Y + (eps * eps - 1.0) * (X @ e1) * (Y @ e1))


def cross4(a, b, c):
    """Generalised cross product n with <n, d> = det[a; b; c; d] for all d."""
    m = np.array([a, b, c], dtype=float)
    n = np.empty(4)
    # cofactor expansion along the last row
    for i in range(4):
        cols = [j for j in range(4) if j != i]
        n[i] = (-1) ** (3 + i) * np.linalg.det(m[:, cols])
    return n


def stereo_basis(pole):
    """Orthonormal basis (3, 4) of the complement of ``pole``.

    Gram-Schmidt on the standard basis vectors, skipping the one along the
    largest component of the pole.
    """
    pole = np.asarray(pole, dtype=float)
    skip = int(np.argmax(np.abs(pole)))
    basis = []
    for k in range(4):
        if k == skip:
            continue
        v = np.eye(4)[k] - (pole[k]) * pole
        for b in basis:
            v = v - (v @ b) * b
        basis.append(v / np.linalg.norm(v))
    return np.array(basis)


def stereographic(q, pole=-ONE):
    """Stereographic coordinates of q seen from ``pole``.

    The component of q orthogonal to the pole divided by 1 - <pole, q>,
    written in ``stereo_basis(pole)``.
    """
    q = np.asarray(q, dtype=float)
    pole = normalize(pole)
    d = q @ pole
    if 1.0 - d < POLE_TOL:
        raise PoleProximity(f"point within {1.0 - d:.3e} of the projection pole")
    return stereo_basis(pole) @ (q - d * pole) / (1.0 - d)


def stereographic_many(Q, pole=-ONE):
    """Vectorised ``stereographic`` for an (n, 4) array."""
    Q = np.ascontiguousarray(Q, dtype=float)
    pole = normalize(pole)
    gap = 1.0 - Q @ pole
    if np.any(gap < POLE_TOL):
        raise PoleProximity(f"min distance to pole {gap.min():.3e}")
    return kernels.stereographic_many(Q, np.ascontiguousarray(pole), stereo_basis(pole))


def inverse_stereographic(y, pole=-ONE):
    pole = normalize(pole)
    Y = stereo_basis(pole).T @ np.asarray(y, dtype=float)
    r2 = Y @ Y
    return (2.0 * Y + (r2 - 1.0) * pole) / (r2 + 1.0)
