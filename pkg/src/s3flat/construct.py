"""Surface constructions in S^3.

* products of two curves with torsions +1 and -1 (asymptotic Tschebycheff
  charts of flat surfaces),
* the explicit two-parameter family Y(u, v) built from base curves,
  together with its a = 1 member (a Hopf cylinder),
* helicoidal surfaces swept by a profile curve,
* constant angle surfaces F(u, v) = A(v) b(u) and the reconstruction of
  (a, b) from a flat helicoidal profile.

Charts of flat fronts degenerate along curves where sin(omega) = 0. The
patches built here carry a smooth normal field (the binormal of their
asymptotic coordinate curves), so the angle function stays continuous
across those curves.
"""
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Union

import numpy as np

from . import fd
from .curves import (SWAP34, CurveS3, base_curve, binormal, frenet, left_factor,
                     profile_curve, profile_jet, profile_point, right_factor, trig_jet)
from .errors import (ConstraintViolation, DegenerateDenominator, DomainError,
                     NonConstantAngle, PreconditionViolation)
from .forms import Grid, SurfacePatch, forms_at, hopf_angle
from .profile_ode import ProfileSolution, cos_nu, integrate
from .s3core import ONE, HelicoidalMotion, hamilton, hopf_vector

HALF_PI = 0.5 * np.pi
_JET_ORDERS = ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))
# (f_u, f_v, f_uu, f_uv, f_vv, f_uuv, f_uvv)
_METRIC_ORDERS = ((1, 0), (0, 1), (2, 0), (1, 1), (0, 2), (2, 1), (1, 2))


@dataclass(frozen=True)
class LinearMap:
    """v -> slope * v + offset."""

    slope: float
    offset: float = 0.0

    def __call__(self, v):
        return self.slope * v + self.offset


def _slope(fn, v):
    if isinstance(fn, LinearMap):
        return fn.slope
    return fd.derivative(fn, v)


def _trig_surface_jet(C, P, Q, L, u, v, orders=_JET_ORDERS):
    """Jet of coordinates sum_k C cos(P u + Q v + L pi/2), with (4, n) arrays and
    integer quarter turns L. Works in the precision of C."""
    arg = P * u + Q * v
    waves = np.stack([np.cos(arg), -np.sin(arg), -np.cos(arg), np.sin(arg)])
    out = []
    for i, j in orders:
        k = ((L + i + j) % 4)[None]
        out.append((C * P ** i * Q ** j * np.take_along_axis(waves, k, 0)[0]).sum(axis=1))
    return np.array(out)


def _gamma(r, t):
    return np.array([r * np.cos(t / r), r * np.sin(t / r),
                     np.cos(r * t), np.sin(r * t)]) / np.sqrt(1.0 + r * r)


def _y_terms(a, b, dtype=np.float64):
    a, b = dtype(a), dtype(b)
    one = dtype(1)
    scale = one / np.sqrt((1 + a * a) * (1 + b * b))
    C = scale * np.array([[a * b, one], [a * b, one], [b, a], [b, a]], dtype=dtype)
    P = np.array([[1 / a, a], [1 / a, a], [a, 1 / a], [a, 1 / a]], dtype=dtype)
    Q = np.array([[1 / b, b], [1 / b, b], [-1 / b, -b], [-1 / b, -b]], dtype=dtype)
    L = np.array([[0, 1], [-1, 0], [0, 1], [-1, 0]])
    return C, P, Q, L


def _y_patch(a, b, tag):
    """Y(u, v) = gamma_a(u) * T(gamma_b(v)) in closed form; needs a, b >= 1, not both 1."""
    terms = _y_terms(a, b)
    terms_ld = _y_terms(a, b, np.longdouble)

    def jet_fn(u, v):
        return _trig_surface_jet(*terms, u, v)

    def metric_jet_fn(u, v):
        return _trig_surface_jet(*terms_ld, np.longdouble(u), np.longdouble(v), _METRIC_ORDERS)

    def func(u, v):
        return _trig_surface_jet(*terms, u, v, _JET_ORDERS[:1])[0]

    if b > 1:
        # v-curves are left translates of T(gamma_b), so N is along their binormal
        tb = base_curve(b).transformed(matrix=SWAP34)

        def normal_fn(u, v):
            return -hamilton(_gamma(a, u), binormal(tb, v))
    elif a > 1:
        ga = base_curve(a)

        def normal_fn(u, v):
            return hamilton(binormal(ga, u), SWAP34 @ _gamma(b, v))
    else:
        raise DomainError("a = b = 1 gives a degenerate product")
    return SurfacePatch(func, jet_fn, tag=tag, params={"a": a, "b": b}, normal_fn=normal_fn,
                        metric_jet_fn=metric_jet_fn)


def check_radius(name, r):
    if not r > 1:
        raise DomainError(f"{name} must satisfy {name} > 1, got {name}={r}")


def theorem1_patch(a, b, include_factors=False):
    """The flat patch Y(u, v) = (y1, y2, y3, y4)/sqrt((1+a^2)(1+b^2)) with

        y1 = ab cos(u/a + v/b) - sin(au + bv)
        y2 = ab sin(u/a + v/b) + cos(au + bv)
        y3 = b cos(au - v/b) - a sin(u/a - bv)
        y4 = b sin(au - v/b) + a cos(u/a - bv)

    in asymptotic Tschebycheff coordinates. ``include_factors`` returns
    X = g_a Y g_b = c_a(u) c_b(v) instead.
    """
    check_radius("a", a)
    check_radius("b", b)
    patch = _y_patch(a, b, "theorem1")
    if not include_factors:
        return patch
    ga, gb = left_factor(a), right_factor(b)

    def wrap(x):
        return hamilton(ga, hamilton(x, gb))

    return SurfacePatch(lambda u, v: wrap(patch.func(u, v)),
                        lambda u, v: wrap(patch.jet_fn(u, v)),
                        tag="theorem1-x", params={"a": a, "b": b},
                        normal_fn=lambda u, v: wrap(patch.normal_fn(u, v)),
                        metric_jet_fn=lambda u, v: wrap(patch.metric_jet_fn(u, v)))


def expected_angle_slopes(a, b):
    """(omega_u, omega_v) of theorem1_patch(a, b) with the package's normal."""
    return (1 - a * a) / a, (1 - b * b) / b


def bianchi_spivak(ca, cb, check=True, samples=9, tol=1e-8, torsion_tol=1e-5):
    """X(u, v) = c_a(u) c_b(v) for unit-speed curves with torsions +1 and -1
    through the identity and with independent initial velocities."""
    if check:
        ts = np.linspace(-1.0, 1.0, samples)
        for name, c in (("c_a", ca), ("c_b", cb)):
            speed = max(abs(np.linalg.norm(c.jet(t, 1)[1]) - 1.0) for t in ts)
            if speed > tol:
                raise PreconditionViolation(f"{name} parametrized by arc length", f"max ||c'|-1| = {speed:.2e}")
            gap = float(np.max(np.abs(c(0.0) - ONE)))
            if gap > 1e-9:
                raise PreconditionViolation(f"{name}(0) = (1,0,0,0)", f"distance {gap:.2e}")
        for name, c, tau in (("c_a", ca, 1.0), ("c_b", cb, -1.0)):
            worst = max(abs(frenet(c, t).tau - tau) for t in ts)
            if worst > torsion_tol:
                raise PreconditionViolation(f"torsion of {name} equals {tau:+g}", f"max deviation {worst:.2e}")
        da, db = ca.jet(0.0, 1)[1], cb.jet(0.0, 1)[1]
        wedge = np.sqrt(max((da @ da) * (db @ db) - (da @ db) ** 2, 0.0))
        if wedge < 1e-9:
            raise PreconditionViolation("c_a'(0) ^ c_b'(0) != 0", f"|wedge| = {wedge:.2e}")

    def jet_fn(u, v):
        A, B = ca.jet(u, 2), cb.jet(v, 2)
        return np.array([hamilton(A[i], B[j]) for i, j in _JET_ORDERS])

    def metric_jet_fn(u, v):
        A, B = ca.jet(np.longdouble(u), 3), cb.jet(np.longdouble(v), 3)
        return np.array([hamilton(A[i], B[j]) for i, j in _METRIC_ORDERS])

    def normal_fn(u, v):
        return -hamilton(ca(u), binormal(cb, v))

    exact3 = ca.jet_fn is not None and cb.jet_fn is not None and min(ca.max_order, cb.max_order) >= 3
    return SurfacePatch(lambda u, v: hamilton(ca(u), cb(v)), jet_fn, tag="bianchi-spivak",
                        params={"ca": ca.params, "cb": cb.params}, normal_fn=normal_fn,
                        metric_jet_fn=metric_jet_fn if exact3 else None)


def helicoidal_params(a, b, beta):
    """(alpha, z, w) such that motion(alpha, beta)(t) Y(u, v) = Y(u + z(t), v + w(t))."""
    if a < 1 or b < 1:
        raise DomainError(f"need a, b >= 1, got a={a}, b={b}")
    den = a * a * b * b - 1.0
    if abs(den) < 1e-12:
        raise DegenerateDenominator("a^2 b^2 = 1")
    alpha = beta * (b * b - a * a) / den
    z = LinearMap(beta * a * (b * b - 1) / den)
    w = LinearMap(beta * b * (1 - a * a) / den)
    return alpha, z, w


def helicoidal_normal(alpha, beta, x, dx):
    """Normal of the helicoidal chart at t = 0 along the profile point x with velocity dx:

        (b x3 (x2' x3 - x2 x3'), b x3 (x1 x3' - x1' x3), b x3 (x1' x2 - x1 x2'), -a x3')

    with (a, b) = (alpha, beta); not normalized. Equals cross4(X, X_s, X_t).
    """
    x1, x2, x3 = x[0], x[1], x[2]
    d1, d2, d3 = dx[0], dx[1], dx[2]
    return np.array([beta * x3 * (d2 * x3 - x2 * d3),
                     beta * x3 * (x1 * d3 - d1 * x3),
                     beta * x3 * (d1 * x2 - x1 * d2),
                     -alpha * d3])


def _as_profile(profile, s_range):
    if isinstance(profile, ProfileSolution):
        return profile.curve(), profile.s_range
    if isinstance(profile, CurveS3):
        rng = s_range or profile.params.get("s_range", (-np.inf, np.inf))
        return profile, tuple(rng)
    phi, theta = profile
    rng = tuple(s_range or (0.0, 1.0))
    return profile_curve(phi, theta, rng), rng


def constant_phi_profile(phi0, theta_scale=1.0, s_range=(0.0, 1.0)):
    """gamma(s) with phi = phi0 and theta = theta_scale * s / cos(phi0).

    theta_scale = 1 is the arc-length parametrization; other values give a
    profile violating it (used as a negative control).
    """
    if not 0 < phi0 < HALF_PI:
        raise DomainError(f"phi0 must lie in (0, pi/2), got {phi0}")
    rate = theta_scale / np.cos(phi0)

    def jet_fn(s, order):
        return profile_jet(phi0, 0.0, 0.0, rate * s, rate, 0.0)[: order + 1]

    return CurveS3(lambda s: profile_point(phi0, rate * s), jet_fn, 2, "constant-phi",
                   {"phi0": phi0, "theta_scale": theta_scale, "s_range": tuple(s_range)})


def helicoidal_patch(alpha, beta, profile, s_range=None):
    """X(t, s) = motion(alpha, beta)(t) gamma(s) for a profile in the upper half 2-sphere.

    ``profile`` is a ProfileSolution, a CurveS3, or a pair of callables
    (phi, theta) of arc length.
    """
    curve, rng = _as_profile(profile, s_range)
    motion = HelicoidalMotion(alpha, beta)
    K = motion.generator()

    def func(t, s):
        return motion.matrix(t) @ curve(s)

    def jet_fn(t, s):
        R = motion.matrix(t)
        g0, g1, g2 = curve.jet(s, 2)
        Kg0 = K @ g0
        return np.array([g0, Kg0, g1, K @ Kg0, K @ g1, g2]) @ R.T

    def normal_fn(t, s):
        g0, g1 = curve.jet(s, 1)
        n = helicoidal_normal(alpha, beta, g0, g1)
        return motion.matrix(t) @ (n / np.linalg.norm(n))

    return SurfacePatch(func, jet_fn, (-np.inf, np.inf, rng[0], rng[1]), "helicoidal",
                        {"alpha": alpha, "beta": beta, "s_range": rng}, normal_fn)


def hopf_cylinder_normal(b):
    """N = (n1, n2, n3, n4)/sqrt(2(1 + b^2)) of the a = 1 patch with

        n1 = -b sin(u + v/b) + cos(u + bv)
        n2 =  b cos(u + v/b) + sin(u + bv)
        n3 =  b sin(u - v/b) - cos(u - bv)
        n4 = -b cos(u - v/b) - sin(u - bv)
    """
    scale = 1.0 / np.sqrt(2.0 * (1.0 + b * b))

    def normal(u, v):
        p, q = u + v / b, u + b * v
        r, s = u - v / b, u - b * v
        return scale * np.array([-b * np.sin(p) + np.cos(q), b * np.cos(p) + np.sin(q),
                                 b * np.sin(r) - np.cos(s), -b * np.cos(r) - np.sin(s)])

    return normal


def hopf_cylinder_patch(b):
    """The a = 1 member of the family: a Hopf cylinder with angle function
    omega = (1 - b^2)/b v - pi/2.

    Returns (patch, closed-form normal). The patch keeps its own normal field
    (from the binormal of the v-curves), so the two can be compared.
    """
    check_radius("b", b)
    patch = replace(_y_patch(1.0, b, "hopf-cylinder"), params={"b": b})
    return patch, hopf_cylinder_normal(b)


def realize_linear_angle(lambda1, lambda2):
    """A member of the family (up to sign flips of u and v) whose angle
    function has slopes (lambda1, lambda2)."""

    def radius(lam):
        return 0.5 * (abs(lam) + np.sqrt(lam * lam + 4.0))

    a, b = radius(lambda1), radius(lambda2)
    patch = _y_patch(a, b, "linear-angle")
    su = -1.0 if lambda2 > 0 else 1.0
    sv = -1.0 if lambda1 > 0 else 1.0
    return patch.reparametrized(su, sv)


# ----------------------------------------------------------------- constant angle surfaces

@dataclass(frozen=True)
class MOData:
    """Constants and angle functions of F(u, v) = A(xi) A~(v) b(u)."""

    nu: float
    eps: float
    B: float
    c1: float
    c2: float
    alpha1: float
    alpha2: float
    xi: Optional[float] = None
    xi1: Union[float, Callable, None] = None
    xi2: Optional[Callable] = None
    xi3: Optional[Callable] = None
    swapped: bool = False

    @property
    def a(self):
        return float(np.sqrt(self.c1 / self.c2))

    @property
    def complete(self):
        return None not in (self.xi, self.xi1, self.xi2, self.xi3)

    def relabeled(self):
        """Exchange the roles of the two circle factors of b(u)."""
        return replace(self, c1=self.c2, c2=self.c1, alpha1=self.alpha2, alpha2=self.alpha1,
                       swapped=not self.swapped)

    def with_angles(self, xi, xi1, xi2, xi3):
        return replace(self, xi=xi, xi1=xi1, xi2=xi2, xi3=xi3)

    def xi1_at(self, v):
        return self.xi1(v) if callable(self.xi1) else float(self.xi1)

    def _derivs(self, v):
        d1 = fd.derivative(self.xi1, v) if callable(self.xi1) else 0.0
        return d1, _slope(self.xi2, v), _slope(self.xi3, v)

    def xis_residual(self, v):
        """cos^2(xi1) xi2' - sin^2(xi1) xi3'."""
        x1 = self.xi1_at(v)
        _, d2, d3 = self._derivs(v)
        return np.cos(x1) ** 2 * d2 - np.sin(x1) ** 2 * d3

    def angle_relation_residual(self, v):
        """(xi1')^2 + (xi2')^2 cos^2(xi1) + (xi3')^2 sin^2(xi1) - sin^2(nu)."""
        x1 = self.xi1_at(v)
        d1, d2, d3 = self._derivs(v)
        return (d1 ** 2 + d2 ** 2 * np.cos(x1) ** 2 + d3 ** 2 * np.sin(x1) ** 2
                - np.sin(self.nu) ** 2)


def mo_constants(nu, eps=1.0):
    """B, c1, c2, alpha1, alpha2 for the constant angle nu in the Berger sphere of parameter eps."""
    if not eps > 0:
        raise DomainError(f"eps must be positive, got {eps}")
    cn = np.cos(nu)
    B = 1.0 + (eps * eps - 1.0) * cn * cn
    if not B > 0:
        raise DomainError(f"B = {B} must be positive")
    c1 = 0.5 - eps * cn / (2.0 * np.sqrt(B))
    c2 = 0.5 + eps * cn / (2.0 * np.sqrt(B))
    if not (0 < c1 < 1 and 0 < c2 < 1):
        raise DomainError(f"c1={c1}, c2={c2} must lie in (0, 1); cos(nu)={cn}")
    return MOData(float(nu), float(eps), float(B), float(c1), float(c2),
                  float(2 * B * c2 / eps), float(2 * B * c1 / eps))


def mo_curve(data):
    """The torus geodesic b(u) as a curve with closed-form jet."""
    r1, r2 = np.sqrt(data.c1), np.sqrt(data.c2)
    w1, w2 = data.alpha1, data.alpha2

    def jet_fn(u, order):
        return np.stack([trig_jet(r1, w1, 0, u, order), trig_jet(r1, w1, 1, u, order),
                         trig_jet(r2, w2, 0, u, order), trig_jet(r2, w2, 1, u, order)],
                        axis=1)

    return CurveS3(lambda u: jet_fn(u, 0)[0], jet_fn, 3, "torus-geodesic",
                   {"c1": data.c1, "c2": data.c2})


def rotation_xi(xi):
    s, c = np.sin(xi), np.cos(xi)
    return np.array([[1.0, 0, 0, 0], [0, 1.0, 0, 0], [0, 0, s, c], [0, 0, -c, s]])


def _atilde_parts(x1, x2, x3):
    c1, s1 = np.cos(x1), np.sin(x1)
    c2, s2 = np.cos(x2), np.sin(x2)
    c3, s3 = np.cos(x3), np.sin(x3)
    P = c1 * np.array([[c2, -s2, 0, 0], [s2, c2, 0, 0], [0, 0, c2, s2], [0, 0, -s2, c2]])
    R = s1 * np.array([[0, 0, c3, -s3], [0, 0, s3, c3], [-c3, -s3, 0, 0], [s3, -c3, 0, 0]])
    return P, R


def atilde(x1, x2, x3):
    """The orthogonal matrix A~ for angles (xi1, xi2, xi3)."""
    P, R = _atilde_parts(x1, x2, x3)
    return P + R


def _atilde_derivs(x1, x2, k2, x3, k3, order):
    """d^n/dv^n of A~ for constant xi1 and linear xi2, xi3 with slopes k2, k3."""
    out = []
    for n in range(order + 1):
        P, _ = _atilde_parts(x1, x2 + n * HALF_PI, x3)
        _, R = _atilde_parts(x1, x2, x3 + n * HALF_PI)
        out.append(k2 ** n * P + k3 ** n * R)
    return out


def mo_patch(data, arc_length=False, samples=25, tol=1e-9):
    """F(u, v) = A(xi) A~(v) b(u).

    The normal is oriented so that its angle with the Hopf field is nu. With
    ``arc_length`` both parameters are rescaled to unit speed (s = |b'| u and
    v_T = sin(nu) v), the coordinates in which the chart is asymptotic
    Tschebycheff.
    """
    if not data.complete:
        raise DomainError("MOData lacks xi, xi1, xi2 or xi3")
    worst = max(abs(data.xis_residual(v)) for v in np.linspace(-np.pi, np.pi, samples))
    if worst > tol:
        raise ConstraintViolation(f"cos^2(xi1) xi2' - sin^2(xi1) xi3' = {worst:.3e}")
    A0 = rotation_xi(data.xi)
    curve = mo_curve(data)

    def frame(v):
        return A0 @ atilde(data.xi1_at(v), data.xi2(v), data.xi3(v))

    def func(u, v):
        return frame(v) @ curve(u)

    closed = (not callable(data.xi1) and isinstance(data.xi2, LinearMap)
              and isinstance(data.xi3, LinearMap))
    jet_fn = None
    if closed:
        def jet_fn(u, v):
            M0, M1, M2 = (A0 @ m for m in _atilde_derivs(
                data.xi1, data.xi2(v), data.xi2.slope, data.xi3(v), data.xi3.slope, 2))
            b0, b1, b2 = curve.jet(u, 2)
            return np.array([M0 @ b0, M0 @ b1, M1 @ b0, M0 @ b2, M1 @ b1, M2 @ b0])

    def raw_normal(u, v):
        return frame(v) @ binormal(curve, u)

    cn = np.cos(data.nu)
    sigma = 1.0
    if abs(cn) > 1e-12:
        sigma = float(np.sign(cn * (raw_normal(0.0, 0.0) @ hopf_vector(func(0.0, 0.0)))))

    patch = SurfacePatch(func, jet_fn, tag="constant-angle",
                         params={"nu": data.nu, "c1": data.c1, "c2": data.c2},
                         normal_fn=lambda u, v: sigma * raw_normal(u, v))
    if not arc_length:
        return patch
    speed = np.sqrt(data.c1 * data.alpha1 ** 2 + data.c2 * data.alpha2 ** 2)
    return patch.reparametrized(1.0 / speed, 1.0 / np.sin(data.nu))


# ----------------------------------------------------------------- reconstruction

def _flow_to_slice(motion, q):
    """Move q along its orbit into the half 2-sphere x4 = 0, x3 > 0."""
    t = -np.arctan2(q[3], q[2]) / motion.beta
    return motion.matrix(t) @ q


def orbit_profile_jet(a, b, beta, sigma=0.0):
    """Profile data read off the orbits of Y(a, b) through the curve sigma -> Y(0, sigma).

    Returns (phi, phi', phi'', theta, theta') with derivatives in arc length
    of the profile curve traced in the half 2-sphere.
    """
    alpha, _, _ = helicoidal_params(a, b, beta)
    motion = HelicoidalMotion(alpha, beta)
    patch = _y_patch(a, b, "theorem1")

    def point(sg):
        return _flow_to_slice(motion, patch.func(0.0, sg))

    g0, g1, g2 = fd.curve_jet(point, sigma, order=2)
    speed = np.linalg.norm(g1)
    d_speed = (g1 @ g2) / speed
    phi = np.arcsin(g0[2])
    cphi = np.cos(phi)
    dphi_sig = g1[2] / cphi
    ddphi_sig = (g2[2] + g0[2] * dphi_sig ** 2) / cphi
    theta = np.arctan2(g0[1], g0[0])
    dtheta_sig = (g0[0] * g1[1] - g0[1] * g1[0]) / cphi ** 2
    dphi = dphi_sig / speed
    ddphi = (ddphi_sig - dphi_sig * d_speed / speed) / speed ** 2
    return float(phi), float(dphi), float(ddphi), float(theta), float(dtheta_sig / speed)


def orbit_profile(a, b, beta=35.0, s_max=1.0, h=1e-3):
    """Flat helicoidal profile of Y(a, b): initial data from its orbits, then the flatness ODE."""
    alpha, _, _ = helicoidal_params(a, b, beta)
    phi, dphi, _, theta, dtheta = orbit_profile_jet(a, b, beta)
    return integrate(alpha, beta, phi, dphi, s_max, h, theta0=theta,
                     theta_sign=float(np.sign(dtheta) or 1.0))


@dataclass(frozen=True)
class ReconstructionResult:
    a: float
    b: float
    nu: float
    patch: SurfacePatch
    residual_report: dict = field(default_factory=dict)
    data: Optional[MOData] = None
    nu_stddev: float = 0.0

    @property
    def swapped(self):
        return bool(self.data is not None and self.data.swapped)


def shift_rates(a, b, alpha, beta):
    """(s', v') of the orbit shifts from the linear system in (alpha, beta)."""
    s_rate = a * (alpha + beta) / (a * a + 1)
    v_rate = (alpha - a * a * beta) / (b * (a * a + 1))
    return s_rate, v_rate


def reconstruct(alpha, beta, profile, grid=None, nu_tol=1e-7, seed=0):
    """Recover (a, b, nu) and an asymptotic Tschebycheff chart of a flat helicoidal surface."""
    scale = max(1.0, abs(alpha), abs(beta))
    if abs(abs(alpha) - abs(beta)) <= 1e-12 * scale:
        raise DomainError("alpha = ±beta: the motion is a Clifford translation; need alpha != ±beta")
    cn = cos_nu(profile.phi, profile.dphi, alpha, beta)
    spread = float(np.std(cn))
    if spread > nu_tol:
        raise NonConstantAngle(f"std of cos(nu) along the profile is {spread:.3e} > {nu_tol:g}")
    nu = float(np.arccos(np.clip(np.mean(cn), -1.0, 1.0)))
    try:
        data = mo_constants(nu, 1.0)
    except DomainError as exc:
        raise DomainError(f"cos(nu) = ±1 leaves no torus geodesic: {exc}") from None
    if data.c1 < data.c2:
        data = data.relabeled()
    a = data.a
    if not a > 1 + 1e-12:
        raise DomainError(f"recovered a = {a}: a^2 = 1 is the excluded Hopf/Clifford case")
    den = alpha - a * a * beta
    if abs(den) < 1e-12 * scale:
        raise DegenerateDenominator("alpha = a^2 beta")
    inv_b2 = (a * a * alpha - beta) / den
    if not 0 < inv_b2 < 1 - 1e-12:
        raise DomainError(f"1/b^2 = {inv_b2} gives no b > 1 (b^2 = 1 is the excluded Hopf case)")
    b = float(1.0 / np.sqrt(inv_b2))
    sn = np.sin(nu)
    data = data.with_angles(HALF_PI, float(np.arcsin(1.0 / np.sqrt(1 + b * b))),
                            LinearMap(sn / b, -HALF_PI), LinearMap(b * sn, 0.0))
    patch = mo_patch(data, arc_length=True)
    report = _reconstruction_report(a, b, alpha, beta, data, patch, grid, seed)
    report["nu_stddev"] = spread
    return ReconstructionResult(a, b, nu, patch, report, data, spread)


def _reconstruction_report(a, b, alpha, beta, data, patch, grid, seed):
    grid = grid or Grid.square(np.pi, 9)
    reference = theorem1_patch(a, b)
    form_gap = thm1_gap = hopf_gap = 0.0
    for u, v in zip(*(x.ravel() for x in grid.mesh())):
        mine = forms_at(patch, u, v)
        ref = forms_at(reference, u, v)
        form_gap = max(form_gap, float(np.max(np.abs(mine.as_array() - ref.as_array()))))
        thm1_gap = max(thm1_gap, abs(mine.E - 1), abs(mine.G - 1), abs(mine.e), abs(mine.g))
        hopf_gap = max(hopf_gap, abs(hopf_angle(patch, u, v) - np.cos(data.nu)))

    vs = np.linspace(-np.pi, np.pi, 25)
    rng = np.random.default_rng(seed)
    ts = rng.uniform(-1.0, 1.0, 20)
    _, z, w = helicoidal_params(a, b, beta)
    s_rate, v_rate = shift_rates(a, b, alpha, beta)
    law_gap = max(abs(s_rate - z.slope), abs(v_rate - w.slope))

    # the four orbit-shift equations, in the unit-speed coordinates (s, v_T)
    sn = np.sin(data.nu)
    shift_gap = 0.0
    for t in ts:
        s, v = rng.uniform(-np.pi, np.pi, 2)
        st, vt = s + s_rate * t, v + v_rate * t
        x2, x3 = data.xi2, data.xi3
        eqs = (x2(vt / sn) + st / a - x2(v / sn) - s / a - alpha * t,
               x3(vt / sn) + a * st - x3(v / sn) - a * s - alpha * t,
               st / a - x3(vt / sn) - s / a + x3(v / sn) - beta * t,
               a * st - x2(vt / sn) - a * s + x2(v / sn) - beta * t)
        shift_gap = max(shift_gap, max(abs(e) for e in eqs))

    motion = HelicoidalMotion(alpha, beta)
    inv_gap = 0.0
    for t in ts:
        s, v = rng.uniform(-np.pi, np.pi, 2)
        moved = motion.matrix(t) @ patch(s, v)
        inv_gap = max(inv_gap, float(np.max(np.abs(moved - patch(s + s_rate * t, v + v_rate * t)))))

    return {
        "forms_vs_family": form_gap,
        "asymptotic_tschebycheff": thm1_gap,
        "hopf_angle_vs_cos_nu": hopf_gap,
        "angle_relation": max(abs(data.angle_relation_residual(v)) for v in vs),
        "xis_constraint": max(abs(data.xis_residual(v)) for v in vs),
        "shift_laws": law_gap,
        "shift_equations": shift_gap,
        "helicoidal_invariance": inv_gap,
    }


__all__ = [
    "LinearMap", "MOData", "ReconstructionResult", "atilde", "bianchi_spivak", "check_radius", "constant_phi_profile",
    "expected_angle_slopes", "helicoidal_normal", "helicoidal_params", "helicoidal_patch",
    "hopf_cylinder_normal", "hopf_cylinder_patch", "mo_constants", "mo_curve", "mo_patch",
    "orbit_profile", "orbit_profile_jet", "realize_linear_angle", "reconstruct",
    "rotation_xi", "shift_rates", "theorem1_patch",
]
