"""Jets of surface patches in S^3 and the local geometry read off from
them, from normals and fundamental forms up to the angle function of an
asymptotic Tschebycheff patch.

Normal orientation: the unit normal N along a patch f(u, v) is oriented so
that det[N, f, f_u, f_v] > 0. A patch may also carry a smooth normal field
(``normal_fn``) agreeing with that orientation wherever the chart is regular;
it takes precedence, so the normal and the angle function continue through
the singular curves of asymptotic charts of flat fronts.
"""
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from . import fd
from .errors import DegenerateImmersion, DomainError, NotAsymptotic, S3FlatError
from .s3core import cross4, hopf_vector

ASYMPTOTIC_TOL = 1e-6
# EG - F^2 below this (relative to EG) counts as a singular point of the metric
SINGULAR_DET = 1e-8


@dataclass(frozen=True)
class Grid:
    umin: float
    umax: float
    vmin: float
    vmax: float
    m: int
    n: int

    def axes(self):
        return np.linspace(self.umin, self.umax, self.m), np.linspace(self.vmin, self.vmax, self.n)

    def mesh(self):
        us, vs = self.axes()
        return np.meshgrid(us, vs, indexing="ij")

    def shrunk(self, margin):
        return Grid(self.umin + margin, self.umax - margin, self.vmin + margin,
                    self.vmax - margin, self.m, self.n)

    @classmethod
    def square(cls, half_width=np.pi, m=21, n=None):
        return cls(-half_width, half_width, -half_width, half_width, m, n or m)


@dataclass(frozen=True)
class SurfacePatch:
    """An immersion (u, v) -> S^3.

    ``jet_fn(u, v)`` returns the stacked (f, f_u, f_v, f_uu, f_uv, f_vv) when a
    closed form is known; otherwise jets come from finite differences.
    ``normal_fn`` is an optional smooth unit normal field (see module notes).
    ``metric_jet_fn(u, v)`` optionally returns the stacked
    (f_u, f_v, f_uu, f_uv, f_vv, f_uuv, f_uvv), possibly in extended precision;
    with it the curvature of the induced metric needs no differencing.
    """

    func: Callable[[float, float], np.ndarray]
    jet_fn: Optional[Callable[[float, float], np.ndarray]] = None
    domain: tuple = (-np.inf, np.inf, -np.inf, np.inf)
    tag: str = "patch"
    params: dict = field(default_factory=dict)
    normal_fn: Optional[Callable[[float, float], np.ndarray]] = None
    metric_jet_fn: Optional[Callable[[float, float], np.ndarray]] = None

    def __call__(self, u, v):
        return self.func(u, v)

    def contains(self, u, v, margin=0.0):
        umin, umax, vmin, vmax = self.domain
        return umin + margin <= u <= umax - margin and vmin + margin <= v <= vmax - margin

    def composed(self, matrix, tag=None):
        """The patch Q f for a fixed orthogonal 4x4 matrix Q."""
        jet_fn = normal_fn = metric_jet_fn = None
        if self.jet_fn is not None:
            jet_fn = lambda u, v: self.jet_fn(u, v) @ matrix.T  # noqa: E731
        if self.metric_jet_fn is not None:
            metric_jet_fn = lambda u, v: self.metric_jet_fn(u, v) @ matrix.T  # noqa: E731
        if self.normal_fn is not None:
            sign = np.sign(np.linalg.det(matrix))
            normal_fn = lambda u, v: sign * (matrix @ self.normal_fn(u, v))  # noqa: E731
        return SurfacePatch(lambda u, v: matrix @ self.func(u, v), jet_fn, self.domain,
                            tag or self.tag, dict(self.params), normal_fn, metric_jet_fn)

    def reparametrized(self, su, sv, tag=None):
        """The patch (u, v) -> f(su * u, sv * v) for constant scale factors."""
        scale = np.array([1.0, su, sv, su * su, su * sv, sv * sv])[:, None]
        mscale = np.array([su, sv, su * su, su * sv, sv * sv, su * su * sv, su * sv * sv])[:, None]
        jet_fn = normal_fn = metric_jet_fn = None
        if self.jet_fn is not None:
            jet_fn = lambda u, v: self.jet_fn(su * u, sv * v) * scale  # noqa: E731
        if self.metric_jet_fn is not None:
            metric_jet_fn = lambda u, v: self.metric_jet_fn(su * u, sv * v) * mscale  # noqa: E731
        if self.normal_fn is not None:
            sign = np.sign(su * sv)
            normal_fn = lambda u, v: sign * self.normal_fn(su * u, sv * v)  # noqa: E731
        umin, umax, vmin, vmax = self.domain
        us = sorted((umin / su, umax / su))
        vs = sorted((vmin / sv, vmax / sv))
        return SurfacePatch(lambda u, v: self.func(su * u, sv * v), jet_fn,
                            (us[0], us[1], vs[0], vs[1]), tag or self.tag, dict(self.params),
                            normal_fn, metric_jet_fn)


@dataclass(frozen=True)
class JetSample:
    f: np.ndarray
    fu: np.ndarray
    fv: np.ndarray
    fuu: np.ndarray
    fuv: np.ndarray
    fvv: np.ndarray
    normal: np.ndarray


@dataclass(frozen=True)
class FormCoefficients:
    E: float
    F: float
    G: float
    e: float
    f: float
    g: float
    K_int: Optional[float] = None

    @property
    def det_first(self):
        return self.E * self.G - self.F ** 2

    @property
    def K_ext(self):
        return (self.e * self.g - self.f ** 2) / self.det_first

    @property
    def is_degenerate(self):
        return self.det_first < 1e-12

    def as_array(self):
        return np.array([self.E, self.F, self.G, self.e, self.f, self.g])


@dataclass(frozen=True)
class TschebycheffForms:
    """Form-level patch: I = du^2 + 2 cos(w) du dv + dv^2, II = 2 sin(w) du dv.

    Used where only the fundamental forms matter (no immersion is built).
    """

    omega: Callable[[float, float], float]
    tag: str = "tschebycheff"

    def forms(self, u, v):
        w = self.omega(u, v)
        return FormCoefficients(1.0, np.cos(w), 1.0, 0.0, np.sin(w), 0.0)


@dataclass(frozen=True)
class AngleFit:
    lambda1: float
    lambda2: float
    lambda3: float
    rms_residual: float

    @property
    def slopes(self):
        return self.lambda1, self.lambda2


def jet(p, u, v, h=fd.DEFAULT_STEP):
    """Order-2 jet and oriented unit normal of ``p`` at (u, v).

    A smooth normal field on the patch is used as is, also at singular points
    of the chart; otherwise the normal comes from the cross product and a
    degenerate chart raises.
    """
    if p.jet_fn is not None:
        f, fu, fv, fuu, fuv, fvv = p.jet_fn(u, v)
    else:
        if not p.contains(u, v, margin=2 * h):
            raise DomainError(f"({u}, {v}) is not interior to {p.domain} with margin {2 * h}")
        f, fu, fv, fuu, fuv, fvv = fd.surface_jet(p.func, u, v, h)
    if p.normal_fn is not None:
        try:
            return JetSample(f, fu, fv, fuu, fuv, fvv, np.asarray(p.normal_fn(u, v), dtype=float))
        except S3FlatError:
            pass
    n = cross4(f, fv, fu)
    size = np.linalg.norm(n)
    if size < 1e-10:
        raise DegenerateImmersion(f"|f ^ f_u ^ f_v| = {size:.2e} at ({u}, {v})")
    n = n / size
    return JetSample(f, fu, fv, fuu, fuv, fvv, n)


def cross_normal(p, u, v, h=fd.DEFAULT_STEP):
    """The normal from the ordered cross product alone, ignoring ``normal_fn``."""
    return jet(replace(p, normal_fn=None), u, v, h).normal


def fundamental_forms(j):
    """First and second fundamental forms from a jet.

    The N-component of the ambient Hessian equals the covariant one because N
    is orthogonal to the position vector.
    """
    n = j.normal
    return FormCoefficients(j.fu @ j.fu, j.fu @ j.fv, j.fv @ j.fv,
                            j.fuu @ n, j.fuv @ n, j.fvv @ n)


def forms_at(p, u, v, h=fd.DEFAULT_STEP):
    """Form coefficients of an immersed patch, or of a form-level patch
    (anything exposing ``forms(u, v)``)."""
    if hasattr(p, "forms"):
        return p.forms(u, v)
    return fundamental_forms(jet(p, u, v, h))


def _tangents(p, u, v, h):
    if p.jet_fn is not None:
        return p.jet_fn(u, v)[1:3]
    return fd.surface_jet(p.func, u, v, h)[1:3]


def first_form(p, u, v, h=fd.DEFAULT_STEP):
    if hasattr(p, "forms"):
        c = p.forms(u, v)
        return np.array([c.E, c.F, c.G])
    fu, fv = _tangents(p, u, v, h)
    return np.array([fu @ fu, fu @ fv, fv @ fv])


def brioschi(E, F, G, Eu, Ev, Fu, Fv, Gu, Gv, Evv, Fuv, Guu):
    """Gauss curvature from the first fundamental form and its derivatives."""
    W = E * G - F * F
    if W <= SINGULAR_DET * abs(E * G):
        return float("nan")
    num = (E * (Ev * Gv - 2 * Fu * Gv + Gu * Gu)
           + G * (Eu * Gu - 2 * Eu * Fv + Ev * Ev)
           + F * (Eu * Gv - Ev * Gu - 2 * Ev * Fv + 4 * Fu * Fv - 2 * Fu * Gu)
           - 2 * W * (Evv - 2 * Fuv + Guu))
    return num / (4 * W * W)


def gauss_curvature_from_metric(metric, u, v, h=fd.DEFAULT_STEP):
    """Intrinsic curvature of the metric (u, v) -> (E, F, G) by finite differences."""
    m, mu, mv, muu, muv, mvv = fd.surface_jet(metric, u, v, h)
    (E, F, G), (Eu, Fu, Gu), (Ev, Fv, Gv) = m, mu, mv
    return brioschi(E, F, G, Eu, Ev, Fu, Fv, Gu, Gv, mvv[0], muv[1], muu[2])


def exact_metric_curvature(p, u, v):
    """Brioschi's formula with metric derivatives from the closed-form jet.

    Near the singular curves of a front the formula divides by a nearly
    vanishing determinant, so the jet is usually supplied in extended precision.
    """
    fu, fv, fuu, fuv, fvv, fuuv, fuvv = p.metric_jet_fn(u, v)
    E, F, G = fu @ fu, fu @ fv, fv @ fv
    Eu, Ev = 2 * fuu @ fu, 2 * fuv @ fu
    Fu, Fv = fuu @ fv + fu @ fuv, fuv @ fv + fu @ fvv
    Gu, Gv = 2 * fuv @ fv, 2 * fvv @ fv
    Evv = 2 * (fuvv @ fu + fuv @ fuv)
    Fuv = fuuv @ fv + fuu @ fvv + fuv @ fuv + fu @ fuvv
    Guu = 2 * (fuuv @ fv + fuv @ fuv)
    return float(brioschi(E, F, G, Eu, Ev, Fu, Fv, Gu, Gv, Evv, Fuv, Guu))


def intrinsic_curvature(p, u, v, h=fd.DEFAULT_STEP):
    """Gauss curvature of the induced metric; nan at singular points, where
    EG - F^2 <= SINGULAR_DET * EG."""
    if getattr(p, "metric_jet_fn", None) is not None:
        return exact_metric_curvature(p, u, v)
    metric = lambda a, b: first_form(p, a, b, h)  # noqa: E731
    return gauss_curvature_from_metric(metric, u, v, h)


def hopf_angle(p, u, v, h=fd.DEFAULT_STEP):
    """<N, E1> along the patch: the cosine of the angle between the normal and
    the Hopf vector field."""
    j = jet(p, u, v, h)
    return float(j.normal @ hopf_vector(j.f))


def extract_angle(p, u, v, h=fd.DEFAULT_STEP, tol=ASYMPTOTIC_TOL):
    """Principal value of the angle function w = atan2(f, F).

    Only defined on asymptotic Tschebycheff patches (E = G = 1, e = g = 0).
    """
    c = forms_at(p, u, v, h)
    bad = max(abs(c.E - 1), abs(c.G - 1), abs(c.e), abs(c.g))
    if bad > tol:
        raise NotAsymptotic(f"not an asymptotic Tschebycheff chart at ({u}, {v}): "
                            f"E={c.E:.6g} G={c.G:.6g} e={c.e:.3g} g={c.g:.3g}")
    return float(np.arctan2(c.f, c.F))


def angle_grid(p, grid, h=fd.DEFAULT_STEP):
    """Angle function on a grid, lifted to a continuous branch.

    The seed grid[0, 0] keeps its principal value; the first row is unwrapped
    along v, then every column along u.
    """
    us, vs = grid.axes()
    w = np.array([[extract_angle(p, u, v, h) for v in vs] for u in us])
    w[0, :] = np.unwrap(w[0, :])
    return np.unwrap(w, axis=0)


def fit_plane(U, V, W):
    """Least-squares fit W ~ l1 U + l2 V + l3."""
    A = np.column_stack([np.ravel(U), np.ravel(V), np.ones(np.size(U))])
    coef, *_ = np.linalg.lstsq(A, np.ravel(W), rcond=None)
    rms = float(np.sqrt(np.mean((A @ coef - np.ravel(W)) ** 2)))
    return AngleFit(float(coef[0]), float(coef[1]), float(coef[2]), rms)


def fit_linear_angle(p, grid, h=fd.DEFAULT_STEP):
    U, V = grid.mesh()
    return fit_plane(U, V, angle_grid(p, grid, h))


def grid_values(fn, grid):
    """Evaluate fn(u, v) at every grid node; returns an (m, n, ...) array."""
    us, vs = grid.axes()
    return np.array([[fn(u, v) for v in vs] for u in us])
