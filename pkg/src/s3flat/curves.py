"""Curves in S^3: base curves of constant curvature, the two input curves of
the quaternionic product construction, profile curves in the upper half
2-sphere, and a Frenet apparatus that works off the curve's jet."""
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import fd
from .errors import ArcLengthViolation, DegenerateFrame, DomainError, HemisphereViolation
from .s3core import cross4, hamilton

# swaps the last two coordinates
SWAP34 = np.array([[1.0, 0, 0, 0], [0, 1.0, 0, 0], [0, 0, 0, 1.0], [0, 0, 1.0, 0]])


@dataclass(frozen=True)
class FrenetData:
    kappa: float
    tau: float


@dataclass(frozen=True)
class CurveS3:
    """A curve t -> S^3 with access to derivatives up to order 3.

    ``jet_fn(t, order)`` returns an array of shape (order + 1, 4) and is trusted
    up to ``max_order``; higher orders fall back to finite differences of the
    point evaluator.
    """

    func: Callable[[float], np.ndarray]
    jet_fn: Optional[Callable[[float, int], np.ndarray]] = None
    max_order: int = 0
    tag: str = "curve"
    params: dict = field(default_factory=dict)
    fd_step: float = fd.DEFAULT_STEP

    def __call__(self, t):
        return self.func(t)

    def jet(self, t, order=3):
        if self.jet_fn is not None and order <= self.max_order:
            return self.jet_fn(t, order)
        return fd.curve_jet(self.func, t, order=order, h=self.fd_step)

    def transformed(self, left=None, right=None, matrix=None, tag=None):
        """The curve t -> left * (matrix c(t)) * right; jets transform linearly."""

        def apply(x):
            if matrix is not None:
                x = x @ matrix.T
            if left is not None:
                x = hamilton(left, x)
            if right is not None:
                x = hamilton(x, right)
            return x

        jet_fn = None
        if self.jet_fn is not None:
            jet_fn = lambda t, order: apply(self.jet_fn(t, order))  # noqa: E731
        return CurveS3(lambda t: apply(self.func(t)), jet_fn, self.max_order,
                       tag or self.tag, dict(self.params), self.fd_step)


def quarter_cos(x, k):
    """cos(x + k pi/2) for integer k, without rounding pi/2."""
    k %= 4
    return (np.cos(x), -np.sin(x), -np.cos(x), np.sin(x))[k]


def trig_jet(amp, freq, lag, t, order):
    """Derivatives of amp * cos(freq t - lag pi/2) up to ``order`` (integer lag).

    The dtype of ``t`` is kept, so np.longdouble input gives an extended
    precision jet."""
    dtype = np.result_type(t, np.float64)
    amp, freq = dtype.type(amp), dtype.type(freq)
    return np.array([amp * freq ** k * quarter_cos(freq * t, k - lag) for k in range(order + 1)],
                    dtype=dtype)


def base_curve(r):
    """Unit-speed curve with constant curvature (r^2 - 1)/r and torsion of modulus 1."""
    if not r > 1:
        raise DomainError(f"base curve needs r > 1, got {r}")
    scale = 1.0 / np.sqrt(1.0 + r * r)

    def jet_fn(t, order):
        dtype = np.result_type(t, np.float64)
        rr = dtype.type(r)
        cols = [
            trig_jet(rr, 1 / rr, 0, t, order),
            trig_jet(rr, 1 / rr, 1, t, order),
            trig_jet(1.0, rr, 0, t, order),
            trig_jet(1.0, rr, 1, t, order),
        ]
        return np.stack(cols, axis=1) / np.sqrt(1 + rr * rr)

    def func(t):
        return scale * np.array([r * np.cos(t / r), r * np.sin(t / r), np.cos(r * t), np.sin(r * t)])

    return CurveS3(func, jet_fn, 3, "base", {"r": r})


def frenet_frame(c, t):
    """Unit (T, N, B) and (kappa, tau) of a unit-speed curve from its order-3 jet.

    The normal is the component of the covariant acceleration gamma'' + gamma
    orthogonal to the tangent; the binormal B completes (gamma, T, N, B) to a
    positively oriented frame of R^4.
    """
    g, g1, g2, g3 = c.jet(t, 3)
    acc = g2 + g
    acc = acc - (acc @ g) * g - (acc @ g1) * g1
    kappa = float(np.linalg.norm(acc))
    if kappa < 1e-8:
        raise DegenerateFrame(f"curvature {kappa:.2e} vanishes at t={t}")
    n = acc / kappa
    b = cross4(g, g1, n)
    b /= np.linalg.norm(b)
    tau = float((g3 + g1) @ b / kappa)
    return g1, n, b, FrenetData(kappa, tau)


def frenet(c, t):
    """Curvature and torsion of a unit-speed curve."""
    return frenet_frame(c, t)[3]


def binormal(c, t):
    return frenet_frame(c, t)[2]


def _factor(p, sign_index):
    q = np.zeros(4)
    q[0] = p
    q[sign_index] = -1.0
    return q / np.sqrt(1.0 + p * p)


def left_factor(a):
    """g_a = (a, 0, -1, 0)/sqrt(1+a^2)."""
    return _factor(a, 2)


def right_factor(b):
    """g_b = (b, 0, 0, -1)/sqrt(1+b^2)."""
    return _factor(b, 3)


def curve_ca(a):
    """g_a * gamma_a(u); starts at the identity with torsion +1."""
    return base_curve(a).transformed(left=left_factor(a), tag="ca")


def curve_cb(b):
    """T(gamma_b(v)) * g_b with T swapping coordinates 3 and 4; torsion -1."""
    return base_curve(b).transformed(matrix=SWAP34, right=right_factor(b), tag="cb")


def profile_point(phi, theta):
    return np.array([np.cos(phi) * np.cos(theta), np.cos(phi) * np.sin(theta), np.sin(phi), 0.0])


def profile_jet(phi, dphi, ddphi, theta, dtheta, ddtheta):
    """(gamma, gamma', gamma'') of the profile from the angle jets."""
    e = np.exp(1j * theta)
    z = np.cos(phi) * e
    w = -np.sin(phi) * dphi + 1j * np.cos(phi) * dtheta
    dw = (-np.cos(phi) * dphi ** 2 - np.sin(phi) * ddphi
          + 1j * (-np.sin(phi) * dphi * dtheta + np.cos(phi) * ddtheta))
    z1 = w * e
    z2 = (dw + 1j * dtheta * w) * e
    x3 = (np.sin(phi), np.cos(phi) * dphi, -np.sin(phi) * dphi ** 2 + np.cos(phi) * ddphi)
    return np.array([[zz.real, zz.imag, x, 0.0] for zz, x in zip((z, z1, z2), x3)])


def profile_curve(phi, theta, s_range=(0.0, 1.0), check=True, samples=50, tol=1e-6):
    """gamma(s) = (cos phi cos theta, cos phi sin theta, sin phi, 0).

    ``phi`` and ``theta`` are callables of s. With ``check`` the arc-length
    condition phi'^2 + theta'^2 cos^2 phi = 1 and sin phi > 0 are tested on
    ``samples`` points of ``s_range``.
    """
    if check:
        for s in np.linspace(*s_range, samples):
            p = float(phi(s))
            if np.sin(p) <= 0:
                raise HemisphereViolation(f"sin(phi) = {np.sin(p):.3e} <= 0 at s={s}")
            dp = fd.derivative(phi, s)
            dt = fd.derivative(theta, s)
            speed2 = dp * dp + dt * dt * np.cos(p) ** 2
            if abs(speed2 - 1.0) > tol:
                raise ArcLengthViolation(f"|gamma'|^2 = {speed2:.9f} at s={s}")
    return CurveS3(lambda s: profile_point(phi(s), theta(s)), tag="profile",
                   params={"s_range": tuple(s_range)})


def arc_length_residual(c, ts):
    """max | |c'(t)| - 1 | over the sample parameters."""
    return max(abs(np.linalg.norm(c.jet(t, 1)[1]) - 1.0) for t in ts)
