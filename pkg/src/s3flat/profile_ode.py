"""Flatness equation for helicoidal profile curves.

A profile gamma(s) = (cos phi cos theta, cos phi sin theta, sin phi, 0) swept
by the helicoidal motion with rates (alpha, beta) gives a flat surface
exactly when

    beta^2 phi'' sin^3 phi cos phi - beta^2 phi'^2 sin^4 phi + alpha^2 phi'^4 cos^4 phi = 0.

The integrator solves this for phi'' with classical fixed-step RK4 (numba
kernel), keeping phi inside [delta, pi/2 - delta] and |phi'| < 1 - delta,
and recovers theta from the arc-length condition by Simpson quadrature.
"""
import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson

from . import kernels
from .curves import CurveS3, profile_jet, profile_point
from .errors import DomainError, SingularInitialData, StiffnessAbort

DEFAULT_DELTA = 1e-3
LOCAL_TOL = 1e-10
MAX_HALVINGS = 3


def ode_residual(phi, dphi, ddphi, alpha, beta):
    s, c = np.sin(phi), np.cos(phi)
    return (beta ** 2 * ddphi * s ** 3 * c - beta ** 2 * dphi ** 2 * s ** 4
            + alpha ** 2 * dphi ** 4 * c ** 4)


def ode_rhs(phi, dphi, alpha, beta):
    """phi'' solved from the flatness equation."""
    return kernels.flat_rhs(float(phi), float(dphi), float(alpha) ** 2, float(beta) ** 2)


def first_form_det(phi, dphi, alpha, beta):
    """EG - F^2 = beta^2 sin^2 phi + alpha^2 phi'^2 cos^2 phi of the helicoidal chart."""
    return beta ** 2 * np.sin(phi) ** 2 + alpha ** 2 * dphi ** 2 * np.cos(phi) ** 2


def gauss_flatness_residual(phi, dphi, ddphi, alpha, beta):
    """E_s (EG - F^2)_s - 2 (EG - F^2) E_ss for the helicoidal chart X(t, s).

    E = alpha^2 cos^2 phi + beta^2 sin^2 phi depends on s only, so this
    functional vanishes exactly when the chart is flat. It equals
    -4 (beta^2 - alpha^2) times ``ode_residual``.
    """
    k = beta ** 2 - alpha ** 2
    s2 = np.sin(2 * phi)
    c2 = np.cos(2 * phi)
    E_s = k * s2 * dphi
    E_ss = k * (2 * c2 * dphi ** 2 + s2 * ddphi)
    W = first_form_det(phi, dphi, alpha, beta)
    W_s = (beta ** 2 * s2 * dphi + 2 * alpha ** 2 * dphi * ddphi * np.cos(phi) ** 2
           - alpha ** 2 * dphi ** 3 * s2)
    return E_s * W_s - 2 * W * E_ss


def cos_nu(phi, dphi, alpha, beta):
    """Cosine of the angle between the normal and the Hopf field along the chart."""
    return ((beta - alpha) * dphi * np.sin(phi) * np.cos(phi)
            / np.sqrt(first_form_det(phi, dphi, alpha, beta)))


def theta_rate(phi, dphi, sign=1.0):
    return sign * np.sqrt(1.0 - dphi ** 2) / np.cos(phi)


def theta_accel(phi, dphi, ddphi, sign=1.0):
    root = np.sqrt(1.0 - dphi ** 2)
    c = np.cos(phi)
    return sign * (-dphi * ddphi / (root * c) + root * np.sin(phi) * dphi / c ** 2)


@dataclass(frozen=True)
class ProfileSolution:
    """Sampled solution of the flatness equation on a uniform arc-length grid."""

    alpha: float
    beta: float
    s: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray
    theta: np.ndarray
    step: float
    truncated: bool = False
    theta_sign: float = 1.0

    @property
    def s_range(self):
        return float(self.s[0]), float(self.s[-1])

    @property
    def ddphi(self):
        return np.array([ode_rhs(p, v, self.alpha, self.beta) for p, v in zip(self.phi, self.dphi)])

    def __len__(self):
        return len(self.s)

    def evaluate(self, s):
        """(phi, phi', phi'', theta, theta', theta'') at any s in range.

        Off-grid values come from one RK4 step from the nearest node and a
        three-point Simpson rule for theta.
        """
        s0, s1 = self.s_range
        if not (s0 - 1e-12 <= s <= s1 + 1e-12):
            raise DomainError(f"s={s} outside the integrated range [{s0}, {s1}]")
        k = int(round((s - s0) / self.step))
        k = min(max(k, 0), len(self.s) - 1)
        d = s - self.s[k]
        p, v, th = float(self.phi[k]), float(self.dphi[k]), float(self.theta[k])
        a2, b2 = self.alpha ** 2, self.beta ** 2
        if abs(d) > 1e-14:
            pm, vm = kernels.rk4_step(p, v, 0.5 * d, a2, b2)
            pe, ve = kernels.rk4_step(p, v, d, a2, b2)
            sg = self.theta_sign
            th += d / 6.0 * (theta_rate(p, v, sg) + 4 * theta_rate(pm, vm, sg)
                             + theta_rate(pe, ve, sg))
            p, v = pe, ve
        dd = ode_rhs(p, v, self.alpha, self.beta)
        return (p, v, dd, th, theta_rate(p, v, self.theta_sign),
                theta_accel(p, v, dd, self.theta_sign))

    def point(self, s):
        p, _, _, th, _, _ = self.evaluate(s)
        return profile_point(p, th)

    def curve(self):
        """The profile as a CurveS3 with a closed-form jet to order 2."""

        def jet_fn(s, order):
            return profile_jet(*self.evaluate(s))[: order + 1]

        return CurveS3(self.point, jet_fn, 2, "ode-profile",
                       {"alpha": self.alpha, "beta": self.beta, "s_range": self.s_range})

    def arc_length_residual(self):
        """max |phi'^2 + theta'^2 cos^2 phi - 1| with theta' from differencing theta."""
        dtheta = np.gradient(self.theta, self.step, edge_order=2)
        return float(np.max(np.abs(self.dphi ** 2 + dtheta ** 2 * np.cos(self.phi) ** 2 - 1)))

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["s", "phi", "dphi", "theta"])
            for row in zip(self.s, self.phi, self.dphi, self.theta):
                w.writerow([f"{x:.17g}" for x in row])

    @classmethod
    def from_csv(cls, path, alpha, beta, theta_sign=1.0):
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        s = data[:, 0]
        return cls(alpha, beta, s, data[:, 1], data[:, 2], data[:, 3],
                   float(s[1] - s[0]), False, theta_sign)


def integrate(alpha, beta, phi0, dphi0, s_max, h=1e-3, delta=DEFAULT_DELTA,
              local_tol=LOCAL_TOL, theta0=0.0, theta_sign=1.0):
    """Integrate the flatness equation on [0, s_max] with step h.

    Stops early (``truncated``) when the next step would leave the guard region.
    Each step is taken with two RK4 half-steps and compared against one full
    step; if the local error estimate stays above ``local_tol`` after three
    halvings, StiffnessAbort is raised. ``local_tol=None`` disables the check.
    """
    if beta == 0:
        raise SingularInitialData("beta must be non-zero")
    if not (math.sin(phi0) > delta and math.cos(phi0) > delta):
        raise SingularInitialData(f"phi0={phi0} is inside the singular band of width {delta}")
    if not abs(dphi0) < 1.0 - delta:
        raise SingularInitialData(f"|phi'0|={abs(dphi0)} must be below 1 - delta")
    n = int(round(s_max / h))
    tol = np.inf if local_tol is None else float(local_tol)
    phi, dphi, status = kernels.integrate_profile(
        float(alpha) ** 2, float(beta) ** 2, float(phi0), float(dphi0), float(h), n,
        float(delta), tol, MAX_HALVINGS)
    if status == kernels.STATUS_STIFF:
        raise StiffnessAbort(f"local error above {local_tol} after {MAX_HALVINGS} halvings "
                             f"near s={h * (len(phi) - 1):.6g}")
    s = h * np.arange(len(phi))
    rate = theta_rate(phi, dphi, theta_sign)
    if len(s) >= 3:
        theta = theta0 + cumulative_simpson(rate, dx=h, initial=0.0)
    else:
        theta = theta0 + np.concatenate([[0.0], np.cumsum(0.5 * h * (rate[1:] + rate[:-1]))])
    return ProfileSolution(float(alpha), float(beta), s, phi, dphi, theta, float(h),
                           status == kernels.STATUS_TRUNCATED, float(theta_sign))


def convergence_order(alpha, beta, phi0, dphi0, s_max, h):
    """Observed order of the RK4 scheme.

    Runs with steps h, h/2 and h/4 (local error control off); the errors of
    the first two against the third on their common nodes give
    log2(err(h) / err(h/2)). Returns (order, err_h, err_h2).
    """
    r1, r2, r4 = (integrate(alpha, beta, phi0, dphi0, s_max, h / k, local_tol=None)
                  for k in (1, 2, 4))
    m = min(len(r1) - 1, (len(r2) - 1) // 2, (len(r4) - 1) // 4)

    def states(run, stride):
        idx = np.arange(m + 1) * stride
        return np.column_stack([run.phi[idx], run.dphi[idx]])

    ref = states(r4, 4)
    e1 = float(np.max(np.abs(states(r1, 1) - ref)))
    e2 = float(np.max(np.abs(states(r2, 2) - ref)))
    return math.log2(e1 / e2), e1, e2
