"""Hot numeric loops.

Every kernel exists twice: a pure numpy/python version (``*_numpy``) and a
numba-compiled one (``*_numba``). The unsuffixed names point at whichever
backend ``s3flat._backend`` selected. The scalar loop kernels are written in
the subset of python that numba accepts, so the numpy path for them is the
same source run by the interpreter.
"""
import math

import numpy as np

from ._backend import USE_NUMBA, compile_kernel

STATUS_COMPLETE = 0
STATUS_TRUNCATED = 1
STATUS_STIFF = 2


def _flat_rhs(phi, dphi, a2, b2):
    s = math.sin(phi)
    c = math.cos(phi)
    return (b2 * dphi * dphi * s ** 4 - a2 * dphi ** 4 * c ** 4) / (b2 * s ** 3 * c)


def _make_rk4(rhs):
    def rk4_step(phi, dphi, h, a2, b2):
        k1p = dphi
        k1v = rhs(phi, dphi, a2, b2)
        k2p = dphi + 0.5 * h * k1v
        k2v = rhs(phi + 0.5 * h * k1p, dphi + 0.5 * h * k1v, a2, b2)
        k3p = dphi + 0.5 * h * k2v
        k3v = rhs(phi + 0.5 * h * k2p, dphi + 0.5 * h * k2v, a2, b2)
        k4p = dphi + h * k3v
        k4v = rhs(phi + h * k3p, dphi + h * k3v, a2, b2)
        return (phi + h * (k1p + 2.0 * k2p + 2.0 * k3p + k4p) / 6.0,
                dphi + h * (k1v + 2.0 * k2v + 2.0 * k3v + k4v) / 6.0)
    return rk4_step


def _make_advance(rk4_step):
    def advance(phi, dphi, h, nsub, a2, b2):
        hs = h / nsub
        for _ in range(nsub):
            phi, dphi = rk4_step(phi, dphi, hs, a2, b2)
        return phi, dphi
    return advance


def _make_integrator(advance):
    def integrate(a2, b2, phi0, dphi0, h, n_steps, delta, local_tol, max_halvings):
        phi = np.empty(n_steps + 1)
        dphi = np.empty(n_steps + 1)
        phi[0] = phi0
        dphi[0] = dphi0
        count = 1
        status = STATUS_COMPLETE
        upper = 0.5 * math.pi - delta
        for k in range(n_steps):
            p, v = phi[k], dphi[k]
            nsub = 1
            p1, v1 = advance(p, v, h, nsub, a2, b2)
            p2, v2 = advance(p, v, h, 2 * nsub, a2, b2)
            err = max(abs(p2 - p1), abs(v2 - v1)) / 15.0
            halvings = 0
            while err > local_tol:
                if halvings == max_halvings:
                    status = STATUS_STIFF
                    break
                nsub *= 2
                halvings += 1
                p1, v1 = p2, v2
                p2, v2 = advance(p, v, h, 2 * nsub, a2, b2)
                err = max(abs(p2 - p1), abs(v2 - v1)) / 15.0
            if status == STATUS_STIFF:
                break
            if not (delta <= p2 <= upper and abs(v2) < 1.0 - delta):
                status = STATUS_TRUNCATED
                break
            phi[k + 1] = p2
            dphi[k + 1] = v2
            count += 1
        return phi[:count], dphi[:count], status

    return integrate


def _hamilton_loop(P, Q):
    n = P.shape[0]
    out = np.empty((n, 4))
    for i in range(n):
        w0, x0, y0, z0 = P[i, 0], P[i, 1], P[i, 2], P[i, 3]
        w1, x1, y1, z1 = Q[i, 0], Q[i, 1], Q[i, 2], Q[i, 3]
        out[i, 0] = w0 * w1 - x0 * x1 - y0 * y1 - z0 * z1
        out[i, 1] = w0 * x1 + x0 * w1 + y0 * z1 - z0 * y1
        out[i, 2] = w0 * y1 - x0 * z1 + y0 * w1 + z0 * x1
        out[i, 3] = w0 * z1 + x0 * y1 - y0 * x1 + z0 * w1
    return out


def hamilton_many_numpy(P, Q):
    """Row-wise Hamilton product of two (n, 4) arrays, vectorised."""
    w0, x0, y0, z0 = P[:, 0], P[:, 1], P[:, 2], P[:, 3]
    w1, x1, y1, z1 = Q[:, 0], Q[:, 1], Q[:, 2], Q[:, 3]
    return np.stack([
        w0 * w1 - x0 * x1 - y0 * y1 - z0 * z1,
        w0 * x1 + x0 * w1 + y0 * z1 - z0 * y1,
        w0 * y1 - x0 * z1 + y0 * w1 + z0 * x1,
        w0 * z1 + x0 * y1 - y0 * x1 + z0 * w1,
    ], axis=1)


def _stereo_loop(Q, pole, basis):
    n = Q.shape[0]
    out = np.empty((n, 3))
    for i in range(n):
        d = 0.0
        for c in range(4):
            d += pole[c] * Q[i, c]
        denom = 1.0 - d
        for r in range(3):
            acc = 0.0
            for c in range(4):
                acc += basis[r, c] * (Q[i, c] - d * pole[c])
            out[i, r] = acc / denom
    return out


def stereographic_many_numpy(Q, pole, basis):
    """Project unit quaternions (n, 4) from ``pole`` into the (3, 4) ``basis``."""
    d = Q @ pole
    perp = Q - d[:, None] * pole[None, :]
    return (perp @ basis.T) / (1.0 - d)[:, None]


flat_rhs_numpy = _flat_rhs
rk4_step_numpy = _make_rk4(_flat_rhs)
integrate_profile_numpy = _make_integrator(_make_advance(rk4_step_numpy))

flat_rhs_numba = compile_kernel(_flat_rhs)
rk4_step_numba = compile_kernel(_make_rk4(flat_rhs_numba))
_advance_numba = compile_kernel(_make_advance(rk4_step_numba))
integrate_profile_numba = compile_kernel(_make_integrator(_advance_numba))
hamilton_many_numba = compile_kernel(_hamilton_loop)
stereographic_many_numba = compile_kernel(_stereo_loop)

if USE_NUMBA:
    flat_rhs = flat_rhs_numba
    rk4_step = rk4_step_numba
    integrate_profile = integrate_profile_numba
    hamilton_many = hamilton_many_numba
    stereographic_many = stereographic_many_numba
else:
    flat_rhs = flat_rhs_numpy
    rk4_step = rk4_step_numpy
    integrate_profile = integrate_profile_numpy
    hamilton_many = hamilton_many_numpy
    stereographic_many = stereographic_many_numpy
