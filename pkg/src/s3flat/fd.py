"""Central finite differences with one level of Richardson extrapolation.

Each derivative is estimated with the second-order central stencil at steps
h and 2h and combined as (4 D(h) - D(2h)) / 3, leaving an O(h^4) error.
Functions may return scalars or arrays.
"""
import numpy as np

DEFAULT_STEP = 1e-3


def _richardson(d_h, d_2h):
    return (4.0 * d_h - d_2h) / 3.0


def curve_jet(f, t, order=3, h=DEFAULT_STEP):
    """Stack of f(t), f'(t), ..., up to ``order`` <= 3."""
    if order > 3:
        raise ValueError("curve_jet supports order <= 3")
    cache = {}

    def at(k):
        if k not in cache:
            cache[k] = np.asarray(f(t + k * h), dtype=float)
        return cache[k]

    def d1(m):
        return (at(m) - at(-m)) / (2 * m * h)

    def d2(m):
        return (at(m) - 2 * at(0) + at(-m)) / (m * h) ** 2

    def d3(m):
        return (at(2 * m) - 2 * at(m) + 2 * at(-m) - at(-2 * m)) / (2 * (m * h) ** 3)

    out = [at(0)]
    for d in (d1, d2, d3)[:order]:
        out.append(_richardson(d(1), d(2)))
    return np.array(out)


def surface_jet(f, u, v, h=DEFAULT_STEP):
    """(f, f_u, f_v, f_uu, f_uv, f_vv) of a two-parameter function."""
    cache = {}

    def at(i, j):
        if (i, j) not in cache:
            cache[(i, j)] = np.asarray(f(u + i * h, v + j * h), dtype=float)
        return cache[(i, j)]

    def du(m):
        return (at(m, 0) - at(-m, 0)) / (2 * m * h)

    def dv(m):
        return (at(0, m) - at(0, -m)) / (2 * m * h)

    def duu(m):
        return (at(m, 0) - 2 * at(0, 0) + at(-m, 0)) / (m * h) ** 2

    def dvv(m):
        return (at(0, m) - 2 * at(0, 0) + at(0, -m)) / (m * h) ** 2

    def duv(m):
        return (at(m, m) - at(m, -m) - at(-m, m) + at(-m, -m)) / (4 * (m * h) ** 2)

    return (at(0, 0),) + tuple(_richardson(d(1), d(2)) for d in (du, dv, duu, duv, dvv))


def derivative(f, t, h=DEFAULT_STEP):
    """First derivative of a scalar function."""
    return float(curve_jet(f, t, order=1, h=h)[1])
