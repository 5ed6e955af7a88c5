"""Lamé system and Guichard condition for the translation/dilation invariant
solution families, and the curvature-line forms of the associated flat
surfaces in S^3.

Every family has the shape l_i = lam * scale_i * h_i(phi(xi)) with xi = n . x
for a direction n having one zero entry, and h_i one of 1, cos, sin, cosh,
sinh. Partials therefore follow from the chain rule:

    l_{i,j}  = lam scale_i h_i'(phi) phi'(xi) n_j
    l_{i,jk} = lam scale_i (h_i''(phi) phi'^2 + h_i'(phi) phi'') n_j n_k
"""
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from . import fd
from .errors import DivisionByZeroComponent, DomainError
from .forms import FormCoefficients

# (h, h', h'') for each coordinate profile
_PROFILES = {
    "one": (lambda p: 1.0, lambda p: 0.0, lambda p: 0.0),
    "cos": (np.cos, lambda p: -np.sin(p), lambda p: -np.cos(p)),
    "sin": (np.sin, np.cos, lambda p: -np.sin(p)),
    "cosh": (np.cosh, np.sinh, np.cosh),
    "sinh": (np.sinh, np.cosh, np.sinh),
}

_FAMILIES = {
    "a": ("one", "cosh", "sinh"),
    "b1": ("cos", "one", "sin"),
    "b2": ("cos", "one", "sin"),
    "c": ("sinh", "cosh", "one"),
}

# index of the variable each family does not depend on
_FREE_AXIS = {"a": 0, "b1": 1, "b2": 1, "c": 2}

ZERO_TOL = 1e-12


@dataclass(frozen=True)
class LameSolution:
    """One invariant solution (l1, l2, l3) of the Lamé system.

    ``direction`` holds (alpha1, alpha2, alpha3) with the entry of the
    constant coordinate equal to zero. For b2, ``phi`` is an arbitrary
    function of xi; its derivatives come from ``dphi``/``ddphi`` when given
    and from finite differences otherwise.
    """

    family: str
    lam: float
    direction: tuple
    b: float = 0.0
    xi0: float = 0.0
    phi: Optional[Callable] = None
    dphi: Optional[Callable] = None
    ddphi: Optional[Callable] = None
    scales: tuple = (1.0, 1.0, 1.0)

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise DomainError(f"unknown family {self.family!r}")
        n = np.asarray(self.direction, dtype=float)
        free = _FREE_AXIS[self.family]
        if n[free] != 0.0:
            raise DomainError(f"family {self.family} has no x{free + 1} dependence")
        if not np.any(n != 0.0):
            raise DomainError("direction coefficients must not all vanish")
        if self.family == "b1" and np.isclose(n[0] ** 2, n[2] ** 2):
            raise DomainError("family b1 needs alpha1^2 != alpha3^2")
        if self.family == "b2":
            if not np.isclose(n[0] ** 2, n[2] ** 2):
                raise DomainError("family b2 needs alpha1^2 = alpha3^2")
            if self.phi is None:
                raise DomainError("family b2 needs a function phi")

    def perturbed(self, index, factor):
        """The same solution with l_index (1-based) multiplied by ``factor``."""
        scales = list(self.scales)
        scales[index - 1] *= factor
        return replace(self, scales=tuple(scales))

    def _phi_jet(self, xi):
        if self.phi is None:
            return self.b * xi + self.xi0, self.b, 0.0
        if self.dphi is not None and self.ddphi is not None:
            return float(self.phi(xi)), float(self.dphi(xi)), float(self.ddphi(xi))
        p, d1, d2 = fd.curve_jet(self.phi, xi, order=2)
        return float(p), float(d1), float(d2)

    def evaluate(self, x):
        """(l, dl, ddl): values (3,), first partials (3, 3) with dl[i, j] = l_{i,j},
        and second partials (3, 3, 3) with ddl[i, j, k] = l_{i,jk}."""
        n = np.asarray(self.direction, dtype=float)
        p, d1, d2 = self._phi_jet(float(n @ np.asarray(x, dtype=float)))
        l = np.empty(3)
        dl = np.empty((3, 3))
        ddl = np.empty((3, 3, 3))
        for i, name in enumerate(_FAMILIES[self.family]):
            h, h1, h2 = _PROFILES[name]
            c = self.lam * self.scales[i]
            l[i] = c * h(p)
            dl[i] = c * h1(p) * d1 * n
            ddl[i] = c * (h2(p) * d1 * d1 + h1(p) * d2) * np.outer(n, n)
        return l, dl, ddl


def family_a(lam, b, xi0, alpha2, alpha3):
    return LameSolution("a", lam, (0.0, alpha2, alpha3), b, xi0)


def family_b1(lam, b, xi0, alpha1, alpha3):
    return LameSolution("b1", lam, (alpha1, 0.0, alpha3), b, xi0)


def family_b2(lam, phi, alpha1, alpha3, dphi=None, ddphi=None):
    return LameSolution("b2", lam, (alpha1, 0.0, alpha3), phi=phi, dphi=dphi, ddphi=ddphi)


def family_c(lam, b, xi0, alpha1, alpha2):
    return LameSolution("c", lam, (alpha1, alpha2, 0.0), b, xi0)


def lame_residuals(sol, x):
    """The six Lamé expressions at x.

    First three: for i = 1, 2, 3 with {j, k} the other indices,
        l_{i,jk} - l_{i,j} l_{j,k} / l_j - l_{i,k} l_{k,j} / l_k.
    Last three: for k = 1, 2, 3 with {i, j} the other indices,
        (l_{i,j}/l_j)_{,j} + (l_{j,i}/l_i)_{,i} + l_{i,k} l_{j,k} / l_k^2.
    """
    l, dl, ddl = sol.evaluate(x)
    small = np.abs(l) < ZERO_TOL * max(1.0, abs(sol.lam))
    if np.any(small):
        idx = int(np.argmax(small)) + 1
        raise DivisionByZeroComponent(f"l{idx} vanishes at x={tuple(np.round(x, 12))}")

    def quotient_derivative(i, j):
        # (l_{i,j} / l_j)_{,j}
        return ddl[i, j, j] / l[j] - dl[i, j] * dl[j, j] / l[j] ** 2

    out = []
    for i in range(3):
        j, k = (m for m in range(3) if m != i)
        out.append(ddl[i, j, k] - dl[i, j] * dl[j, k] / l[j] - dl[i, k] * dl[k, j] / l[k])
    for k in range(3):
        i, j = (m for m in range(3) if m != k)
        out.append(quotient_derivative(i, j) + quotient_derivative(j, i)
                   + dl[i, k] * dl[j, k] / l[k] ** 2)
    return np.array(out)


def guichard_residual(sol, x):
    l, _, _ = sol.evaluate(x)
    return float(l[0] ** 2 - l[1] ** 2 + l[2] ** 2)


def curvature_line_forms(xi0, alpha1, alpha3, x1, x3):
    """I = sin^2(psi) dx1^2 + cos^2(psi) dx3^2, II = sin(psi) cos(psi) (dx1^2 - dx3^2)
    with psi = alpha1 x1 + alpha3 x3 + xi0."""
    psi = alpha1 * x1 + alpha3 * x3 + xi0
    s, c = np.sin(psi), np.cos(psi)
    return FormCoefficients(s * s, 0.0, c * c, s * c, 0.0, -s * c)


def asymptotic_from_curvature_line(alpha1, alpha3, xi0):
    """Slopes and offset of omega = lambda1 u + lambda2 v + lambda3 after x1 = u + v, x3 = u - v."""
    return -2.0 * (alpha1 + alpha3), -2.0 * (alpha1 - alpha3), np.pi - 2.0 * xi0


@dataclass(frozen=True)
class PulledBackForms:
    """Form-level patch: curvature-line forms pulled back by x1 = u + v, x3 = u - v."""

    alpha1: float
    alpha3: float
    xi0: float
    tag: str = "curvature-lines"

    def forms(self, u, v):
        c = curvature_line_forms(self.xi0, self.alpha1, self.alpha3, u + v, u - v)
        J = np.array([[1.0, 1.0], [1.0, -1.0]])
        first = J.T @ np.array([[c.E, c.F], [c.F, c.G]]) @ J
        second = J.T @ np.array([[c.e, c.f], [c.f, c.g]]) @ J
        return FormCoefficients(first[0, 0], first[0, 1], first[1, 1],
                                second[0, 0], second[0, 1], second[1, 1])


def transformed_forms(alpha1, alpha3, xi0):
    return PulledBackForms(alpha1, alpha3, xi0)


def max_residuals(sol, points):
    """(max |Lamé residual|, max |Guichard residual|) over the points."""
    lame = max(float(np.max(np.abs(lame_residuals(sol, x)))) for x in points)
    guich = max(abs(guichard_residual(sol, x)) for x in points)
    return lame, guich

