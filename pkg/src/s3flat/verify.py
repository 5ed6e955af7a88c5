"""Verification suites for the surface kinds exposed on the command line.

Each suite returns a VerificationReport; every check records its largest
absolute residual and tolerance, also when it passes.
"""
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .construct import (bianchi_spivak, constant_phi_profile, expected_angle_slopes,
                        helicoidal_params, helicoidal_patch, hopf_cylinder_patch,
                        theorem1_patch)
from .curves import curve_ca, curve_cb, left_factor, right_factor
from .forms import (SINGULAR_DET, Grid, cross_normal, fit_linear_angle, forms_at, hopf_angle,
                    intrinsic_curvature)
from .profile_ode import gauss_flatness_residual, integrate
from .s3core import HelicoidalMotion, hamilton, quat_conj

SCHEMA = 1
TWO_PI = 2.0 * np.pi

TOL = {
    "unit_sphere": 1e-12,
    "asymptotic_first_form": 1e-9,
    "asymptotic_second_form": 1e-8,
    "flatness_exact": 1e-6,
    "flatness_fd": 1e-5,
    "gauss_equation_exact": 1e-6,
    "gauss_equation_fd": 1e-5,
    "angle_slope": 1e-6,
    "angle_fit_rms": 1e-8,
    "angle_offset": 1e-8,
    "helicoidal_invariance": 1e-12,
    "hopf_angle_constancy": 1e-8,
    "hopf_angle_constancy_fd": 1e-6,
    "normal": 1e-9,
    "arc_length": 1e-6,
    "factorization": 1e-12,
    "profile_equation": 1e-6,
}


@dataclass(frozen=True)
class Check:
    name: str
    max_abs_residual: float
    tolerance: float
    detail: str = ""

    @property
    def passed(self):
        return bool(math.isfinite(self.max_abs_residual) and self.max_abs_residual <= self.tolerance)

    def to_dict(self):
        r = self.max_abs_residual
        return {"name": self.name,
                "max_abs_residual": r if math.isfinite(r) else str(r),
                "tolerance": self.tolerance, "pass": self.passed, "detail": self.detail}


@dataclass
class VerificationReport:
    kind: str
    inputs: dict
    checks: list = field(default_factory=list)
    version: str = __version__

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def check(self, name):
        return next(c for c in self.checks if c.name == name)

    @property
    def failed(self):
        return [c.name for c in self.checks if not c.passed]

    def to_dict(self, timestamp=False):
        out = {"schema": SCHEMA, "tool": "s3flat", "version": self.version, "kind": self.kind,
               "inputs": self.inputs, "pass": self.passed,
               "checks": [c.to_dict() for c in self.checks]}
        if timestamp:
            out["timestamp"] = datetime.now(timezone.utc).isoformat()
        return out

    def to_json(self, timestamp=False):
        return json.dumps(self.to_dict(timestamp), indent=2, sort_keys=True) + "\n"

    def write(self, path, timestamp=False):
        with open(path, "w") as fh:
            fh.write(self.to_json(timestamp))

    def lines(self):
        for c in self.checks:
            flag = "PASS" if c.passed else "FAIL"
            extra = f"  ({c.detail})" if c.detail else ""
            yield f"{flag} {c.name}: {c.max_abs_residual:.3e} <= {c.tolerance:g}{extra}"


def _points(grid):
    us, vs = grid.axes()
    return [(float(u), float(v)) for u in us for v in vs]


def _grid_echo(grid):
    return {"umin": grid.umin, "umax": grid.umax, "vmin": grid.vmin, "vmax": grid.vmax,
            "m": grid.m, "n": grid.n}


def _max(values):
    values = list(values)
    return float(max(values)) if values else float("inf")


def unit_sphere_check(p, pts):
    return Check("unit_sphere", _max(abs(np.linalg.norm(p(u, v)) - 1.0) for u, v in pts),
                 TOL["unit_sphere"])


def asymptotic_checks(p, pts):
    forms = [forms_at(p, u, v) for u, v in pts]
    first = _max(max(abs(c.E - 1), abs(c.G - 1)) for c in forms)
    second = _max(max(abs(c.e), abs(c.g)) for c in forms)
    return [Check("asymptotic_first_form", first, TOL["asymptotic_first_form"], "|E-1|, |G-1|"),
            Check("asymptotic_second_form", second, TOL["asymptotic_second_form"], "|e|, |g|")]


def curvature_checks(p, pts, tol_k, tol_gauss):
    """Flatness of the induced metric and the Gauss equation K_int = 1 + K_ext,
    both at the regular points of the chart."""
    ks, gaps, skipped = [], [], 0
    for u, v in pts:
        k = intrinsic_curvature(p, u, v)
        if not math.isfinite(k):
            skipped += 1
            continue
        c = forms_at(p, u, v)
        ks.append(abs(k))
        if c.det_first > SINGULAR_DET * c.E * c.G:
            gaps.append(abs(k - 1.0 - c.K_ext))
    note = f"{skipped} singular grid points skipped" if skipped else ""
    return [Check("flatness", _max(ks), tol_k, note),
            Check("gauss_equation", _max(gaps), tol_gauss, note)]


def angle_checks(p, grid, slopes, offset=None):
    fit = fit_linear_angle(p, grid)
    out = [Check("angle_slope_u", abs(fit.lambda1 - slopes[0]), TOL["angle_slope"],
                 f"fit {fit.lambda1:.12g}, expected {slopes[0]:.12g}"),
           Check("angle_slope_v", abs(fit.lambda2 - slopes[1]), TOL["angle_slope"],
                 f"fit {fit.lambda2:.12g}, expected {slopes[1]:.12g}"),
           Check("angle_fit_rms", fit.rms_residual, TOL["angle_fit_rms"])]
    if offset is not None:
        out.append(Check("angle_offset", angle_gap(fit.lambda3, offset), TOL["angle_offset"],
                         f"fit {fit.lambda3:.12g}, expected {offset:.12g} mod 2pi"))
    return out


def angle_gap(x, y):
    """Distance between two angles modulo 2 pi."""
    d = (x - y) % TWO_PI
    return float(min(d, TWO_PI - d))


def hopf_check(p, pts, tol):
    values = np.array([hopf_angle(p, u, v) for u, v in pts])
    return Check("hopf_angle_constancy", float(np.std(values)), tol,
                 f"mean {float(np.mean(values)):.12g}")


def invariance_check(p, alpha, beta, z, w, samples=100, seed=0, span=np.pi):
    """max |motion(t) p(u, v) - p(u + z(t), v + w(t))| over random (u, v, t)."""
    rng = np.random.default_rng(seed)
    motion = HelicoidalMotion(alpha, beta)
    worst = 0.0
    for u, v, t in rng.uniform(-span, span, (samples, 3)):
        gap = motion.matrix(t) @ p(u, v) - p(u + z(t), v + w(t))
        worst = max(worst, float(np.max(np.abs(gap))))
    return Check("helicoidal_invariance", worst, TOL["helicoidal_invariance"],
                 f"alpha={alpha:.12g}, beta={beta:.12g}")


def _sandwich_matrix(left, right):
    """Matrix of q -> left q right."""
    return np.column_stack([hamilton(left, hamilton(e, right)) for e in np.eye(4)])


def _family_suite(kind, p, a, b, grid, beta, seed, inputs):
    pts = _points(grid)
    rep = VerificationReport(kind, inputs)
    rep.checks.append(unit_sphere_check(p, pts))
    rep.checks += asymptotic_checks(p, pts)
    rep.checks += curvature_checks(p, pts, TOL["flatness_exact"], TOL["gauss_equation_exact"])
    rep.checks += angle_checks(p, grid, expected_angle_slopes(a, b))
    return rep, pts


def verify_theorem1(a, b, grid=None, beta=1.0, seed=0):
    grid = grid or Grid.square(np.pi, 21)
    p = theorem1_patch(a, b)
    rep, pts = _family_suite("theorem1", p, a, b, grid, beta, seed,
                             {"a": a, "b": b, "beta": beta, "grid": _grid_echo(grid)})
    alpha, z, w = helicoidal_params(a, b, beta)
    rep.checks.append(invariance_check(p, alpha, beta, z, w, seed=seed))
    rep.checks.append(hopf_check(p, pts, TOL["hopf_angle_constancy"]))
    return rep


def verify_bianchi_spivak(a, b, grid=None, beta=1.0, seed=0):
    """The product c_a(u) c_b(v). Hopf angle and helicoidal symmetry refer to
    the left-invariant Hopf field, so they are checked on g_a^-1 X g_b^-1."""
    grid = grid or Grid.square(np.pi, 21)
    x = bianchi_spivak(curve_ca(a), curve_cb(b))
    rep, pts = _family_suite("bianchi-spivak", x, a, b, grid, beta, seed,
                             {"a": a, "b": b, "beta": beta, "grid": _grid_echo(grid)})
    y = x.composed(_sandwich_matrix(quat_conj(left_factor(a)), quat_conj(right_factor(b))))
    ref = theorem1_patch(a, b)
    gap = _max(float(np.max(np.abs(y(u, v) - ref(u, v)))) for u, v in pts)
    rep.checks.append(Check("factorization", gap, TOL["factorization"],
                            "g_a^-1 X g_b^-1 against the closed form"))
    alpha, z, w = helicoidal_params(a, b, beta)
    rep.checks.append(invariance_check(y, alpha, beta, z, w, seed=seed))
    rep.checks.append(hopf_check(y, pts, TOL["hopf_angle_constancy"]))
    return rep


def verify_hopf_cylinder(b, grid=None, beta=1.0, seed=0):
    grid = grid or Grid.square(np.pi, 21)
    p, printed = hopf_cylinder_patch(b)
    pts = _points(grid)
    rep = VerificationReport("hopf-cylinder", {"b": b, "beta": beta, "grid": _grid_echo(grid)})
    rep.checks.append(unit_sphere_check(p, pts))
    rep.checks += asymptotic_checks(p, pts)
    rep.checks += curvature_checks(p, pts, TOL["flatness_exact"], TOL["gauss_equation_exact"])
    rep.checks += angle_checks(p, grid, expected_angle_slopes(1.0, b), offset=-0.5 * np.pi)
    diffs = np.array([p.normal_fn(u, v) - printed(u, v) for u, v in pts])
    sums = np.array([p.normal_fn(u, v) + printed(u, v) for u, v in pts])
    rep.checks.append(Check("closed_form_normal", float(min(np.abs(diffs).max(), np.abs(sums).max())),
                            TOL["normal"], "up to a global sign"))
    alpha, z, w = helicoidal_params(1.0, b, beta)
    rep.checks.append(invariance_check(p, alpha, beta, z, w, seed=seed))
    rep.checks.append(hopf_check(p, pts, TOL["hopf_angle_constancy"]))
    return rep


def _helicoidal_suite(kind, p, curve, alpha, beta, grid, seed, inputs):
    pts = _points(grid)
    rep = VerificationReport(kind, inputs)
    rep.checks.append(unit_sphere_check(p, pts))
    speed = _max(abs(np.linalg.norm(curve.jet(s, 1)[1]) ** 2 - 1.0) for s in grid.axes()[1])
    rep.checks.append(Check("profile_arc_length", speed, TOL["arc_length"], "|gamma'|^2 - 1"))
    rep.checks += curvature_checks(p, pts, TOL["flatness_fd"], TOL["gauss_equation_fd"])
    gap = _max(float(np.max(np.abs(p.normal_fn(u, v) - cross_normal(p, u, v)))) for u, v in pts)
    rep.checks.append(Check("normal_consistency", gap, TOL["normal"] * 100,
                            "closed-form normal against the cross product"))
    rep.checks.append(orbit_check(p, alpha, beta, grid, seed))
    rep.checks.append(hopf_check(p, pts, TOL["hopf_angle_constancy_fd"]))
    return rep


def orbit_check(p, alpha, beta, grid, seed=0, samples=100):
    """max |motion(tau) X(t, s) - X(t + tau, s)| with s drawn from the grid's s-range."""
    rng = np.random.default_rng(seed)
    motion = HelicoidalMotion(alpha, beta)
    worst = 0.0
    for _ in range(samples):
        t, tau = rng.uniform(-np.pi, np.pi, 2)
        s = rng.uniform(grid.vmin, grid.vmax)
        worst = max(worst, float(np.max(np.abs(motion.matrix(tau) @ p(t, s) - p(t + tau, s)))))
    return Check("helicoidal_invariance", worst, TOL["helicoidal_invariance"],
                 f"alpha={alpha:.12g}, beta={beta:.12g}")


def verify_helicoidal(alpha, beta, phi0=np.pi / 4, theta_scale=1.0, grid=None, seed=0):
    """Helicoidal surface of the profile phi = phi0 (a flat torus chart);
    theta_scale != 1 breaks the arc-length parametrization of the profile."""
    grid = grid or Grid.square(np.pi, 15)
    curve = constant_phi_profile(phi0, theta_scale, (grid.vmin, grid.vmax))
    p = helicoidal_patch(alpha, beta, curve, (grid.vmin, grid.vmax))
    inputs = {"alpha": alpha, "beta": beta, "phi0": phi0, "theta_scale": theta_scale,
              "grid": _grid_echo(grid)}
    return _helicoidal_suite("helicoidal", p, curve, alpha, beta, grid, seed, inputs)


def ode_grid(solution, grid=None, m=15, n=15, margin=5e-3):
    """Grid over t x s with s kept inside the integrated range."""
    s0, s1 = solution.s_range
    lo, hi = s0 + margin, s1 - margin
    if grid is None:
        return Grid(-np.pi, np.pi, lo, hi, m, n)
    return Grid(grid.umin, grid.umax, max(grid.vmin, lo), min(grid.vmax, hi), grid.m, grid.n)


def verify_ode(alpha, beta, phi0, dphi0, s_max=1.0, h=1e-3, grid=None, seed=0):
    sol = integrate(alpha, beta, phi0, dphi0, s_max, h)
    grid = ode_grid(sol, grid)
    p = helicoidal_patch(alpha, beta, sol)
    inputs = {"alpha": alpha, "beta": beta, "phi0": phi0, "dphi0": dphi0, "s_max": s_max,
              "h": h, "s_range": list(sol.s_range), "truncated": sol.truncated,
              "grid": _grid_echo(grid)}
    rep = _helicoidal_suite("ode", p, sol.curve(), alpha, beta, grid, seed, inputs)
    # differentiate the sampled phi' and feed it to the Gauss functional
    ddphi = np.gradient(sol.dphi, sol.step, edge_order=2)[2:-2]
    res = gauss_flatness_residual(sol.phi[2:-2], sol.dphi[2:-2], ddphi, alpha, beta)
    scale = 4.0 * abs(beta ** 2 - alpha ** 2) * beta ** 2
    rep.checks.append(Check("profile_equation", float(np.max(np.abs(res)) / scale),
                            TOL["profile_equation"],
                            "Gauss functional on the samples, relative to 4|b^2-a^2| b^2"))
    return rep


SUITES = {
    "theorem1": verify_theorem1,
    "bianchi-spivak": verify_bianchi_spivak,
    "hopf-cylinder": verify_hopf_cylinder,
    "helicoidal": verify_helicoidal,
    "ode": verify_ode,
}
