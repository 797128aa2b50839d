"""Geometry of the orbit space of a rotationally symmetric ellipsoid.

The ellipsoid with semiaxes (a, b, b, d) in R^4 carries an isometric O(2)
action rotating the (x2, x3) plane.  Its orbit space is the half surface

    { (x1, r, x4) : x1^2/a^2 + r^2/b^2 + x4^2/d^2 = 1,  r >= 0 }

with the metric induced from Euclidean R^3 (here called the quotient
metric), the orbital volume function V = 2*pi*r, and the conformal metric
V^2 * g_quot whose geodesics correspond to minimal surfaces of revolution
upstairs.  This module supplies the closed-form ingredients: the interior
(x1, x4) chart, quotient metric and its derivatives, the normal Ricci
curvature along the x4 = 0 section, Pappus areas of profile curves, and
the Gaussian curvature of the conformal metric (closed form and a
finite-difference fallback for cross-checking).

Everything is a pure function of immutable inputs; all routines accept
scalars or numpy arrays for the coordinate arguments.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

TWO_PI = 2.0 * math.pi

# Below this orbital volume the conformal curvature loses digits; callers
# get a PrecisionWarning instead of silent garbage.
V_PRECISION_FLOOR = 1e-4


class GeometryError(ValueError):
    """Domain violation in an orbit-space computation."""


class PrecisionWarning(UserWarning):
    """Result may have reduced accuracy near the degenerate boundary."""


@dataclass(frozen=True)
class Semiaxes:
    """Semiaxes (a, b, d) of the ellipsoid x1^2/a^2 + (x2^2+x3^2)/b^2 + x4^2/d^2 = 1.

    The two rotational semiaxes are equal (b = c); `a` is the elongation
    axis and `d` the remaining one.
    """

    a: float
    b: float
    d: float

    def __post_init__(self):
        for name in ("a", "b", "d"):
            v = getattr(self, name)
            if not (v > 0.0 and math.isfinite(v)):
                raise GeometryError(f"semiaxis {name} must be positive, got {v!r}")

    def is_confluent(self, tol: float = 1e-8) -> bool:
        """True when a == b up to `tol`; the Heun reduction degenerates there."""
        return abs(self.a - self.b) < tol

    def with_a(self, a: float) -> "Semiaxes":
        return Semiaxes(a, self.b, self.d)


@dataclass(frozen=True)
class OrbitPoint:
    """Point (x1, r, x4) of the orbit space, r >= 0."""

    x1: float
    r: float
    x4: float

    def residual(self, ax: Semiaxes) -> float:
        """Defect of the quotient-surface equation at this point."""
        return (self.x1 / ax.a) ** 2 + (self.r / ax.b) ** 2 + (self.x4 / ax.d) ** 2 - 1.0


@dataclass(frozen=True)
class ChartPoint:
    """Interior chart coordinates (x1, x4); r is recovered from the surface equation."""

    x1: float
    x4: float


@dataclass(frozen=True)
class MetricData:
    """Quotient metric, volume factor and their first derivatives at a chart point.

    g11, g12, g22 are the components of the quotient metric in the (x1, x4)
    chart, V = 2*pi*r is the orbital volume, dV its chart gradient and dg the
    chart gradients of (g11, g12, g22) in the same order.
    """

    g11: float
    g12: float
    g22: float
    V: float
    dV: tuple
    dg: tuple

    @property
    def det(self) -> float:
        return self.g11 * self.g22 - self.g12 ** 2


def boundary_point(ax: Semiaxes, s) -> OrbitPoint:
    """Boundary parametrization (a cos s, 0, d sin s); 2*pi periodic in s."""
    return OrbitPoint(ax.a * np.cos(s), 0.0, ax.d * np.sin(s))


def interior_margin(ax: Semiaxes, x1, x4):
    """1 - x1^2/a^2 - x4^2/d^2; positive strictly inside the boundary ellipse."""
    return 1.0 - (x1 / ax.a) ** 2 - (x4 / ax.d) ** 2


def chart_r(ax: Semiaxes, x1, x4):
    """Orbit radius r(x1, x4) = b * sqrt(1 - x1^2/a^2 - x4^2/d^2)."""
    w = interior_margin(ax, x1, x4)
    return ax.b * np.sqrt(np.maximum(w, 0.0))


def orbit_from_chart(ax: Semiaxes, p: ChartPoint) -> OrbitPoint:
    w = interior_margin(ax, p.x1, p.x4)
    if w < 0:
        raise GeometryError(f"chart point {p} lies outside the boundary ellipse")
    return OrbitPoint(p.x1, ax.b * math.sqrt(w), p.x4)


def _r_derivatives(ax: Semiaxes, x1, x4):
    """r and its chart derivatives up to second order.

    Returns (r, r1, r4, r11, r14, r44).  Valid strictly inside the
    boundary ellipse; the caller is responsible for the domain check.
    """
    a2 = ax.a ** 2
    d2 = ax.d ** 2
    w = 1.0 - x1 * x1 / a2 - x4 * x4 / d2
    sw = np.sqrt(w)
    r = ax.b * sw
    r1 = -ax.b * x1 / (a2 * sw)
    r4 = -ax.b * x4 / (d2 * sw)
    sw3 = sw * w
    r11 = -(ax.b / a2) * (1.0 / sw + x1 * x1 / (a2 * sw3))
    r44 = -(ax.b / d2) * (1.0 / sw + x4 * x4 / (d2 * sw3))
    r14 = -ax.b * x1 * x4 / (a2 * d2 * sw3)
    return r, r1, r4, r11, r14, r44


def metric_arrays(ax: Semiaxes, x1, x4):
    """Raw metric data for (arrays of) chart coordinates.

    Returns (g11, g12, g22, det, r, r1, r4).  No domain checks; used by the
    integrators on points already known to be interior.
    """
    r, r1, r4, _, _, _ = _r_derivatives(ax, x1, x4)
    g11 = 1.0 + r1 * r1
    g12 = r1 * r4
    g22 = 1.0 + r4 * r4
    det = 1.0 + r1 * r1 + r4 * r4
    return g11, g12, g22, det, r, r1, r4


def chart_metric(ax: Semiaxes, p: ChartPoint) -> MetricData:
    """Quotient metric at an interior chart point, with first derivatives.

    The orbit space is the graph r = r(x1, x4) in (x1, r, x4) space with
    the Euclidean-induced metric, so g_ij = delta_ij + r_i r_j and
    V = 2*pi*r.  Derivative entries come from closed-form differentiation
    of r.

    Raises
    ------
    GeometryError
        If p is on or outside the boundary ellipse.
    """
    if interior_margin(ax, p.x1, p.x4) <= 0.0:
        raise GeometryError(f"chart point {p} is not strictly interior")
    r, r1, r4, r11, r14, r44 = _r_derivatives(ax, p.x1, p.x4)
    g11 = 1.0 + r1 * r1
    g12 = r1 * r4
    g22 = 1.0 + r4 * r4
    # d/dx of (1 + r_i r_j) via the second derivatives of r
    dg11 = (2.0 * r1 * r11, 2.0 * r1 * r14)
    dg12 = (r11 * r4 + r1 * r14, r14 * r4 + r1 * r44)
    dg22 = (2.0 * r4 * r14, 2.0 * r4 * r44)
    return MetricData(
        g11=g11, g12=g12, g22=g22,
        V=TWO_PI * r,
        dV=(TWO_PI * r1, TWO_PI * r4),
        dg=(dg11, dg12, dg22),
    )


def ricci_normal(ax: Semiaxes, x1) -> float:
    """Ambient Ricci curvature in the x4-normal direction along the x4 = 0 section.

    Closed form in x1 on the planar sphere {x4 = 0}; constant 2/a^2 in the
    round case a = b = d.
    """
    x1 = np.asarray(x1, dtype=float)
    if np.any(np.abs(x1) > ax.a * (1.0 + 1e-14)):
        raise GeometryError("|x1| exceeds the semiaxis a")
    t = np.clip((x1 / ax.a) ** 2, 0.0, 1.0)
    a2, b2, d2 = ax.a ** 2, ax.b ** 2, ax.d ** 2
    num = a2 * (a2 * (1.0 - t) + b2 * (1.0 + t))
    den = d2 * (a2 * (1.0 - t) + b2 * t) ** 2
    out = num / den
    return float(out) if out.ndim == 0 else out


def pappus_area(ax: Semiaxes, profile, tol: float = 1e-10) -> float:
    """Area of the surface of revolution over a sampled profile curve.

    The profile is a polyline of orbit points (an (n, 3) array of
    (x1, r, x4) rows, or a sequence of OrbitPoint).  The area equals the
    integral of V = 2*pi*r against quotient arclength, evaluated here with
    the trapezoid rule on the polyline chords.  A half-resolution estimate
    provides the convergence check.

    Warns with PrecisionWarning when the refinement estimate exceeds
    max(tol, 1e-6 * area).
    """
    pts = np.asarray(
        [(p.x1, p.r, p.x4) if isinstance(p, OrbitPoint) else p for p in profile],
        dtype=float,
    )
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise GeometryError("profile must be a sequence of (x1, r, x4) points")
    if len(pts) < 2:
        return 0.0
    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    v = TWO_PI * pts[:, 1]
    area = float(np.sum(0.5 * (v[:-1] + v[1:]) * seg))
    if len(pts) >= 5:
        half = pts[::2]
        if not np.array_equal(half[-1], pts[-1]):
            half = np.vstack([half, pts[-1]])
        seg_h = np.linalg.norm(np.diff(half, axis=0), axis=1)
        v_h = TWO_PI * half[:, 1]
        area_h = float(np.sum(0.5 * (v_h[:-1] + v_h[1:]) * seg_h))
        err = abs(area - area_h) / 3.0
        if err > max(tol, 1e-6 * abs(area)):
            warnings.warn(
                f"pappus_area refinement estimate {err:.3e} above tolerance",
                PrecisionWarning,
            )
    return area


def gamma_ver_profile(ax: Semiaxes, n: int = 2001) -> np.ndarray:
    """Densely sampled vertical free-boundary geodesic {x1 = 0} as orbit points."""
    v = np.linspace(-0.5 * math.pi, 0.5 * math.pi, n)
    return np.column_stack([np.zeros_like(v), ax.b * np.cos(v), ax.d * np.sin(v)])


def gamma_hor_profile(ax: Semiaxes, n: int = 2001) -> np.ndarray:
    """Densely sampled horizontal free-boundary geodesic {x4 = 0} as orbit points."""
    u = np.linspace(0.0, math.pi, n)
    return np.column_stack([ax.a * np.cos(u), ax.b * np.sin(u), np.zeros_like(u)])


def gamma_ver_area(ax: Semiaxes) -> float:
    """Pappus area of the x1 = 0 planar sphere (adaptive quadrature).

    2*pi*b * integral of cos(v) * sqrt(d^2 cos^2 v + b^2 sin^2 v) over
    v in [-pi/2, pi/2]; equals 4*pi*b^2 when b = d.
    """
    b2, d2 = ax.b ** 2, ax.d ** 2

    def f(v):
        c, s = math.cos(v), math.sin(v)
        return c * math.sqrt(d2 * c * c + b2 * s * s)

    val, err = quad(f, -0.5 * math.pi, 0.5 * math.pi, epsabs=1e-12, epsrel=1e-12)
    if err > 1e-8:
        warnings.warn(f"gamma_ver_area quadrature error {err:.2e}", PrecisionWarning)
    return TWO_PI * ax.b * val


def gamma_hor_area(ax: Semiaxes) -> float:
    """Pappus area of the x4 = 0 planar sphere (adaptive quadrature)."""
    a2, b2 = ax.a ** 2, ax.b ** 2

    def f(u):
        c, s = math.cos(u), math.sin(u)
        return s * math.sqrt(a2 * s * s + b2 * c * c)

    val, err = quad(f, 0.0, math.pi, epsabs=1e-12, epsrel=1e-12)
    if err > 1e-8:
        warnings.warn(f"gamma_hor_area quadrature error {err:.2e}", PrecisionWarning)
    return TWO_PI * ax.b * val


def planar_sphere_area_crosscheck(b: float, d: float) -> dict:
    """Two candidate values for the area of the x1 = 0 planar sphere.

    The Pappus integral of the profile curve gives the classical area of
    the ellipsoid of revolution with semiaxes (b, b, d); e.g. 4*pi for
    b = d = 1.  The constant 4*pi*b^2*d/3 that shows up in some closed-form
    accounts matches the enclosed volume pattern instead and disagrees with
    the quadrature.  Downstream area ratios use the Pappus value; both are
    reported so the discrepancy stays visible.
    """
    ax = Semiaxes(max(b, d) + 1.0, b, d)  # `a` is irrelevant for the x1 = 0 profile
    pappus = gamma_ver_area(ax)
    four_thirds = 4.0 * math.pi * b * b * d / 3.0
    return {
        "pappus_area": pappus,
        "four_thirds_constant": four_thirds,
        "relative_gap": abs(pappus - four_thirds) / pappus,
        "agree": abs(pappus - four_thirds) <= 1e-10 * pappus,
    }


# ---------------------------------------------------------------------------
# Gaussian curvature of the conformal metric V^2 * g_quot
# ---------------------------------------------------------------------------

def gauss_curvature_quotient(ax: Semiaxes, x1, x4):
    """Gaussian curvature of the quotient (graph) metric at interior points.

    For the graph r = r(x1, x4):  K = det(Hess r) / (1 + |grad r|^2)^2.
    """
    _, r1, r4, r11, r14, r44 = _r_derivatives(ax, x1, x4)
    den = 1.0 + r1 * r1 + r4 * r4
    return (r11 * r44 - r14 * r14) / (den * den)


def _laplacian_log_v(ax: Semiaxes, x1, x4):
    """Laplace-Beltrami of log V in the quotient metric, closed form."""
    r, r1, r4, r11, r14, r44 = _r_derivatives(ax, x1, x4)
    det = 1.0 + r1 * r1 + r4 * r4
    sq = np.sqrt(det)
    u1 = r1 / r
    u4 = r4 / r
    du1_1 = (r11 * r - r1 * r1) / (r * r)
    du1_4 = (r14 * r - r1 * r4) / (r * r)
    du4_1 = du1_4
    du4_4 = (r44 * r - r4 * r4) / (r * r)
    det_1 = 2.0 * (r1 * r11 + r4 * r14)
    det_4 = 2.0 * (r1 * r14 + r4 * r44)
    # C^ij = sqrt(det) g^ij
    c11 = (1.0 + r4 * r4) / sq
    c12 = -r1 * r4 / sq
    c22 = (1.0 + r1 * r1) / sq
    c11_1 = 2.0 * r4 * r14 / sq - (1.0 + r4 * r4) * det_1 / (2.0 * det * sq)
    c11_4 = 2.0 * r4 * r44 / sq - (1.0 + r4 * r4) * det_4 / (2.0 * det * sq)
    c12_1 = -(r11 * r4 + r1 * r14) / sq + r1 * r4 * det_1 / (2.0 * det * sq)
    c12_4 = -(r14 * r4 + r1 * r44) / sq + r1 * r4 * det_4 / (2.0 * det * sq)
    c22_1 = 2.0 * r1 * r11 / sq - (1.0 + r1 * r1) * det_1 / (2.0 * det * sq)
    c22_4 = 2.0 * r1 * r14 / sq - (1.0 + r1 * r1) * det_4 / (2.0 * det * sq)
    d1 = c11_1 * u1 + c11 * du1_1 + c12_1 * u4 + c12 * du4_1
    d4 = c12_4 * u1 + c12 * du1_4 + c22_4 * u4 + c22 * du4_4
    return (d1 + d4) / sq


def gauss_curvature_conformal(ax: Semiaxes, p, method: str = "closed",
                              fd_step: float | None = None):
    """Gaussian curvature of the conformal metric V^2 * g_quot.

    Parameters
    ----------
    p : ChartPoint or pair of scalar/array coordinates (x1, x4)
    method : "closed" uses K = (K_quot - Lap log V) / V^2 with analytic
        derivatives of r; "fd" applies the Brioschi formula to the sampled
        conformal metric with sixth-order centered differences, which shares
        no derivative code with the closed form and serves as a cross-check.
    fd_step : stencil step for the "fd" path; default 1e-4 * min(a, b, d).

    Warns with PrecisionWarning where V < 1e-4 (boundary degeneracy).
    """
    if isinstance(p, ChartPoint):
        x1, x4 = p.x1, p.x4
    else:
        x1, x4 = p
    x1 = np.asarray(x1, dtype=float)
    x4 = np.asarray(x4, dtype=float)
    if np.any(interior_margin(ax, x1, x4) <= 0.0):
        raise GeometryError("curvature requested on or outside the boundary")
    v = TWO_PI * chart_r(ax, x1, x4)
    if np.any(v < V_PRECISION_FLOOR):
        warnings.warn(
            "gauss_curvature_conformal evaluated where V < 1e-4; "
            "expect reduced accuracy", PrecisionWarning)
    if method == "closed":
        kq = gauss_curvature_quotient(ax, x1, x4)
        out = (kq - _laplacian_log_v(ax, x1, x4)) / (v * v)
    elif method == "fd":
        h = fd_step if fd_step is not None else 1e-4 * min(ax.a, ax.b, ax.d)
        out = _brioschi_fd(ax, x1, x4, h)
    else:
        raise ValueError(f"unknown method {method!r}")
    return float(out) if np.ndim(out) == 0 else out


_D1_W = np.array([-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0]) / 60.0
_D2_W = np.array([2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0]) / 180.0


def _conf_metric_components(ax: Semiaxes, x1, x4):
    g11, g12, g22, _, r, _, _ = metric_arrays(ax, x1, x4)
    v2 = (TWO_PI * r) ** 2
    return v2 * g11, v2 * g12, v2 * g22


def _brioschi_fd(ax: Semiaxes, x1, x4, h: float):
    """Brioschi curvature of the conformal metric from a 7x7 FD stencil."""
    off = np.arange(-3, 4) * h
    X1 = x1[..., None, None] + off[:, None]
    X4 = x4[..., None, None] + off[None, :]
    if np.any(interior_margin(ax, X1, X4) <= 0.0):
        raise GeometryError("fd stencil leaves the chart interior; reduce fd_step")
    E, F, G = _conf_metric_components(ax, X1, X4)

    def d_u(A):   # d/dx1 at the stencil center
        return np.tensordot(A[..., :, 3], _D1_W, axes=([-1], [0])) / h

    def d_v(A):
        return np.tensordot(A[..., 3, :], _D1_W, axes=([-1], [0])) / h

    def d_uu(A):
        return np.tensordot(A[..., :, 3], _D2_W, axes=([-1], [0])) / h ** 2

    def d_vv(A):
        return np.tensordot(A[..., 3, :], _D2_W, axes=([-1], [0])) / h ** 2

    def d_uv(A):
        inner = np.tensordot(A, _D1_W, axes=([-1], [0])) / h
        return np.tensordot(inner, _D1_W, axes=([-1], [0])) / h

    e, f, g = E[..., 3, 3], F[..., 3, 3], G[..., 3, 3]
    e_u, e_v = d_u(E), d_v(E)
    f_u, f_v = d_u(F), d_v(F)
    g_u, g_v = d_u(G), d_v(G)
    e_vv, g_uu, f_uv = d_vv(E), d_uu(G), d_uv(F)

    m1 = np.array([
        [-0.5 * e_vv + f_uv - 0.5 * g_uu, 0.5 * e_u, f_u - 0.5 * e_v],
        [f_v - 0.5 * g_u, e, f],
        [0.5 * g_v, f, g],
    ])
    m2 = np.array([
        [np.zeros_like(e), 0.5 * e_v, 0.5 * g_u],
        [0.5 * e_v, e, f],
        [0.5 * g_u, f, g],
    ])

    def det3(m):
        return (m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
                - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
                + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0]))

    return (det3(m1) - det3(m2)) / (e * g - f * f) ** 2
