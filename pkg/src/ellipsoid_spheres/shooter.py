"""Geodesic shooting in the conformal orbit-space metric.

Geodesics of V^2 * g_quot launched orthogonally from the boundary ellipse
are integrated in quotient arclength rho with state (x1, x4, T1, T4),
where T is the g_quot-unit chart velocity.  In this parametrization the
conformal geodesic equation is the quotient geodesic equation driven by a
bounded curvature forcing,

    (covariant T') = kappa * N,    kappa = d(log V)/dN,

with N the leftward g_quot-unit normal of T; the raw conformal Christoffel
symbols would blow up like 1/r at the boundary, the forcing does not.

A shot from boundary parameter s runs until the first transversal crossing
of the vertical geodesic {x1 = 0} and reports the two shooting
functionals: f_odd = x4 at the crossing (zero iff the geodesic passes
through the center O) and f_even = the g_quot-inner product of T with the
unit tangent of the vertical geodesic (zero iff the crossing is
orthogonal).  Zeros over (a, s) of either functional are free-boundary
geodesics, i.e. minimal 2-spheres upstairs; the count of x4 sign changes
strictly before the crossing is the discrete invariant that labels
bifurcation branches.

Launch regularization: the boundary is a fold of the chart (the metric
degenerates), so shots start at a small quotient distance eps from the
boundary.  On the doubled surface the boundary is a closed geodesic and
the orthogonal geodesic is symmetric under r -> -r, which forces the chart
trace x(rho) = beta(s) + (rho^2 / (b^2 |grad w|)) * e + O(rho^4) along the
inward chart normal e of the level function w = 1 - x1^2/a^2 - x4^2/d^2;
the launch state places the point and direction from this expansion, so
the position error is O(eps^3) and shrinking eps converges at second
order.
"""

from __future__ import annotations

import io
import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import eigh_tridiagonal

from .geometry import (ChartPoint, GeometryError, PrecisionWarning, Semiaxes,
                       TWO_PI, chart_r, gauss_curvature_conformal,
                       interior_margin, metric_arrays)

EVEN = "even"
ODD = "odd"

S_MAX_MARGIN = 0.05  # supported launch domain: |s| <= pi/2 - margin


class ShooterError(RuntimeError):
    pass


class NoCrossing(ShooterError):
    """Integration budget exhausted before reaching the vertical geodesic."""


class TangentialCrossing(ShooterError):
    """|dx1/drho| below tolerance at the crossing; outcome unreliable."""


@dataclass(frozen=True)
class ShooterConfig:
    """Integrator and launch controls; lengths are in g_quot units.

    Defaults marked None are resolved per shot from the semiaxes:
    eps_launch = 1e-3 * min(b, d), r_min = 2.5e-3 * min(b, d),
    length_max = 12 * (a + b + d).  The neck collar used for turn counting
    is 5 * r_min (fixed rule); r_min must stay below the smallest orbit
    radius the geodesics of interest reach, and the collar above it.
    """

    eps_launch: float | None = None
    rk_abs_tol: float = 1e-12
    rk_rel_tol: float = 1e-11
    r_min: float | None = None
    length_max: float | None = None
    solution_tol: float = 1e-8
    s_margin: float = S_MAX_MARGIN

    def __post_init__(self):
        if not (0.0 < self.rk_rel_tol <= 1e-3 and 0.0 < self.rk_abs_tol <= 1e-3):
            raise ValueError("integrator tolerances must lie in (0, 1e-3]")
        for name in ("eps_launch", "r_min", "length_max"):
            v = getattr(self, name)
            if v is not None and v <= 0.0:
                raise ValueError(f"{name} must be positive")

    def resolve(self, ax: Semiaxes) -> "ShooterConfig":
        scale = min(ax.b, ax.d)
        return replace(
            self,
            eps_launch=self.eps_launch if self.eps_launch is not None else 1e-3 * scale,
            r_min=self.r_min if self.r_min is not None else 2.5e-3 * scale,
            length_max=(self.length_max if self.length_max is not None
                        else 12.0 * (ax.a + ax.b + ax.d)),
        )


@dataclass(frozen=True)
class TangentState:
    """Chart point, chart direction angle of the unit tangent, and arclength."""

    point: ChartPoint
    theta: float
    rho: float

    def tangent(self, ax: Semiaxes) -> tuple:
        """g_quot-unit chart velocity reconstructed from theta."""
        c, s = math.cos(self.theta), math.sin(self.theta)
        g11, g12, g22, _, _, _, _ = metric_arrays(ax, self.point.x1, self.point.x4)
        nrm = math.sqrt(g11 * c * c + 2.0 * g12 * c * s + g22 * s * s)
        return (c / nrm, s / nrm)


@dataclass(frozen=True)
class GeodesicPath:
    """Sampled geodesic: arrays over rho plus derived area and turn count."""

    ax: Semiaxes
    rho: np.ndarray
    x1: np.ndarray
    x4: np.ndarray
    t1: np.ndarray
    t4: np.ndarray
    termination: str
    area: float = math.nan
    turn_count: int = -1
    degenerate: bool = False

    @property
    def r(self) -> np.ndarray:
        return chart_r(self.ax, self.x1, self.x4)

    @property
    def theta(self) -> np.ndarray:
        return np.unwrap(np.arctan2(self.t4, self.t1))

    def states(self) -> list:
        th = self.theta
        return [TangentState(ChartPoint(float(a), float(b)), float(t), float(rr))
                for a, b, t, rr in zip(self.x1, self.x4, th, self.rho)]


@dataclass(frozen=True)
class ShotOutcome:
    crossing_point: ChartPoint
    crossing_tangent: TangentState
    f_even: float
    f_odd: float
    z_count: int
    path: GeodesicPath
    termination: str


def launch(ax: Semiaxes, s: float, eps: float | None = None,
           s_margin: float = S_MAX_MARGIN) -> TangentState:
    """State at quotient distance ~eps from beta(s) along the inward orthogonal.

    Uses the second-order fold expansion (see module docstring); eps must
    lie in (0, 0.05 * min(b, d)] and s in the supported band
    |s| <= pi/2 - s_margin (default margin 0.05; branches at large
    elongation hug the vertical pole and need a smaller one).
    """
    scale = min(ax.b, ax.d)
    if eps is None:
        eps = 1e-3 * scale
    if not (0.0 < eps <= 0.05 * scale):
        raise ValueError(f"eps = {eps} outside (0, {0.05 * scale}]")
    if abs(s) > 0.5 * math.pi - s_margin:
        raise ValueError(
            f"|s| = {abs(s)} outside the supported band; the vertical-pole "
            "neighborhood is excluded")
    cs, sn = math.cos(s), math.sin(s)
    gx = -2.0 * cs / ax.a      # grad w at beta(s), chart components
    gy = -2.0 * sn / ax.d
    gnorm = math.hypot(gx, gy)
    ex, ey = gx / gnorm, gy / gnorm
    h = eps * eps / (ax.b ** 2 * gnorm)
    x1 = ax.a * cs + h * ex
    x4 = ax.d * sn + h * ey
    return TangentState(ChartPoint(x1, x4), math.atan2(ey, ex), eps)


def curvature_forcing(ax: Semiaxes, state: TangentState) -> float:
    """d(log V)/dN at the state, N the leftward g_quot-unit normal of T.

    Vanishes identically along the two axis geodesics; bounded up to the
    boundary along near-orthogonal directions.
    """
    x1, x4 = state.point.x1, state.point.x4
    g11, g12, g22, det, r, r1, r4 = metric_arrays(ax, x1, x4)
    if r <= 0.0:
        raise GeometryError("state on the degenerate boundary")
    if r < 1e-6 * min(ax.b, ax.d):
        warnings.warn("curvature forcing evaluated very close to the boundary",
                      PrecisionWarning)
    t1, t4 = state.tangent(ax)
    sq = math.sqrt(det)
    n_cov1 = -sq * t4
    n_cov4 = sq * t1
    n1 = ((1.0 + r4 * r4) * n_cov1 - r1 * r4 * n_cov4) / det
    n4 = (-r1 * r4 * n_cov1 + (1.0 + r1 * r1) * n_cov4) / det
    return (r1 * n1 + r4 * n4) / r


def _rhs_factory(ax: Semiaxes):
    a2 = ax.a ** 2
    d2 = ax.d ** 2
    b = ax.b

    def rhs(rho, y):
        x1, x4, t1, t4 = y
        w = 1.0 - x1 * x1 / a2 - x4 * x4 / d2
        sw = math.sqrt(w)
        r = b * sw
        r1 = -b * x1 / (a2 * sw)
        r4 = -b * x4 / (d2 * sw)
        sw3 = sw * w
        r11 = -(b / a2) * (1.0 / sw + x1 * x1 / (a2 * sw3))
        r44 = -(b / d2) * (1.0 / sw + x4 * x4 / (d2 * sw3))
        r14 = -b * x1 * x4 / (a2 * d2 * sw3)
        det = 1.0 + r1 * r1 + r4 * r4
        # quotient geodesic part: graph-metric Christoffels
        ii = r11 * t1 * t1 + 2.0 * r14 * t1 * t4 + r44 * t4 * t4
        geo = ii / det
        # leftward unit normal and conformal forcing
        sq = math.sqrt(det)
        nc1 = -sq * t4
        nc4 = sq * t1
        n1 = ((1.0 + r4 * r4) * nc1 - r1 * r4 * nc4) / det
        n4 = (-r1 * r4 * nc1 + (1.0 + r1 * r1) * nc4) / det
        kappa = (r1 * n1 + r4 * n4) / r
        return (t1, t4, -r1 * geo + kappa * n1, -r4 * geo + kappa * n4)

    return rhs


def _initial_vector(ax: Semiaxes, state: TangentState):
    t1, t4 = state.tangent(ax)
    return np.array([state.point.x1, state.point.x4, t1, t4])


def integrate(ax: Semiaxes, state: TangentState, cfg: ShooterConfig | None = None,
              stop_at_ver: bool = True, length: float | None = None,
              dense: bool = False):
    """Integrate the conformal geodesic from a state; returns the raw solver
    output plus the resolved config.

    Events: crossing of {x1 = 0} (terminal when stop_at_ver), sign changes
    of x4 (recorded), and the orbit radius falling below r_min (terminal,
    only on the way down, so launches inside the collar escape outward).
    """
    cfg = (cfg or ShooterConfig()).resolve(ax)
    span = length if length is not None else cfg.length_max
    w_min = (cfg.r_min / ax.b) ** 2

    def ev_ver(rho, y):
        return y[0]
    ev_ver.terminal = stop_at_ver
    ev_ver.direction = 0.0

    def ev_hor(rho, y):
        return y[1]
    ev_hor.terminal = False
    ev_hor.direction = 0.0

    def ev_collar(rho, y):
        return (1.0 - y[0] * y[0] / ax.a ** 2 - y[1] * y[1] / ax.d ** 2) - w_min
    ev_collar.terminal = True
    ev_collar.direction = -1.0

    sol = solve_ivp(_rhs_factory(ax), (state.rho, state.rho + span),
                    _initial_vector(ax, state),
                    method="DOP853", rtol=cfg.rk_rel_tol, atol=cfg.rk_abs_tol,
                    events=(ev_ver, ev_hor, ev_collar), dense_output=dense)
    if not sol.success:  # pragma: no cover
        raise ShooterError(f"integration failed: {sol.message}")
    return sol, cfg


def _path_from_solution(ax: Semiaxes, sol, termination: str,
                        rho_end: float | None = None,
                        n_samples: int = 0) -> GeodesicPath:
    if n_samples and sol.sol is not None:
        hi = rho_end if rho_end is not None else sol.t[-1]
        rho = np.linspace(sol.t[0], hi, n_samples)
        vals = sol.sol(rho)
    else:
        rho, vals = sol.t, sol.y
        if rho_end is not None:
            keep = rho <= rho_end
            rho, vals = rho[keep], vals[:, keep]
    return GeodesicPath(ax=ax, rho=np.asarray(rho, dtype=float),
                        x1=vals[0].copy(), x4=vals[1].copy(),
                        t1=vals[2].copy(), t4=vals[3].copy(),
                        termination=termination)


def shoot_to_ver(ax: Semiaxes, s: float, cfg: ShooterConfig | None = None,
                 dense: bool = False, n_samples: int = 0) -> ShotOutcome:
    """Shoot from beta(s) to the first transversal crossing of {x1 = 0}.

    f_odd is the crossing height x4; f_even is the g_quot-angle functional
    <T, e_ver>, e_ver the unit tangent of the vertical geodesic oriented
    toward increasing x4.  (The latter has the same zeros and sign changes
    as the z-derivative normal functional used in the linearized theory;
    they differ by a smooth positive factor and an orientation convention.)
    z_count is the number of x4 sign changes strictly between launch and
    crossing; a sign change within 1e-6 * max(1, rho_cross) of the crossing
    belongs to the crossing itself (odd solutions) and is not counted.
    """
    cfg = (cfg or ShooterConfig()).resolve(ax)
    state = launch(ax, s, cfg.eps_launch, s_margin=cfg.s_margin)
    sol, _ = integrate(ax, state, cfg, stop_at_ver=True,
                       dense=dense or bool(n_samples))
    if len(sol.t_events[0]) == 0:
        reason = "BoundaryArrival" if len(sol.t_events[2]) else "Budget"
        raise NoCrossing(f"no vertical crossing; termination {reason} at "
                         f"rho = {sol.t[-1]:.6g}")
    rho_cross = float(sol.t_events[0][0])
    y_cross = sol.y_events[0][0]
    x4c, t1c, t4c = float(y_cross[1]), float(y_cross[2]), float(y_cross[3])
    if abs(t1c) < 1e-10:
        raise TangentialCrossing(
            f"|dx1/drho| = {abs(t1c):.2e} at the crossing (s = {s})")
    g11, g12, g22, _, _, _, _ = metric_arrays(ax, 0.0, x4c)
    f_even = (g12 * t1c + g22 * t4c) / math.sqrt(g22)
    z_guard = rho_cross - 1e-6 * max(1.0, rho_cross)
    # transversal crossings only: along the degenerate axis shot x4 sits at
    # roundoff scale and its "crossings" carry essentially zero dx4/drho
    z_count = int(sum(1 for rho_e, y_e in zip(sol.t_events[1], sol.y_events[1])
                      if rho_e < z_guard and abs(y_e[3]) > 1e-12))
    path = _path_from_solution(ax, sol, "CrossedVer", rho_end=rho_cross,
                               n_samples=n_samples)
    crossing = TangentState(ChartPoint(0.0, x4c), math.atan2(t4c, t1c), rho_cross)
    return ShotOutcome(crossing_point=crossing.point, crossing_tangent=crossing,
                       f_even=f_even, f_odd=x4c, z_count=z_count,
                       path=path, termination="CrossedVer")


def f_parity(ax: Semiaxes, s: float, parity: str,
             cfg: ShooterConfig | None = None) -> float:
    out = shoot_to_ver(ax, s, cfg)
    return out.f_even if parity == EVEN else out.f_odd


def pappus_length(ax: Semiaxes, path: GeodesicPath) -> float:
    """Conformal length of a sampled path = area of its revolution surface.

    Integral of V drho via composite Simpson on the rho samples (the path
    is unit speed in g_quot).
    """
    v = TWO_PI * path.r
    from scipy.integrate import simpson
    return float(simpson(v, x=path.rho))


def _reflect_even(path: GeodesicPath) -> GeodesicPath:
    """Continuation of a half path across the vertical geodesic (x1 -> -x1)."""
    rho_end = path.rho[-1]
    rho2 = rho_end + (rho_end - path.rho[::-1]) + 0.0
    return GeodesicPath(ax=path.ax, rho=np.concatenate([path.rho, rho2[1:]]),
                        x1=np.concatenate([path.x1, -path.x1[::-1][1:]]),
                        x4=np.concatenate([path.x4, path.x4[::-1][1:]]),
                        t1=np.concatenate([path.t1, path.t1[::-1][1:]]),
                        t4=np.concatenate([path.t4, -path.t4[::-1][1:]]),
                        termination=path.termination)


def _reflect_odd(path: GeodesicPath) -> GeodesicPath:
    """Continuation of a half path through the center (x -> -x)."""
    rho_end = path.rho[-1]
    rho2 = rho_end + (rho_end - path.rho[::-1])
    return GeodesicPath(ax=path.ax, rho=np.concatenate([path.rho, rho2[1:]]),
                        x1=np.concatenate([path.x1, -path.x1[::-1][1:]]),
                        x4=np.concatenate([path.x4, -path.x4[::-1][1:]]),
                        t1=np.concatenate([path.t1, path.t1[::-1][1:]]),
                        t4=np.concatenate([path.t4, path.t4[::-1][1:]]),
                        termination=path.termination)


def turn_count(path: GeodesicPath, r_collar: float) -> int:
    """Number of near-boundary sharp turns.

    A turn is a maximal parameter interval with r < r_collar over which the
    chart direction angle sweeps more than pi/2.  Launch and landing
    segments sweep almost nothing and are not counted.
    """
    r = path.r
    th = path.theta
    inside = r < r_collar
    count = 0
    i = 0
    n = len(r)
    while i < n:
        if inside[i]:
            j = i
            while j + 1 < n and inside[j + 1]:
                j += 1
            if th[i:j + 1].size >= 2:
                sweep = float(np.max(th[i:j + 1]) - np.min(th[i:j + 1]))
                if sweep > 0.5 * math.pi:
                    count += 1
            i = j + 1
        else:
            i += 1
    return count


def neck_count(path: GeodesicPath, depth_frac: float = 0.25) -> int:
    """Interior dips of the orbit radius below depth_frac * max r.

    Robust stand-in for the sharp-turn count at moderate elongation, where
    the turning arcs are too spread out for a narrow-collar sweep rule but
    the radius dips are already unambiguous.  A dip is a maximal
    sub-threshold interval bracketed by super-threshold samples on both
    sides, so the launch and landing collars (which touch the path ends at
    small r) never count.
    """
    r = path.r
    n = len(r)
    thresh = depth_frac * float(r.max())
    count = 0
    i = 0
    while i < n:
        if r[i] < thresh:
            j = i
            while j + 1 < n and r[j + 1] < thresh:
                j += 1
            if i > 0 and j < n - 1:
                count += 1
            i = j + 1
        else:
            i += 1
    return count


def full_geodesic(ax: Semiaxes, s: float, parity: str,
                  cfg: ShooterConfig | None = None,
                  n_samples: int = 4001) -> GeodesicPath:
    """Assemble the full free-boundary geodesic through the solution at s.

    Requires |f_parity(a, s)| below cfg.solution_tol.  The half path from
    the boundary to the vertical crossing is reflected across the vertical
    geodesic (even) or through the center (odd); the result carries its
    conformal length (Pappus area of the corresponding minimal sphere) and
    near-boundary turn count.  With s = 0 the assembly degenerates to the
    horizontal geodesic and is flagged.
    """
    cfg = (cfg or ShooterConfig()).resolve(ax)
    out = shoot_to_ver(ax, s, cfg, n_samples=max(n_samples // 2, 200))
    fval = out.f_even if parity == EVEN else out.f_odd
    if abs(fval) > cfg.solution_tol:
        raise ShooterError(
            f"not a {parity} solution: |f| = {abs(fval):.2e} > {cfg.solution_tol}")
    half = out.path
    full = _reflect_even(half) if parity == EVEN else _reflect_odd(half)
    degenerate = bool(np.max(np.abs(full.x4)) < 1e-9 * ax.d)
    area = pappus_length(ax, full)
    turns = turn_count(full, 5.0 * cfg.r_min)
    return replace(full, area=area, turn_count=turns, degenerate=degenerate)


def crossing_count(path: GeodesicPath) -> int | None:
    """Transversal x4 = 0 crossings of a full geodesic; None when degenerate."""
    if path.degenerate:
        return None
    sgn = np.sign(path.x4)
    nz = sgn != 0
    s = sgn[nz]
    return int(np.sum(s[:-1] * s[1:] < 0))


def equivariant_index(ax: Semiaxes, path: GeodesicPath,
                      cfg: ShooterConfig | None = None,
                      delta_c: float | None = None,
                      n_grid: int = 6000) -> int:
    """Morse index of a free-boundary geodesic of the conformal metric.

    Counts the negative Dirichlet eigenvalues of -v'' - K v on the
    conformal arclength domain, K the Gaussian curvature of the conformal
    metric along the path, with the endpoints cut back by delta_c (default
    0.1 percent of the length: eigenfunctions do not vanish at the
    degenerate boundary, so the cutoff must be tight to not lose the
    boundary-supported modes); the cutoff is halved once and a differing
    count reported as a warning.  Dirichlet at the cut underestimates the
    true index, which is the safe direction for lower-bound checks.
    """
    cfg = (cfg or ShooterConfig()).resolve(ax)
    v = TWO_PI * path.r
    if np.mean(path.r < cfg.r_min) > 0.10:
        warnings.warn("more than 10% of the path lies in the boundary collar",
                      PrecisionWarning)
    tau = np.concatenate([[0.0], np.cumsum(0.5 * (v[1:] + v[:-1])
                                           * np.diff(path.rho))])
    ell = tau[-1]
    dc = delta_c if delta_c is not None else 0.001 * ell

    def count(dc_val):
        grid = np.linspace(dc_val, ell - dc_val, n_grid)
        x1 = np.interp(grid, tau, path.x1)
        x4 = np.interp(grid, tau, path.x4)
        margin = interior_margin(ax, x1, x4)
        good = margin > 1e-14
        if not np.all(good):  # clamp stray endpoint samples inward
            x1, x4 = x1[good], x4[good]
            grid_loc = grid[good]
        else:
            grid_loc = grid
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", PrecisionWarning)
            k = gauss_curvature_conformal(ax, (x1, x4))
        h = grid_loc[1] - grid_loc[0]
        diag = 2.0 / h ** 2 - k[1:-1]
        off = np.full(len(diag) - 1, -1.0 / h ** 2)
        vals = eigh_tridiagonal(diag, off, select="v",
                                select_range=(-np.inf, 0.0), eigvals_only=True)
        return len(vals)

    c1 = count(dc)
    c2 = count(0.5 * dc)
    if c1 != c2:
        warnings.warn(f"index changed {c1} -> {c2} when halving the endpoint "
                      "cutoff; reporting the smaller cutoff value",
                      PrecisionWarning)
    return c2


def path_to_csv(path: GeodesicPath) -> str:
    """CSV dump with header rho,x1,x4,r,theta,kappa."""
    buf = io.StringIO()
    buf.write("rho,x1,x4,r,theta,kappa\n")
    th = path.theta
    r = path.r
    for i in range(len(path.rho)):
        st = TangentState(ChartPoint(float(path.x1[i]), float(path.x4[i])),
                          float(th[i]), float(path.rho[i]))
        try:
            kappa = curvature_forcing(path.ax, st)
        except GeometryError:
            kappa = math.nan
        buf.write(f"{path.rho[i]:.17g},{path.x1[i]:.17g},{path.x4[i]:.17g},"
                  f"{r[i]:.17g},{th[i]:.17g},{kappa:.17g}\n")
    return buf.getvalue()


def clairaut_like(ax: Semiaxes, path: GeodesicPath) -> np.ndarray:
    """V^2 dx1/dtau along the path (tau the conformal arclength).

    In the infinite-elongation limit the metric acquires the x1-translation
    Killing field and this quantity becomes an exact Clairaut constant; its
    drift over a fixed window quantifies how far the geometry is from the
    limit strip.
    """
    v = TWO_PI * path.r
    return v * path.t1
