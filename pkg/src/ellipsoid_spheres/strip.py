"""The infinite-elongation limit: geodesics of the flat conformal strip.

As the elongation grows, the orbit space converges to the strip
R x (-L, L) with metric eta(y)^2 (dx^2 + dy^2), where

    eta(y) = 2 pi b cos(v(y)),
    y(v) = integral_0^v sqrt(d^2 cos^2 t + b^2 sin^2 t) dt,   L = y(pi/2).

The x-translations are isometries, so eta(y)^2 x' is conserved along unit
speed geodesics (a Clairaut constant C).  The trichotomy: C = 0 gives
vertical segments, |C| = 2 pi b the horizontal axis, and anything between
oscillates between the turning heights +-w with eta(w) = |C|, advancing
per oscillation by the period

    Delta(c) = 2 integral_{-w}^{w} |c| / sqrt(eta(s)^2 - c^2) ds,

where the integrable endpoint singularity is removed by s = w sin(t).
These quantities are the reference data for large-elongation checks of the
shooting module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.optimize import brentq

TWO_PI = 2.0 * math.pi


class StripError(ValueError):
    pass


VERTICAL = "Vertical"
HORIZONTAL = "Horizontal"
OSCILLATING = "Oscillating"


@dataclass(frozen=True)
class StripMetric:
    """Conformal factor data of the limit strip for semiaxes (b, d)."""

    b: float
    d: float
    L: float

    @classmethod
    def build(cls, b: float, d: float) -> "StripMetric":
        if b <= 0 or d <= 0:
            raise StripError("b and d must be positive")
        return cls(b=b, d=d, L=_y_of_v(b, d, 0.5 * math.pi))

    def y_of_v(self, v):
        return y_of_v(self.b, self.d, v)

    def v_of_y(self, y):
        return v_of_y(self.b, self.d, y)

    def eta(self, y) -> float:
        return TWO_PI * self.b * math.cos(self.v_of_y(y))

    def eta_prime(self, y) -> float:
        """d eta/dy by the chain rule; dv/dy = 1/sqrt(d^2 cos^2 v + b^2 sin^2 v)."""
        v = self.v_of_y(y)
        c, s = math.cos(v), math.sin(v)
        return -TWO_PI * self.b * s / math.sqrt(self.d ** 2 * c * c
                                                + self.b ** 2 * s * s)

    @property
    def eta_max(self) -> float:
        return TWO_PI * self.b


def _y_of_v(b: float, d: float, v: float) -> float:
    val, err = quad(lambda t: math.sqrt(d * d * math.cos(t) ** 2
                                        + b * b * math.sin(t) ** 2),
                    0.0, v, epsabs=1e-13, epsrel=1e-13)
    if err > 1e-10:
        raise StripError(f"arclength quadrature error {err:.2e}")
    return val


def y_of_v(b: float, d: float, v: float) -> float:
    """Strip height of the cross-section angle v in [-pi/2, pi/2]."""
    if abs(v) > 0.5 * math.pi + 1e-12:
        raise StripError(f"v = {v} outside [-pi/2, pi/2]")
    return _y_of_v(b, d, min(max(v, -0.5 * math.pi), 0.5 * math.pi))


def v_of_y(b: float, d: float, y: float) -> float:
    """Inverse of y_of_v on [-L, L]: bisection bracket plus Newton polish."""
    L = _y_of_v(b, d, 0.5 * math.pi)
    if abs(y) > L + 1e-12:
        raise StripError(f"y = {y} outside [-{L}, {L}]")
    y = min(max(y, -L), L)
    if y == 0.0:
        return 0.0
    v = brentq(lambda vv: _y_of_v(b, d, vv) - y,
               -0.5 * math.pi, 0.5 * math.pi, xtol=1e-12)
    for _ in range(3):
        c, s = math.cos(v), math.sin(v)
        dv = (_y_of_v(b, d, v) - y) / math.sqrt(d * d * c * c + b * b * s * s)
        v -= dv
        if abs(dv) < 1e-15:
            break
    return min(max(v, -0.5 * math.pi), 0.5 * math.pi)


@dataclass(frozen=True)
class StripGeodesic:
    C: float
    w: float | None
    period: float | None
    kind: str


def classify(strip: StripMetric, C: float) -> StripGeodesic:
    """Trichotomy by the Clairaut constant: vertical, horizontal, oscillating."""
    cmax = strip.eta_max
    if abs(C) > cmax + 1e-12:
        raise StripError(f"|C| = {abs(C)} exceeds eta(0) = {cmax}")
    if C == 0.0:
        return StripGeodesic(C=C, w=None, period=0.0, kind=VERTICAL)
    if abs(abs(C) - cmax) <= 1e-12 * cmax:
        return StripGeodesic(C=C, w=0.0, period=None, kind=HORIZONTAL)
    v_turn = math.acos(abs(C) / cmax)
    w = strip.y_of_v(v_turn)
    return StripGeodesic(C=C, w=w, period=period(strip, C), kind=OSCILLATING)


def period(strip: StripMetric, c: float) -> float:
    """Horizontal advance per oscillation of the geodesic with constant c.

    The integrand |c|/sqrt(eta^2 - c^2) has inverse-square-root endpoint
    singularities at the turning heights; eta^2 - c^2 has simple zeros
    there, so s = w sin(t) renders it bounded and plain quadrature applies.
    """
    cmax = strip.eta_max
    if not 0.0 < abs(c) < cmax:
        raise StripError("period needs 0 < |c| < eta(0)")
    v_turn = math.acos(abs(c) / cmax)
    w = strip.y_of_v(v_turn)

    def integrand(t):
        s = w * math.sin(t)
        e = strip.eta(s)
        val = e * e - c * c
        if val <= 0.0:
            # roundoff at the endpoints: fall back to the simple-zero model
            ep = strip.eta_prime(w)
            val = max(2.0 * abs(c) * abs(ep) * w * max(1.0 - abs(math.sin(t)), 0.0),
                      1e-300)
        return abs(c) * w * math.cos(t) / math.sqrt(val)

    val, err = quad(integrand, -0.5 * math.pi, 0.5 * math.pi,
                    epsabs=1e-11, epsrel=1e-11, limit=200)
    if err > 1e-9:
        raise StripError(f"period quadrature error estimate {err:.2e}")
    return 2.0 * val


def bounded_crossing_box(strip: StripMetric, C: float, m: int) -> float:
    """x-confinement bound (1 + m/2) Delta(C) for geodesics with <= m axis crossings."""
    if m < 1:
        raise StripError("m must be >= 1")
    return (1.0 + 0.5 * m) * period(strip, C)


def integrate_strip_geodesic(strip: StripMetric, C: float, x0: float = 0.0,
                             length: float = 20.0, y_start: float | None = None,
                             rtol: float = 1e-12, atol: float = 1e-12) -> dict:
    """Unit-speed geodesic with Clairaut constant C, sampled densely.

    State (x, y, theta) against metric arclength t: x' = cos(theta)/eta,
    y' = sin(theta)/eta, theta' = eta'(y) cos(theta)/eta^2; eta cos(theta)
    reproduces C identically and its drift measures integrator quality.
    Returns dict with arrays t, x, y, theta, clairaut and the turning
    instants (zeros of sin(theta)).
    """
    cmax = strip.eta_max
    if abs(C) >= cmax:
        raise StripError("need |C| < eta(0)")
    if C == 0.0:
        v0 = strip.v_of_y(y_start) if y_start is not None else \
            strip.v_of_y(-0.95 * strip.L)
        theta0 = 0.5 * math.pi
    else:
        v0 = strip.v_of_y(y_start) if y_start is not None else 0.0
        theta0 = math.acos(C / (cmax * math.cos(v0)))

    # integrate in the cross-section angle v, where eta(v) = 2 pi b cos v
    # and dy = sqrt(d^2 cos^2 v + b^2 sin^2 v) dv are closed forms
    b2, d2 = strip.b ** 2, strip.d ** 2
    two_pi_b = TWO_PI * strip.b

    def rhs(t, yv):
        x, v, th = yv
        cv, sv = math.cos(v), math.sin(v)
        e = two_pi_b * cv
        yv_jac = math.sqrt(d2 * cv * cv + b2 * sv * sv)
        ep = -two_pi_b * sv / yv_jac
        c, s = math.cos(th), math.sin(th)
        return (c / e, s / (e * yv_jac), ep * c / (e * e))

    def ev_turn(t, yv):
        return math.sin(yv[2])
    ev_turn.terminal = False

    sol = solve_ivp(rhs, (0.0, length), (x0, v0, theta0), method="DOP853",
                    rtol=rtol, atol=atol, dense_output=True, events=ev_turn,
                    max_step=0.05 * length)
    ts = np.linspace(0.0, sol.t[-1], 2000)
    xs, vs, ths = sol.sol(ts)
    ys = np.array([strip.y_of_v(float(v)) for v in vs])
    eta_s = two_pi_b * np.cos(vs)
    turn_t = sol.t_events[0]
    turn_states = sol.sol(turn_t) if len(turn_t) else np.zeros((3, 0))
    return {
        "t": ts, "x": xs, "y": ys, "v": vs, "theta": ths,
        "clairaut": eta_s * np.cos(ths),
        "turn_t": turn_t,
        "turn_x": turn_states[0],
        "turn_y": np.array([strip.y_of_v(float(v)) for v in turn_states[1]]),
    }


def measured_period(strip: StripMetric, C: float,
                    length: float | None = None) -> float:
    """x-advance between alternate turning points of an integrated geodesic.

    The default length budget covers a few oscillations: each one costs at
    most about 4 * eta(0) * L of metric arclength away from the horizontal
    limit.
    """
    if length is None:
        length = 10.0 * strip.eta_max * strip.L
    out = integrate_strip_geodesic(strip, C, length=length)
    tx = out["turn_x"]
    if len(tx) < 3:
        raise StripError("geodesic too short to measure a full period")
    return float(tx[2] - tx[0])


def period_table(b: float, d: float, n: int = 12,
                 c_lo_frac: float = 1e-3, c_hi_frac: float = 0.95) -> list:
    """Rows (c/eta(0), w, Delta) over a log-spaced grid of Clairaut constants."""
    strip = StripMetric.build(b, d)
    fracs = np.geomspace(c_lo_frac, c_hi_frac, n)
    rows = []
    for fr in fracs:
        c = fr * strip.eta_max
        g = classify(strip, c)
        rows.append((float(fr), float(g.w), float(g.period)))
    return rows
