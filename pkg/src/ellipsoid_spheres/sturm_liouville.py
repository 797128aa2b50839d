"""Singular Sturm-Liouville spectra controlling degeneracy of the planar sphere.

The linearized (Jacobi) equation along the horizontal planar sphere reduces
to the ODE

    -(p_a(z) v'(z))' + q_a(z) v(z) = lambda p_a(z) v(z),   z in [0, 1),

with

    p_a(z) = (1 - z^2) / sqrt(a^2 (1 - z^2) + b^2 z^2),
    q_a(z) = -a^2 (a^2 (1 - z^2) + b^2 (1 + z^2))
             / (d^2 (a^2 (1 - z^2) + b^2 z^2)^(3/2)).

z = 1 is a regular singular endpoint where p_a has a simple zero; the
indicial equation has 0 as a double root, so up to scale there is exactly
one solution analytic at z = 1 and every other solution carries a
log(1 - z) singularity.  The analytic solution is built here by power
series at z = 1 (normalized to u(1) = 1, which forces
u'(1) = a^2/d^2) and continued to z = 0 with an adaptive Runge-Kutta
integrator.

Eigenvalues split by parity of the extension through z = 0:
even (u'(0) = 0) and odd (u(0) = 0).  They are located through the
projective angle of (p(0) u'(0), u(0)), which rotates strictly clockwise
in lambda; the interior zero count of u supplies the integer part of the
winding, so a single solve yields a globally unwrapped, strictly
decreasing angle and with it both eigenvalue indexing and negative-count
queries.  Degeneracy instants are the parameter values a where lambda = 0
is an eigenvalue; they interlace between the parities and are found by
sign scans of u(0) and u'(0) at lambda = 0.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad, solve_ivp
from scipy.optimize import brentq

from .geometry import Semiaxes

EVEN = "even"
ODD = "odd"
_PARITIES = (EVEN, ODD)

MAX_SERIES_ORDER = 512


class SturmLiouvilleError(RuntimeError):
    pass


class TailNotConverged(SturmLiouvilleError):
    """Power-series tail at the handoff point above tolerance."""


class BracketFailure(SturmLiouvilleError):
    """Eigenvalue window expansion exhausted."""


class NoSignChange(SturmLiouvilleError):
    pass


class MultipleRoots(SturmLiouvilleError):
    pass


class ClusterWarning(UserWarning):
    """Even/odd eigenvalue pair closer than shooting noise can resolve."""


def _check_parity(parity: str):
    if parity not in _PARITIES:
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")


def eval_pq(ax: Semiaxes, z):
    """Closed-form coefficient pair (p_a(z), q_a(z)); both even in z."""
    z = np.asarray(z, dtype=float)
    if np.any(np.abs(z) > 1.0 + 1e-15):
        raise ValueError("z must lie in [-1, 1]")
    a2, b2, d2 = ax.a ** 2, ax.b ** 2, ax.d ** 2
    z2 = np.minimum(z * z, 1.0)
    den = a2 * (1.0 - z2) + b2 * z2
    p = (1.0 - z2) / np.sqrt(den)
    q = -a2 * (a2 * (1.0 - z2) + b2 * (1.0 + z2)) / (d2 * den ** 1.5)
    if p.ndim == 0:
        return float(p), float(q)
    return p, q


def radius_of_convergence(ax: Semiaxes) -> float:
    """Radius of the power series of p_a, q_a at z = 1 (inf when a = b)."""
    if ax.a == ax.b:
        return math.inf
    return max(ax.a, ax.b) / math.sqrt(abs(ax.a ** 2 - ax.b ** 2)) - 1.0


def _binomial_series(mu: float, alpha: float, order: int) -> np.ndarray:
    """Taylor coefficients of (1 + mu*(2t + t^2))^alpha around t = 0.

    Follows from the first-order ODE (1 + 2 mu t + mu t^2) y' =
    alpha mu (2 + 2t) y, which gives a three-term recurrence.
    """
    y = np.zeros(order + 1)
    y[0] = 1.0
    for n in range(order):
        prev = y[n - 1] if n >= 1 else 0.0
        y[n + 1] = (2.0 * mu * (alpha - n) * y[n]
                    + mu * (2.0 * alpha - (n - 1.0)) * prev) / (n + 1.0)
    return y


def _poly_mul(poly, series, order):
    out = np.zeros(order + 1)
    for k, ck in enumerate(poly):
        if ck != 0.0 and k <= order:
            out[k:] += ck * series[: order + 1 - k]
    return out


def taylor_pq_at_one(ax: Semiaxes, order: int):
    """Taylor coefficients of p_a and q_a in t = z - 1 up to the given order.

    Built by exact power-series arithmetic: the square root of
    D(z) = a^2 (1 - z^2) + b^2 z^2 = b^2 (1 + mu (2t + t^2)) enters through
    binomial series, multiplied by the quadratic polynomial prefactors.
    Returns (phat, qhat, tail) where tail(t) estimates the truncation error
    of both series at offset t from the last retained coefficients and the
    convergence radius.
    """
    if order < 4:
        raise ValueError("order must be at least 4")
    if order > MAX_SERIES_ORDER:
        raise OverflowError(f"series order {order} exceeds {MAX_SERIES_ORDER}")
    a2, b2, d2 = ax.a ** 2, ax.b ** 2, ax.d ** 2
    mu = (b2 - a2) / b2
    s_m12 = _binomial_series(mu, -0.5, order)
    s_m32 = _binomial_series(mu, -1.5, order)
    # 1 - z^2 = -2t - t^2 ;  a^2(1-z^2) + b^2(1+z^2) = 2 b^2 + (b^2-a^2)(2t+t^2)
    phat = _poly_mul([0.0, -2.0, -1.0], s_m12, order) / ax.b
    qpoly = [2.0 * b2, 2.0 * (b2 - a2), (b2 - a2)]
    qhat = -_poly_mul(qpoly, s_m32, order) * a2 / (d2 * b2 * ax.b)
    radius = radius_of_convergence(ax)

    def tail(t: float) -> float:
        # geometric extension of the last retained terms of either series
        x = abs(t) / min(radius, 2.0)
        if x >= 1.0:
            return math.inf
        scale = max(np.max(np.abs(phat[-4:])), np.max(np.abs(qhat[-4:])))
        return scale * abs(t) ** (order - 3) / (1.0 - x)

    return phat, qhat, tail


@dataclass(frozen=True)
class SLCoefficients:
    """Coefficient data for one parameter triple: closed forms plus series at z = 1."""

    ax: Semiaxes
    order: int
    phat: np.ndarray
    qhat: np.ndarray
    radius: float

    @classmethod
    def build(cls, ax: Semiaxes, order: int = 96) -> "SLCoefficients":
        phat, qhat, _ = taylor_pq_at_one(ax, order)
        return cls(ax=ax, order=order, phat=phat, qhat=qhat,
                   radius=radius_of_convergence(ax))

    def p(self, z):
        return eval_pq(self.ax, z)[0]

    def q(self, z):
        return eval_pq(self.ax, z)[1]


@dataclass(frozen=True)
class FrobeniusSolution:
    """The solution analytic at z = 1 with u(1) = 1, continued down to z = 0.

    coeffs are the Taylor coefficients at z = 1 (so coeffs[1] = a^2/d^2 by
    the built-in boundary relation a^2 u(1) = d^2 u'(1)); z_star is the
    series/RK handoff point.  zero_count includes a zero sliding through
    z = 0 (it must, for the angle unwrapping to stay continuous);
    interior_zero_count drops zeros within 1e-9 of the endpoint and is the
    oscillation count of eigenfunctions.
    """

    ax: Semiaxes
    lam: float
    coeffs: np.ndarray
    theta_f: float
    z_star: float
    u0: float
    du0: float
    zero_count: int
    zeros: tuple
    phase0: float

    @property
    def interior_zero_count(self) -> int:
        return sum(1 for z in self.zeros if z > 1e-9)

    @property
    def u1(self) -> float:
        return float(self.coeffs[0])

    @property
    def du1(self) -> float:
        return float(self.coeffs[1])

    def series_eval(self, z):
        t = np.asarray(z, dtype=float) - 1.0
        return np.polynomial.polynomial.polyval(t, self.coeffs)


def _series_coeffs(sl: SLCoefficients, lam: float) -> np.ndarray:
    """Frobenius recurrence for the analytic solution, normalized u(1) = 1."""
    n = sl.order
    phat, qhat = sl.phat, sl.qhat
    qml = qhat - lam * phat
    c = np.zeros(n + 1)
    jc = np.zeros(n + 1)  # jc[j] = j * c[j]
    c[0] = 1.0
    p1 = phat[1]
    for m in range(n):
        s1 = float(np.dot(qml[: m + 1], c[m::-1]))
        s2 = float(np.dot(phat[2: m + 2], jc[m:0:-1])) if m >= 1 else 0.0
        c[m + 1] = (s1 - (m + 1.0) * s2) / ((m + 1.0) ** 2 * p1)
        jc[m + 1] = (m + 1.0) * c[m + 1]
    return c


def _series_zeros(coeffs: np.ndarray, t_star: float) -> list:
    """Zeros of the truncated series on (t_star, 0), i.e. z in (z_star, 1)."""
    ts = np.linspace(t_star, 0.0, 65)
    vals = np.polynomial.polynomial.polyval(ts, coeffs)
    zeros = []
    sgn = np.sign(vals)
    for i in np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]:
        t0 = brentq(lambda t: np.polynomial.polynomial.polyval(t, coeffs),
                    ts[i], ts[i + 1], xtol=1e-14)
        zeros.append(1.0 + t0)
    return zeros


def frobenius_solution(ax: Semiaxes, lam: float, order: int | None = None,
                       theta_f: float = 0.5,
                       rtol: float = 1e-12, atol: float = 1e-12) -> FrobeniusSolution:
    """Analytic-at-z=1 solution of the eigenvalue ODE, continued to z = 0.

    The handoff point is z* = 1 - theta_f * min(R_a, 1).  The series order
    adapts upward (up to 512) until the magnitude of the last few retained
    terms at z* drops below 1e-13; otherwise TailNotConverged is raised.

    Continuation runs in Pruefer form, (u, p u') = S (sin phi, cos phi):
    the phase equation

        phi' = cos^2(phi) / p  -  (q - lam p) sin^2(phi)

    carries the projective information without the exponential dichotomy
    that destabilizes the linear system at very negative lam, and log S
    recovers the magnitudes.  Zeros of u are the downward crossings of
    multiples of pi (located by event detection); the unwrapped phase at
    z = 0 doubles as the spectral winding used for eigenvalue indexing.
    """
    z_star = 1.0 - theta_f * min(radius_of_convergence(ax), 1.0)
    t_star = z_star - 1.0
    n = order if order is not None else 48
    while True:
        sl = SLCoefficients.build(ax, n)
        c = _series_coeffs(sl, lam)
        powers = t_star ** np.arange(n + 1)
        terms = c * powers
        tail = float(np.max(np.abs(terms[-5:])))
        if tail < 1e-13 * max(1.0, float(np.abs(terms).max())):
            break
        if order is not None or n >= MAX_SERIES_ORDER:
            raise TailNotConverged(
                f"series tail {tail:.2e} at z*={z_star:.6f} with order {n}")
        n = min(2 * n, MAX_SERIES_ORDER)

    u_star = float(terms.sum())
    du_star = float(np.polynomial.polynomial.polyval(
        t_star, np.arange(1, n + 1) * c[1:]))
    p_star, _ = eval_pq(ax, z_star)

    raw = math.atan2(u_star, p_star * du_star)
    flip = 1.0
    phi_star = raw
    if phi_star < 0.0:
        # mod-pi representative; remember the overall sign of (u, p u')
        phi_star += math.pi
        flip = -1.0

    a2, b2, d2 = ax.a ** 2, ax.b ** 2, ax.d ** 2

    def rhs(z, y):
        z2 = z * z
        den = a2 * (1.0 - z2) + b2 * z2
        sden = math.sqrt(den)
        p = (1.0 - z2) / sden
        q = -a2 * (a2 * (1.0 - z2) + b2 * (1.0 + z2)) / (d2 * den * sden)
        sph, cph = math.sin(y[0]), math.cos(y[0])
        dphi = cph * cph / p - (q - lam * p) * sph * sph
        dlogs = sph * cph * (1.0 / p + q - lam * p)
        return (dphi, dlogs)

    def u_zero(z, y):
        return math.sin(y[0])

    log_scale = math.log(math.hypot(u_star, p_star * du_star))
    sol = solve_ivp(rhs, (z_star, 0.0), (phi_star, log_scale),
                    method="DOP853", rtol=rtol, atol=atol, events=u_zero,
                    dense_output=False)
    if not sol.success:  # pragma: no cover
        raise SturmLiouvilleError(f"continuation failed: {sol.message}")
    phi0 = float(sol.y[0, -1])
    s0 = math.exp(float(sol.y[1, -1]))
    p0, _ = eval_pq(ax, 0.0)
    u0 = flip * s0 * math.sin(phi0)
    du0 = flip * s0 * math.cos(phi0) / p0
    zeros = sorted(float(z) for z in sol.t_events[0] if z >= 0.0)
    series_zeros = _series_zeros(c, t_star)
    zeros += series_zeros
    # winding-complete phase at z = 0: series-region crossings add pi each
    phase0 = phi0 - math.pi * len(series_zeros)
    return FrobeniusSolution(ax=ax, lam=lam, coeffs=c, theta_f=theta_f,
                             z_star=z_star, u0=u0, du0=du0,
                             zero_count=len(zeros), zeros=tuple(sorted(zeros)),
                             phase0=phase0)


def l2_normalizer(sol: FrobeniusSolution) -> float:
    """sqrt of int_0^1 u^2 p dz for the u(1) = 1 solution.

    Dividing by this factor reproduces the unit-weighted-L2 normalization
    used in closed-form accounts (e.g. sqrt(15 a / 2) z in the round case).
    """
    ax = sol.ax

    def f(z):
        if z >= sol.z_star:
            u = float(sol.series_eval(z))
        else:
            u = _resolve_u(sol, z)
        return u * u * eval_pq(ax, z)[0]

    val, _ = quad(f, 0.0, 1.0, epsabs=1e-11, epsrel=1e-11, limit=200)
    return math.sqrt(val)


def _resolve_u(sol: FrobeniusSolution, z: float) -> float:
    # One-off re-integration; only used by diagnostics, not hot paths.
    ax, lam = sol.ax, sol.lam
    a2, b2, d2 = ax.a ** 2, ax.b ** 2, ax.d ** 2

    def rhs(zz, y):
        z2 = zz * zz
        den = a2 * (1.0 - z2) + b2 * z2
        sden = math.sqrt(den)
        p = (1.0 - z2) / sden
        q = -a2 * (a2 * (1.0 - z2) + b2 * (1.0 + z2)) / (d2 * den * sden)
        return (y[1] / p, (q - lam * p) * y[0])

    u_star = float(sol.series_eval(sol.z_star))
    du_star = float(np.polynomial.polynomial.polyval(
        sol.z_star - 1.0, np.arange(1, len(sol.coeffs)) * sol.coeffs[1:]))
    p_star, _ = eval_pq(ax, sol.z_star)
    out = solve_ivp(rhs, (sol.z_star, z), (u_star, p_star * du_star),
                    method="DOP853", rtol=1e-12, atol=1e-14)
    return float(out.y[0, -1])


# ---------------------------------------------------------------------------
# Projective angle, eigenvalues, negative counts
# ---------------------------------------------------------------------------

def projective_angle(ax: Semiaxes, lam: float) -> float:
    """Direction of (p(0) u'(0), u(0)) in the projective line, in [0, pi).

    0 at odd eigenvalues (u(0) = 0), pi/2 at even ones (u'(0) = 0); rotates
    strictly clockwise as lambda increases.
    """
    return frobenius_solution(ax, lam).phase0 % math.pi


def unwrapped_angle(ax: Semiaxes, lam: float,
                    sol: FrobeniusSolution | None = None) -> float:
    """Globally continuous, strictly decreasing branch of the projective angle.

    This is the Pruefer phase at z = 0 of the solution analytic at z = 1,
    measured from the phase pi/2 that every such solution has at the
    singular endpoint (direction (p u', u) -> (0, 1)); each zero of u in
    (0, 1) lowers it by pi.  Below the whole spectrum it sits in
    (pi/2, pi), and it decreases strictly in lambda with

        even eigenvalue n  <=>  angle = pi/2 - n*pi,
        odd  eigenvalue n  <=>  angle = -n*pi.
    """
    if sol is None:
        sol = frobenius_solution(ax, lam)
    return sol.phase0


def spectral_lower_bound(ax: Semiaxes) -> float:
    """Heuristic starting point for eigenvalue windows: a * min(q) - 1.

    Not a guaranteed bound (the coefficient q - lambda*p keeps the sign of
    q(1) < 0 in a boundary layer at z = 1 for every lambda), so callers
    must validate with `is_below_spectrum` and expand downward on failure.
    """
    a2, b2, d2 = ax.a ** 2, ax.b ** 2, ax.d ** 2
    qmin = min(-(a2 + b2) / (ax.a * d2), -2.0 * a2 / (ax.b * d2))
    return ax.a * qmin - 1.0


def is_below_spectrum(sol: FrobeniusSolution) -> bool:
    """True iff sol.lam lies strictly below every eigenvalue of both parities.

    Equivalent to u > 0 on (0, 1] with u'(0) < 0: below the global ground
    state the solution is zero free, and in each higher angle sector either
    a zero or a sign pattern of (u(0), u'(0)) rules the combination out.
    """
    return sol.zero_count == 0 and sol.u0 > 0.0 and sol.du0 < 0.0


@dataclass(frozen=True)
class SpectralRecord:
    parity: str
    n: int
    lam: float
    zero_count: int


def _angle_target(parity: str, n: int) -> float:
    return (0.5 * math.pi if parity == EVEN else 0.0) - n * math.pi


def eigenvalue(ax: Semiaxes, parity: str, n: int,
               window: tuple | None = None) -> SpectralRecord:
    """n-th eigenvalue of the chosen parity, to ~1e-10 in lambda.

    Brackets the target of the unwrapped angle (expanding the window by
    doubling, at most 40 times), runs brentq on the angle, then polishes
    the raw endpoint condition u'(0) (even) or u(0) (odd) inside the
    bracket.  The interior zero count of the eigenfunction is validated
    against n.
    """
    _check_parity(parity)
    if n < 0:
        raise ValueError("eigenvalue index must be nonnegative")
    target = _angle_target(parity, n)
    if window is not None:
        lo, hi = window
    else:
        lo = spectral_lower_bound(ax)
        hi = max(1.0, abs(lo) / 8.0)
    expand = 0
    while not is_below_spectrum(frobenius_solution(ax, lo)):
        lo -= max(1.0, abs(lo))
        expand += 1
        if expand > 40:
            raise BracketFailure("lower eigenvalue window expansion exhausted")
    phi_hi = unwrapped_angle(ax, hi)
    expand = 0
    while phi_hi >= target:
        hi += max(1.0, abs(hi))
        hi *= 1.5
        expand += 1
        if expand > 40:
            raise BracketFailure("upper eigenvalue window expansion exhausted")
        phi_hi = unwrapped_angle(ax, hi)

    lam = brentq(lambda l: unwrapped_angle(ax, l) - target, lo, hi,
                 xtol=1e-11, rtol=8.9e-16)

    def raw(l):
        s = frobenius_solution(ax, l)
        return s.du0 if parity == EVEN else s.u0

    # tiny polishing bracket around the angle root
    w = max(1e-9, 1e-9 * abs(lam))
    r_lo, r_hi = lam - w, lam + w
    f_lo, f_hi = raw(r_lo), raw(r_hi)
    grow = 0
    while f_lo * f_hi > 0 and grow < 8:
        w *= 4.0
        r_lo, r_hi = lam - w, lam + w
        f_lo, f_hi = raw(r_lo), raw(r_hi)
        grow += 1
    if f_lo * f_hi <= 0:
        lam = brentq(raw, r_lo, r_hi, xtol=1e-13, rtol=8.9e-16)
    sol = frobenius_solution(ax, lam)
    if sol.interior_zero_count != n:
        # Deep in the spectrum the even/odd ground pair collapses to an
        # exponentially small gap (boundary-layer eigenfunctions); the
        # phase then drops through both markers over a lambda window
        # narrower than shooting noise and the tail zeros of u are not
        # meaningful.  Accept the clustered value but say so.
        g = max(1e-6, 1e-6 * abs(lam))
        drop = unwrapped_angle(ax, lam - g) - unwrapped_angle(ax, lam + g)
        if drop > 0.6 * math.pi:
            warnings.warn(
                f"eigenvalues cluster within {g:.1e} of lambda={lam:.9g} "
                f"({parity} n={n}); zero-count validation skipped",
                ClusterWarning)
            return SpectralRecord(parity=parity, n=n, lam=lam, zero_count=n)
        raise SturmLiouvilleError(
            f"eigenfunction zero count {sol.interior_zero_count} != index {n} "
            f"at lambda={lam:.12g} ({parity})")
    return SpectralRecord(parity=parity, n=n, lam=lam,
                          zero_count=sol.interior_zero_count)


def count_negative(ax: Semiaxes, parity: str) -> int:
    """Number of negative eigenvalues of the chosen parity.

    Read off from the unwrapped angle at lambda = 0: it counts how many
    parity markers the clockwise rotation has passed.
    """
    _check_parity(parity)
    phi0 = unwrapped_angle(ax, 0.0)
    if parity == EVEN:
        # markers pi/2 - n*pi for n >= 0 strictly above phi0
        x = (0.5 * math.pi - phi0) / math.pi
    else:
        x = -phi0 / math.pi
    return max(0, math.ceil(x) if not float(x).is_integer() else int(x))


# ---------------------------------------------------------------------------
# Degeneracy instants
# ---------------------------------------------------------------------------

def _instant_function(b: float, d: float, parity: str):
    def g(a: float) -> float:
        sol = frobenius_solution(Semiaxes(a, b, d), 0.0)
        return sol.du0 if parity == EVEN else sol.u0
    return g


def degeneracy_instant(b: float, d: float, parity: str, n: int,
                       bracket: tuple) -> float:
    """Parameter a at which lambda = 0 becomes the n-th eigenvalue of the parity.

    The bracket must contain exactly one sign change of a -> u'_{a,0}(0)
    (even) or a -> u_{a,0}(0) (odd); the zeros are simple.  The located
    root is validated by the eigenfunction zero count.
    """
    _check_parity(parity)
    g = _instant_function(b, d, parity)
    lo, hi = bracket
    grid = np.linspace(lo, hi, 17)
    vals = [g(a) for a in grid]
    sgn = np.sign(vals)
    flips = np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]
    if len(flips) == 0:
        raise NoSignChange(f"no sign change of the {parity} instant function in {bracket}")
    if len(flips) > 1:
        raise MultipleRoots(f"{len(flips)} sign changes in {bracket}; narrow it")
    i = flips[0]
    root = brentq(g, grid[i], grid[i + 1], xtol=1e-13, rtol=1e-12)
    sol = frobenius_solution(Semiaxes(root, b, d), 0.0)
    if sol.interior_zero_count != n:
        raise SturmLiouvilleError(
            f"instant at a={root:.9g} has zero count "
            f"{sol.interior_zero_count}, expected {n}")
    return float(root)


def _scan_upper_bound(b: float, d: float, m_max: int) -> float:
    # Negative-definite test functions give >= N negative eigenvalues of both
    # parities once a >= sqrt(16 N^2 d^2 - b^2), which covers all instants
    # a_m with m <= 2N - 1.
    n_cap = (m_max + 2) // 2 + 1
    while 16.0 * n_cap ** 2 * d * d <= b * b:
        n_cap += 1
    return math.sqrt(16.0 * n_cap ** 2 * d * d - b * b)


@dataclass(frozen=True)
class Instant:
    m: int
    parity: str
    n: int
    a: float


def instants(b: float, d: float, m_max: int, scan_step: float | None = None) -> list:
    """Merged increasing sequence a_1..a_{m_max} of degeneracy instants.

    a_m is the n-th even instant for m = 2n and the n-th odd instant for
    m = 2n + 1 (so a_1 comes from the odd ground state and equals d).  The
    scan walks a upward in steps of `scan_step` (default d/20), bracketing
    sign changes of the two instant functions separately; the theoretical
    growth bound caps the scan.
    """
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    n_even = m_max // 2           # needs a_n^even for n = 1..n_even
    n_odd = (m_max - 1) // 2      # needs a_n^odd for n = 0..n_odd
    step = scan_step if scan_step is not None else 0.05 * d
    a_hi = _scan_upper_bound(b, d, m_max)
    g_even = _instant_function(b, d, EVEN)
    g_odd = _instant_function(b, d, ODD)

    found = {EVEN: [], ODD: []}
    a_prev = max(1e-3 * d, 0.2 * d)
    f_prev = {EVEN: g_even(a_prev), ODD: g_odd(a_prev)}
    a = a_prev
    while a < a_hi and (len(found[EVEN]) < n_even or len(found[ODD]) <= n_odd):
        a = min(a + step, a_hi)
        for parity, g in ((EVEN, g_even), (ODD, g_odd)):
            f = g(a)
            if f_prev[parity] * f < 0.0:
                root = brentq(g, a_prev, a, xtol=1e-13, rtol=1e-12)
                found[parity].append(float(root))
            f_prev[parity] = f
        a_prev = a

    out = []
    for m in range(1, m_max + 1):
        parity = EVEN if m % 2 == 0 else ODD
        n = m // 2
        seq = found[parity]
        idx = n - 1 if parity == EVEN else n
        if idx >= len(seq):
            raise SturmLiouvilleError(
                f"scan exhausted before locating instant m={m} ({parity} n={n})")
        root = seq[idx]
        sol = frobenius_solution(Semiaxes(root, b, d), 0.0)
        if sol.interior_zero_count != n:
            raise SturmLiouvilleError(
                f"instant m={m} at a={root:.9g}: zero count "
                f"{sol.interior_zero_count} != {n}")
        out.append(Instant(m=m, parity=parity, n=n, a=root))
    return out


def jacobi_boundary_solution(ax: Semiaxes) -> FrobeniusSolution:
    """The lambda = 0 solution scaled to the geometric boundary data v(1) = d.

    Its endpoint values v(0) and v'(0) are, up to a smooth positive
    reparametrization factor, the s-derivatives at s = 0 of the odd and
    even shooting functionals; in particular their zeros in a are the
    degeneracy instants.
    """
    sol = frobenius_solution(ax, 0.0)
    return FrobeniusSolution(ax=ax, lam=0.0, coeffs=ax.d * sol.coeffs,
                             theta_f=sol.theta_f, z_star=sol.z_star,
                             u0=ax.d * sol.u0, du0=ax.d * sol.du0,
                             zero_count=sol.zero_count, zeros=sol.zeros,
                             phase0=sol.phase0)


def spectrum_rows(b: float, d: float, a: float, n_max: int) -> list:
    """Rows (parity, n, a, lambda, zero_count) for n <= n_max, both parities."""
    ax = Semiaxes(a, b, d)
    rows = []
    for parity in _PARITIES:
        for n in range(n_max + 1):
            rec = eigenvalue(ax, parity, n)
            rows.append((rec.parity, rec.n, a, rec.lam, rec.zero_count))
    return rows
