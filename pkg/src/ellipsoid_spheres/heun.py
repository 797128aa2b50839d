"""Degeneracy instants through the Heun continued-fraction condition.

The lambda = 0 equation transforms, by a linear fractional change of
variables moving its regular singular points to {0, 1, zeta, infinity},
into Heun's equation.  The bounded solution exists exactly when the Heun
function is analytic at z = 1, which happens when the accessory parameter
q solves the infinite continued fraction

    q = zeta*gamma*P1 / (Q1 + q - R1*P2 / (Q2 + q - R2*P3 / (...)))

with

    P_j = (j - 1 + alpha)(j - 1 + beta),
    Q_j = j ((j - 1 + gamma)(1 + zeta) + zeta*delta + epsilon),
    R_j = zeta (j + 1)(j + gamma).

Here all parameters are explicit functions of the semiaxes (gamma = 1/2
for the even problem, 3/2 for the odd one; delta = d^2;
zeta = a^2/(a^2 - b^2)), so the instants are roots in a of the scalar
residual q(a) - CF(q(a); a).  This route shares no code with the
Sturm-Liouville solver and cross-validates it.

The reduction degenerates at a = b (zeta blows up; the Heun functions
become confluent), and the residual acquires a sign-flipping pole there;
scans skip a small window around a = b and report it.  The continued
fraction characterizes analyticity at w = 1 of the series around w = 0,
which requires the third singular point to lie outside the closed unit
disk: |zeta| > 1, i.e. a > b/sqrt(2).  Instants below that threshold
(only the trivial first instant a = d can be there) are not checkable by
this route and are reported as skipped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import Semiaxes

CONFLUENT_TOL = 1e-8


class HeunError(RuntimeError):
    pass


class ConfluentCase(HeunError):
    """a == b: the linear fractional reduction degenerates."""


class DepthExhausted(HeunError):
    pass


class PoleHit(HeunError):
    """An intermediate continued-fraction denominator vanished."""


class NoSignChange(HeunError):
    pass


@dataclass(frozen=True)
class HeunParams:
    zeta: float
    q: float
    alpha: float
    beta: float
    gamma: float
    delta: float
    epsilon: float


def params_from(ax: Semiaxes, parity: str) -> HeunParams:
    """Heun parameters of the lambda = 0 problem for the chosen parity.

    Substituting v(z) = (D(z)/a^2)^(3/2) * z^sigma * u(z^2), sigma = 0
    (even) or 1 (odd), with D = a^2(1-z^2) + b^2 z^2, turns the equation
    into Heun form in w = z^2 with singular points {0, 1, zeta, inf}:

        gamma = 1/2 + sigma,  delta = 1,  epsilon = 5/2,
        alpha, beta = (3 + sigma)/2 +- a/(2d),

    and the accessory parameter written below.  delta = 1 reflects the
    double indicial root at z = 1, so the bounded solution corresponds to
    u analytic at w = 1.  (Some closed-form accounts print d-dependent
    exponents for these parameters; those agree with the above exactly at
    d = 1 and break the indicial structure otherwise.  The values here are
    rederived symbolically and validated against the Sturm-Liouville side
    for unequal semiaxes.)
    """
    if parity not in ("even", "odd"):
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")
    if ax.is_confluent(CONFLUENT_TOL):
        raise ConfluentCase(f"a = {ax.a} too close to b = {ax.b}")
    a2, b2, d2 = ax.a ** 2, ax.b ** 2, ax.d ** 2
    zeta = a2 / (a2 - b2)
    half_ratio = ax.a / (2.0 * ax.d)
    if parity == "even":
        gamma = 0.5
        alpha = 1.5 + half_ratio
        beta = 1.5 - half_ratio
        q = (3.0 * a2 * d2 - 3.0 * b2 * d2 - a2 * a2 - a2 * b2) / (4.0 * d2 * (a2 - b2))
    else:
        gamma = 1.5
        alpha = 2.0 + half_ratio
        beta = 2.0 - half_ratio
        q = (10.0 * a2 * d2 - 8.0 * b2 * d2 - a2 * a2 - a2 * b2) / (4.0 * d2 * (a2 - b2))
    delta = 1.0
    epsilon = alpha + beta - gamma - delta + 1.0
    return HeunParams(zeta=zeta, q=q, alpha=alpha, beta=beta,
                      gamma=gamma, delta=delta, epsilon=epsilon)


def _cf_truncated(par: HeunParams, depth: int) -> float:
    """Right-hand side of the continued fraction cut at the given depth.

    Backward recurrence with zero tail: numerically stable for this
    Jacobi-type fraction, unlike forward evaluation.
    """
    z, q = par.zeta, par.q
    al, be, ga, de, ep = par.alpha, par.beta, par.gamma, par.delta, par.epsilon

    def P(j):
        return (j - 1.0 + al) * (j - 1.0 + be)

    def Q(j):
        return j * ((j - 1.0 + ga) * (1.0 + z) + z * de + ep)

    def R(j):
        return z * (j + 1.0) * (j + ga)

    x = 0.0
    for j in range(depth, 0, -1):
        den = Q(j + 1) + q - x
        if abs(den) < 1e-300:
            raise PoleHit(f"vanishing denominator at level {j}")
        x = R(j) * P(j + 1) / den
    den = Q(1) + q - x
    if abs(den) < 1e-300:
        raise PoleHit("vanishing outermost denominator")
    return z * ga * P(1) / den


def cf_eval(par: HeunParams, depth: int | None = None, tol: float = 1e-12) -> float:
    """Continued-fraction value, with adaptive depth doubling when depth is None.

    Doubles from 64 until two successive truncations agree to `tol`
    (relative to max(1, |value|)); gives up at depth 2**14.
    """
    if depth is not None:
        if depth < 8:
            raise ValueError("depth must be at least 8")
        return _cf_truncated(par, depth)
    d = 64
    prev = _cf_truncated(par, d)
    while d < 2 ** 14:
        d *= 2
        cur = _cf_truncated(par, d)
        if abs(cur - prev) <= tol * max(1.0, abs(cur)):
            return cur
        prev = cur
    raise DepthExhausted(f"no {tol} agreement up to depth 2^14")


def residual(b: float, d: float, parity: str, a: float) -> float:
    """q(a) - CF(q(a); a); instants of the parity are among its roots."""
    par = params_from(Semiaxes(a, b, d), parity)
    return par.q - cf_eval(par)


def _refine_root(f, lo: float, hi: float, f_lo: float, f_hi: float,
                 xtol: float = 1e-12):
    """Bisection guarded against poles: returns (root, f(root)) or None.

    A sign change through a pole narrows to a point where |f| stays large;
    those candidates are rejected by the caller via the residual value.
    """
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo < xtol * max(1.0, abs(mid)):
            break
        try:
            f_mid = f(mid)
        except (PoleHit, ConfluentCase, DepthExhausted):
            # nudge off the bad abscissa
            mid = mid + 0.1 * (hi - lo) * 1e-3
            try:
                f_mid = f(mid)
            except (PoleHit, DepthExhausted):
                # the interval pinches a pole; report the midpoint with a
                # large residual so the caller classifies it as a pole
                return mid, math.inf
        if f_lo * f_mid <= 0.0:
            hi, f_hi = mid, f_mid
        else:
            lo, f_lo = mid, f_mid
    root = 0.5 * (lo + hi)
    return root, f(root)


def heun_instants(b: float, d: float, parity: str, brackets,
                  res_tol: float = 1e-6) -> list:
    """Roots in a of the continued-fraction residual, one per bracket.

    Each bracket must exclude a = b and change the sign of the residual.
    Sign changes that bisect onto a pole (residual not small at the
    located point) raise PoleHit; genuine roots are polished to 1e-8
    relative.
    """
    out = []
    f = lambda a: residual(b, d, parity, a)
    for lo, hi in brackets:
        if lo < b < hi:
            raise ConfluentCase(f"bracket ({lo}, {hi}) straddles a = b = {b}")
        f_lo, f_hi = f(lo), f(hi)
        if f_lo * f_hi > 0.0:
            raise NoSignChange(f"no residual sign change on ({lo}, {hi}) [{parity}]")
        root, f_root = _refine_root(f, lo, hi, f_lo, f_hi)
        scale = max(abs(f_lo), abs(f_hi))
        if abs(f_root) > res_tol * max(1.0, scale):
            raise PoleHit(
                f"sign change at a={root:.9g} is a pole (residual {f_root:.3e})")
        out.append(root)
    return out


def cf_valid_from(b: float) -> float:
    """Smallest a at which the continued-fraction criterion applies."""
    return b / math.sqrt(2.0)


def scan_roots(b: float, d: float, parity: str, a_lo: float, a_hi: float,
               step: float = 0.02, confluent_window: float = 1e-3) -> list:
    """All residual roots in [a_lo, a_hi], skipping the confluent window.

    Returns a list of dicts {a, pole: bool}; pole entries mark sign changes
    whose bisection landed on a non-small residual (the a = b pole of the
    reduction always produces one such flip, reported but not a root).
    The scan starts no lower than the validity threshold a = b/sqrt(2).
    """
    a_lo = max(a_lo, cf_valid_from(b) * (1.0 + 1e-9))
    if a_hi <= a_lo:
        return []
    roots = []
    segments = []
    if a_lo < b - confluent_window and a_hi > b + confluent_window:
        segments = [(a_lo, b - confluent_window), (b + confluent_window, a_hi)]
    else:
        segments = [(a_lo, a_hi)]
    def f(a):
        try:
            return residual(b, d, parity, a)
        except (PoleHit, DepthExhausted):
            return None

    for s_lo, s_hi in segments:
        if s_hi <= s_lo:
            continue
        n = max(2, int(math.ceil((s_hi - s_lo) / step)))
        prev_a = s_lo
        prev_f = f(prev_a)
        for i in range(1, n + 1):
            a = s_lo + (s_hi - s_lo) * i / n
            cur = f(a)
            if cur is None:
                # non-converging truncations sit on top of a pole
                roots.append({"a": a, "pole": True})
                prev_a, prev_f = a, None
                continue
            if prev_f is not None and prev_f * cur < 0.0:
                root, f_root = _refine_root(
                    lambda x: residual(b, d, parity, x), prev_a, a, prev_f, cur)
                scale = max(abs(prev_f), abs(cur))
                roots.append({"a": root,
                              "pole": not (abs(f_root) <= 1e-6 * max(1.0, scale))})
            prev_a, prev_f = a, cur
    return roots


def crosscheck(b: float, d: float, m_max: int, confluent_window: float = 1e-3,
               sl_instants=None) -> dict:
    """Pair Sturm-Liouville instants with continued-fraction roots.

    Returns {"pairs": [{m, parity, a_sl, a_cf, diff}], "unmatched_cf": [...],
    "skipped_near_confluent": [...], "max_diff": float}.  Instants within
    the confluent window of a = b cannot be checked by this route and land
    in skipped_near_confluent (the residual has a pole-driven sign flip at
    a = b regardless of whether an instant sits there).  Continued-fraction
    roots with no Sturm-Liouville partner are reported, not treated as
    errors: the theory only promises the instants appear among the roots.
    """
    from . import sturm_liouville as slmod

    if sl_instants is None:
        sl_instants = slmod.instants(b, d, m_max)
    a_top = max(inst.a for inst in sl_instants) + 0.25
    cf_roots = {
        parity: scan_roots(b, d, parity, 0.5 * d, a_top, confluent_window=confluent_window)
        for parity in ("even", "odd")
    }
    pairs = []
    skipped = []
    used = set()
    for inst in sl_instants:
        if abs(inst.a - b) < confluent_window:
            skipped.append({"m": inst.m, "parity": inst.parity, "a_sl": inst.a,
                            "reason": "confluent"})
            continue
        if inst.a <= cf_valid_from(b):
            skipped.append({"m": inst.m, "parity": inst.parity, "a_sl": inst.a,
                            "reason": "outside_cf_validity"})
            continue
        candidates = [r for r in cf_roots[inst.parity] if not r["pole"]]
        if not candidates:
            pairs.append({"m": inst.m, "parity": inst.parity, "a_sl": inst.a,
                          "a_cf": None, "diff": None})
            continue
        best = min(candidates, key=lambda r: abs(r["a"] - inst.a))
        pairs.append({"m": inst.m, "parity": inst.parity, "a_sl": inst.a,
                      "a_cf": best["a"], "diff": abs(best["a"] - inst.a)})
        used.add((inst.parity, round(best["a"], 9)))
    unmatched = []
    for parity, roots in cf_roots.items():
        for r in roots:
            if r["pole"]:
                continue
            if (parity, round(r["a"], 9)) not in used:
                unmatched.append({"parity": parity, "a_cf": r["a"]})
    diffs = [p["diff"] for p in pairs if p["diff"] is not None]
    return {
        "pairs": pairs,
        "unmatched_cf": unmatched,
        "skipped_near_confluent": skipped,
        "max_diff": max(diffs) if diffs else None,
    }
