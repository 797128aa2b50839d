"""Global bifurcation branches of nonplanar free-boundary geodesics.

Solutions of f_parity(a, s) = 0 with s != 0 bifurcate from the trivial
horizontal branch at the degeneracy instants a_m (even shooting functional
for even m, odd for odd m) and persist for all larger a.  This module
seeds a branch just off its instant, continues it by pseudo-arclength
predictor-corrector in the (a, s) strip, monitors the crossing invariant
z_count (which labels branches and must stay constant), and derives the
large-a diagnostics: sup |x1| away from the boundary collar, area ratio
against the multiply-covered vertical sphere, near-boundary turn count,
and the one-dimensional Morse index.

The census scan counts distinct branch labels crossed by a fixed-a
segment {a} x (0, pi/2), a certified lower bound for the number of
noncongruent nonplanar minimal spheres at that a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from . import shooter as sh
from . import sturm_liouville as slmod
from .geometry import Semiaxes, gamma_ver_area


def _s_cap(cfg) -> float:
    margin = cfg.s_margin if cfg is not None else sh.S_MAX_MARGIN
    return 0.5 * math.pi - margin


class BranchError(RuntimeError):
    pass


class SeedRootNotFound(BranchError):
    pass


class ZJump(BranchError):
    """Crossing invariant changed along a branch: continuation jumped.

    Carries the partial branch on the `branch` attribute.
    """

    def __init__(self, msg, branch=None):
        super().__init__(msg)
        self.branch = branch


class StepUnderflow(BranchError):
    """Continuation step shrank below the floor; partial branch attached."""

    def __init__(self, msg, branch=None):
        super().__init__(msg)
        self.branch = branch


@dataclass(frozen=True)
class BranchPoint:
    a: float
    s: float
    z_count: int
    residual: float
    area: float = math.nan
    turn_count: int = -1


@dataclass
class Branch:
    m: int
    parity: str
    seed_a: float
    b: float
    d: float
    points: list

    @property
    def semiaxes_at(self):
        return lambda a: Semiaxes(a, self.b, self.d)


@dataclass(frozen=True)
class StepControl:
    initial: float = 0.05
    minimum: float = 1e-4
    maximum: float = 0.5
    grow: float = 1.3
    grow_after: int = 4


def _parity_of(m: int) -> str:
    return sh.EVEN if m % 2 == 0 else sh.ODD


def _f(b: float, d: float, parity: str, a: float, s: float,
       cfg: sh.ShooterConfig):
    out = sh.shoot_to_ver(Semiaxes(a, b, d), s, cfg)
    f = out.f_even if parity == sh.EVEN else out.f_odd
    return f, out.z_count


def _solve_in_a(b, d, parity, s, a_center, cfg, width0=0.05, width_cap=0.8):
    """Root of f_parity(. , s) in a near a_center, by expanding bracket."""
    w = width0
    f_mid, _ = _f(b, d, parity, a_center, s, cfg)
    while w <= width_cap:
        lo, hi = a_center - w, a_center + w
        f_lo, _ = _f(b, d, parity, lo, s, cfg)
        f_hi, _ = _f(b, d, parity, hi, s, cfg)
        if f_lo * f_hi < 0.0:
            root = brentq(lambda a: _f(b, d, parity, a, s, cfg)[0], lo, hi,
                          xtol=1e-12, rtol=4e-15)
            return float(root)
        w *= 2.0
    raise SeedRootNotFound(
        f"no sign change of f_{parity}(., s={s}) within {width_cap} of {a_center}")


def seed_branch(b: float, d: float, m: int, s0: float = 0.01,
                cfg: sh.ShooterConfig | None = None,
                instant_a: float | None = None) -> Branch:
    """Two starting solution points just off the bifurcation instant a_m.

    Solves f in a at s = s0 and s = 2 s0 and validates the branch label
    z_count = floor(m / 2) at both.
    """
    if m < 2:
        raise ValueError("nontrivial branches require m >= 2")
    parity = _parity_of(m)
    cfg = (cfg or sh.ShooterConfig())
    if instant_a is None:
        inst = slmod.instants(b, d, m)
        instant_a = inst[m - 1].a
    pts = []
    for s in (s0, 2.0 * s0):
        a_root = _solve_in_a(b, d, parity, s, instant_a, cfg)
        f_val, z = _f(b, d, parity, a_root, s, cfg)
        if z != m // 2:
            raise BranchError(
                f"seed at (a={a_root:.6f}, s={s}) has z_count={z}, expected {m // 2}")
        pts.append(BranchPoint(a=a_root, s=s, z_count=z, residual=abs(f_val)))
    return Branch(m=m, parity=parity, seed_a=instant_a, b=b, d=d, points=pts)


def _corrector(b, d, parity, p_pred, tangent, cfg, f_tol=1e-9,
               f_tol_soft=9e-8, max_iter=10):
    """Newton on (f(a, s), <(a,s) - pred, tangent>) with FD Jacobian.

    Shots near the vertical pole amplify integrator error into an f noise
    floor around 1e-8, so besides the hard tolerance the corrector accepts
    its best iterate under a soft floor once Newton stops improving.
    """
    a, s = p_pred
    f_val, z = _f(b, d, parity, a, s, cfg)
    best = ((a, s), f_val, z)
    for _ in range(max_iter):
        if abs(f_val) < f_tol:
            return (a, s), f_val, z
        da = 1e-6 * max(1.0, abs(a))
        # near the vertical pole f varies on the scale of the remaining
        # margin, so the probe must shrink with it
        ds = min(1e-6, 0.05 * (0.5 * math.pi - s))
        if s + ds >= _s_cap(cfg):
            ds = -ds
        f_a, _ = _f(b, d, parity, a + da, s, cfg)
        f_s, _ = _f(b, d, parity, a, s + ds, cfg)
        j11 = (f_a - f_val) / da
        j12 = (f_s - f_val) / ds
        j21, j22 = tangent
        det = j11 * j22 - j12 * j21
        if abs(det) < 1e-14:
            break
        res2 = (a - p_pred[0]) * j21 + (s - p_pred[1]) * j22
        delta_a = -(j22 * f_val - j12 * res2) / det
        delta_s = -(-j21 * f_val + j11 * res2) / det
        a += delta_a
        s += delta_s
        if not (0.0 < s < _s_cap(cfg)):
            return None
        f_val, z = _f(b, d, parity, a, s, cfg)
        if abs(f_val) < abs(best[1]):
            best = ((a, s), f_val, z)
        if abs(delta_a) + abs(delta_s) < 1e-12 * max(1.0, abs(a)):
            break  # stuck at the shot noise floor; best iterate decides
    return best if abs(best[1]) < f_tol_soft else None


def continue_branch(branch: Branch, a_max: float,
                    cfg: sh.ShooterConfig | None = None,
                    step: StepControl | None = None) -> Branch:
    """Extend a branch by pseudo-arclength continuation until a >= a_max.

    Secant predictor, Newton corrector orthogonal to the predictor step;
    the step halves on corrector failure (StepUnderflow below the minimum)
    and grows after a run of successes.  Every accepted point recomputes
    the crossing invariant; a change aborts with ZJump.
    """
    if len(branch.points) < 2:
        raise BranchError("need at least 2 points to continue")
    cfg = cfg or sh.ShooterConfig()
    step = step or StepControl()
    pts = list(branch.points)
    z_ref = pts[0].z_count
    h = step.initial
    streak = 0
    while pts[-1].a < a_max:
        mu_last = 0.5 * math.pi - pts[-1].s
        mu_prev = 0.5 * math.pi - pts[-2].s
        if mu_last < 0.1 and mu_last < mu_prev:
            # pole-hugging tail: the branch is a graph over a there, and a
            # bracketed 1-D solve in the log margin survives the shot noise
            # floor that defeats the 2-D Newton
            _continue_as_graph(branch, pts, a_max, z_ref, cfg, step)
            break
        p1 = np.array([pts[-2].a, pts[-2].s])
        p2 = np.array([pts[-1].a, pts[-1].s])
        t = p2 - p1
        t_norm = float(np.hypot(*t))
        if t_norm == 0.0:
            raise BranchError("degenerate tangent")
        t = t / t_norm
        pred = p2 + h * t
        result = None
        if 0.0 < pred[1] < _s_cap(cfg):
            result = _corrector(branch.b, branch.d, branch.parity,
                                (float(pred[0]), float(pred[1])),
                                (float(t[0]), float(t[1])), cfg)
        if result is None:
            h *= 0.5
            streak = 0
            if h < step.minimum:
                raise StepUnderflow(
                    f"step below {step.minimum} at (a, s) = ({pts[-1].a:.6f}, "
                    f"{pts[-1].s:.6f})", replace(branch, points=pts))
            continue
        (a_new, s_new), f_val, z = result
        if z != z_ref:
            raise ZJump(
                f"z_count {z_ref} -> {z} at (a, s) = ({a_new:.6f}, {s_new:.6f}); "
                f"last good point ({pts[-1].a:.6f}, {pts[-1].s:.6f})",
                replace(branch, points=pts))
        if not (s_new > 0.0):
            raise BranchError(f"branch returned to the trivial line at a = {a_new:.6f}")
        pts.append(BranchPoint(a=a_new, s=s_new, z_count=z, residual=abs(f_val)))
        streak += 1
        if streak >= step.grow_after:
            h = min(h * step.grow, step.maximum)
            streak = 0
    return replace(branch, points=pts)


def _continue_as_graph(branch, pts, a_max, z_ref, cfg, step):
    """Graph-over-a continuation for the pole-hugging tail of a branch."""
    b, d, parity = branch.b, branch.d, branch.parity
    h_a = min(0.25, step.maximum)
    while pts[-1].a < a_max:
        a1, a0 = pts[-1].a, pts[-2].a
        mu1 = 0.5 * math.pi - pts[-1].s
        mu0 = 0.5 * math.pi - pts[-2].s
        a_new = min(pts[-1].a + h_a, a_max + 1e-9)
        # log-linear prediction of the margin decay
        slope = (math.log(mu1) - math.log(mu0)) / (a1 - a0) if a1 > a0 else 0.0
        mu_pred = mu1 * math.exp(slope * (a_new - a1))
        width = 2.0
        solved = None
        for _ in range(6):
            lo, hi = mu_pred / width, min(mu_pred * width, 0.45 * math.pi)
            if 0.5 * math.pi - lo >= _s_cap(cfg):
                lo = 0.5 * math.pi - _s_cap(cfg) + 1e-15
            try:
                f_lo, _ = _f(b, d, parity, a_new, 0.5 * math.pi - lo, cfg)
                f_hi, _ = _f(b, d, parity, a_new, 0.5 * math.pi - hi, cfg)
            except sh.ShooterError:
                break
            if f_lo * f_hi < 0.0:
                mu_root = brentq(
                    lambda mu: _f(b, d, parity, a_new, 0.5 * math.pi - mu, cfg)[0],
                    lo, hi, xtol=1e-15, rtol=8.9e-16)
                solved = float(mu_root)
                break
            width *= 2.0
        if solved is None:
            h_a *= 0.5
            if h_a < step.minimum:
                raise StepUnderflow(
                    f"graph step below {step.minimum} at a = {pts[-1].a:.6f} "
                    f"(pole margin {mu1:.3e})", replace(branch, points=pts))
            continue
        s_new = 0.5 * math.pi - solved
        f_val, z = _f(b, d, parity, a_new, s_new, cfg)
        if z != z_ref:
            raise ZJump(
                f"z_count {z_ref} -> {z} at (a, s) = ({a_new:.6f}, {s_new:.6f})",
                replace(branch, points=pts))
        pts.append(BranchPoint(a=a_new, s=s_new, z_count=z, residual=abs(f_val)))
        h_a = min(h_a * step.grow, 0.25)


def polish_point(branch: Branch, a: float, cfg: sh.ShooterConfig | None = None,
                 s_tol: float = 1e-12) -> BranchPoint:
    """Solution point of the branch at a given a, re-solved in s.

    Interpolates s from the stored polyline, brackets, and brentq-solves
    f(a, .) to solution tolerance; used before assembling full geodesics.
    """
    cfg = cfg or sh.ShooterConfig()
    a_arr = np.array([p.a for p in branch.points])
    s_arr = np.array([p.s for p in branch.points])
    if not (a_arr.min() - 1e-9 <= a <= a_arr.max() + 1e-9):
        raise BranchError(f"branch does not reach a = {a}")
    order = np.argsort(a_arr)
    s_guess = float(np.interp(a, a_arr[order], s_arr[order]))
    f = lambda s: _f(branch.b, branch.d, branch.parity, a, s, cfg)[0]

    def eval_toward(s_edge):
        # shots from far inside the pole zone die at the opposite boundary
        # before crossing; retreat toward the branch until one succeeds
        for _ in range(30):
            try:
                return s_edge, f(s_edge)
            except sh.ShooterError:
                s_edge = s_guess + 0.5 * (s_edge - s_guess)
        raise BranchError(f"no valid shot near s = {s_guess} at a = {a}")

    w = 0.005
    while w < 0.5:
        lo, f_lo = eval_toward(max(1e-6, s_guess - w))
        hi, f_hi = eval_toward(min(_s_cap(cfg), s_guess + w))
        if f_lo * f_hi < 0.0:
            s_root = brentq(f, lo, hi, xtol=s_tol)
            f_val, z = _f(branch.b, branch.d, branch.parity, a, s_root, cfg)
            return BranchPoint(a=a, s=float(s_root), z_count=z,
                               residual=float(abs(f_val)))
        w *= 2.0
    raise BranchError(f"could not re-bracket the branch at a = {a}")


def asymptotics(branch: Branch, a: float,
                cfg: sh.ShooterConfig | None = None) -> dict:
    """Large-a diagnostics of the branch geodesic at parameter a.

    sup_x1_deviation is the sup of |x1| over full-geodesic samples outside
    the 5 r_min boundary collar; area_ratio divides the conformal length by
    m times the Pappus area of the vertical sphere; turn_count and the
    equivariant index come from the assembled geodesic.
    """
    cfg = (cfg or sh.ShooterConfig()).resolve(Semiaxes(a, branch.b, branch.d))
    point = polish_point(branch, a, cfg)
    ax = Semiaxes(a, branch.b, branch.d)
    # near the vertical pole the evaluation of f carries an amplified noise
    # floor; the root location in s is far more accurate than |f| suggests,
    # so gate the assembly on the re-evaluated residual rather than the
    # nominal solution tolerance
    from dataclasses import replace as _replace
    gate = max(cfg.solution_tol, 10.0 * point.residual + 1e-12)
    path = sh.full_geodesic(ax, point.s, branch.parity,
                            _replace(cfg, solution_tol=gate))
    # the neck depth shrinks with a; recalibrate the turn collar so that
    # 5 * r_min_eff brackets the measured dip without touching integration.
    # The dip is taken over the interior of the path: the first and last
    # few percent sit in the launch collar at r ~ eps_launch.
    n = len(path.rho)
    cut = max(2, n // 50)
    r_dip = float(path.r[cut:n - cut].min())
    r_min_eff = max(cfg.r_min, 0.4 * r_dip)
    turns = sh.turn_count(path, 5.0 * r_min_eff)
    necks = sh.neck_count(path)
    outside = path.r >= 5.0 * r_min_eff
    sup_x1 = float(np.max(np.abs(path.x1[outside]))) if np.any(outside) else math.nan
    area_ratio = path.area / (branch.m * gamma_ver_area(ax))
    index = sh.equivariant_index(ax, path, cfg)
    return {
        "a": a,
        "s": point.s,
        "m": branch.m,
        "sup_x1_deviation": sup_x1,
        "area": path.area,
        "area_ratio": area_ratio,
        "turn_count": turns,
        "neck_count": necks,
        "index": index,
        "crossings": sh.crossing_count(path),
        "residual": point.residual,
        "r_dip": r_dip,
    }


def decorate_point(branch: Branch, p: BranchPoint,
                   cfg: sh.ShooterConfig | None = None) -> BranchPoint:
    """Fill area and turn_count of an accepted branch point (extra shot)."""
    ax = Semiaxes(p.a, branch.b, branch.d)
    path = sh.full_geodesic(ax, p.s, branch.parity, cfg or sh.ShooterConfig())
    return replace(p, area=path.area, turn_count=path.turn_count)


def trace(b: float, d: float, m: int, a_max: float,
          cfg: sh.ShooterConfig | None = None,
          step: StepControl | None = None, decorate: bool = True) -> Branch:
    """Seed and continue the branch of label m out to a_max."""
    br = seed_branch(b, d, m, cfg=cfg)
    br = continue_branch(br, a_max, cfg=cfg, step=step)
    if decorate:
        br.points = [decorate_point(br, p, cfg) for p in br.points]
    return br


def _census_shot(args):
    b, d, a, s, cfg = args
    out = sh.shoot_to_ver(Semiaxes(a, b, d), s, cfg)
    return out.f_even, out.f_odd


def census(b: float, d: float, a: float, n_grid: int = 160,
           cfg: sh.ShooterConfig | None = None,
           s_margin: float = sh.S_MAX_MARGIN, jobs: int = 1) -> dict:
    """Lower bound for the number of nonplanar solutions at fixed a.

    Scans s in (0, pi/2 - s_margin) for sign changes of both shooting
    functionals, refines each to a solution, classifies it by the crossing
    invariant (m = 2 z for even solutions, 2 z + 1 for odd), and counts
    distinct labels m >= 2.  Refining the grid can only add sign changes,
    so the count is monotone under refinement and always a valid lower
    bound.

    The default margin 0.05 misses low-m branches once they hug the
    vertical pole (their pole margin decays exponentially in a); pass a
    smaller s_margin to see them, e.g. 2e-3 recovers the m = 2 branch up
    to a around 5.5.
    """
    if a <= d:
        raise ValueError("census requires a > d")
    cfg = cfg or sh.ShooterConfig()
    if s_margin < cfg.s_margin:
        from dataclasses import replace as _replace
        cfg = _replace(cfg, s_margin=s_margin)
    ax = Semiaxes(a, b, d)
    s_vals = np.linspace(1e-3, 0.5 * math.pi - s_margin, n_grid)
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            pairs = list(pool.map(_census_shot,
                                  [(b, d, a, float(s), cfg) for s in s_vals],
                                  chunksize=max(1, n_grid // (4 * jobs))))
    else:
        pairs = [_census_shot((b, d, a, float(s), cfg)) for s in s_vals]
    witnesses = []
    for parity in (sh.EVEN, sh.ODD):
        vals = np.array([fe if parity == sh.EVEN else fo
                         for fe, fo in pairs])
        sgn = np.sign(vals)
        for i in np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]:
            s_root = brentq(
                lambda s: _f(b, d, parity, a, s, cfg)[0],
                s_vals[i], s_vals[i + 1], xtol=1e-11)
            f_val, z = _f(b, d, parity, a, float(s_root), cfg)
            m = 2 * z if parity == sh.EVEN else 2 * z + 1
            if m >= 2:
                witnesses.append({"s": float(s_root), "m": m, "parity": parity,
                                  "z_count": z, "residual": abs(f_val)})
    distinct = sorted({w["m"] for w in witnesses})
    return {"a": a, "count": len(distinct), "distinct_m": distinct,
            "witnesses": witnesses}
