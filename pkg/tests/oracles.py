"""Independent numerical oracles used by the test suite.

These deliberately avoid the code paths they check: the eigenvalue oracle
discretizes the quadratic form of the singular problem on a truncated
interval [0, 1-h] with a Robin row encoding a^2 v = d^2 v' at the cut,
and Richardson-extrapolates the truncation offset h; the endpoint-data
oracle integrates the ODE from 1-h with plain initial data.  Finite
difference helpers provide derivative checks for the geometry module.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.linalg import eigh_tridiagonal

from ellipsoid_spheres.geometry import Semiaxes
from ellipsoid_spheres.sturm_liouville import eval_pq


def _eigs_truncated(ax: Semiaxes, parity: str, h: float, n_grid: int, k: int):
    """Lowest k eigenvalues of the form-discretized problem on [0, 1-h].

    Symmetric second-order scheme for the quadratic form
    int p v'^2 + q v^2 - (a^2/d^2) p(1-h) v(1-h)^2 against int p v^2,
    with v'(0) = 0 (even, natural) or v(0) = 0 (odd, Dirichlet).
    """
    zr = 1.0 - h
    z = np.linspace(0.0, zr, n_grid + 1)
    dz = z[1] - z[0]
    zm = 0.5 * (z[:-1] + z[1:])
    p_mid, _ = eval_pq(ax, zm)
    p_nod, q_nod = eval_pq(ax, z)

    w = np.full(n_grid + 1, dz)
    w[0] = w[-1] = 0.5 * dz

    diag = np.zeros(n_grid + 1)
    diag[0] = p_mid[0] / dz
    diag[1:-1] = (p_mid[:-1] + p_mid[1:]) / dz
    diag[-1] = p_mid[-1] / dz
    diag += w * q_nod
    diag[-1] -= (ax.a / ax.d) ** 2 * p_nod[-1]
    off = -p_mid / dz

    if parity == "odd":
        diag = diag[1:]
        off = off[1:]
        w_eff = w[1:] * p_nod[1:]
    else:
        w_eff = w * p_nod

    # generalized symmetric -> standard via the diagonal mass matrix
    s = 1.0 / np.sqrt(w_eff)
    d_std = diag * s * s
    o_std = off * s[:-1] * s[1:]
    vals = eigh_tridiagonal(d_std, o_std, select="i",
                            select_range=(0, k - 1), eigvals_only=True)
    return vals


def eigenvalues_fd(ax: Semiaxes, parity: str, k: int,
                   h_top: float | None = None, n_grid: int = 6000) -> np.ndarray:
    """Richardson extrapolation in the cut offset h of the truncated spectra.

    The Robin row sits at 1-h instead of the singular endpoint.  The
    residual of the displaced relation is O(h), but it enters the
    eigenvalue through the boundary form term, which carries the factor
    p(1-h) = O(h); measured convergence is lam(h) = lam + c2 h^2 + c3 h^3.
    Both leading terms are removed with the three offsets
    (h_top, h_top/2, h_top/4).  The grid error is separately removed by one
    Richardson step in dz at each h.
    """
    if h_top is None:
        # the cut must sit well inside the analytic collar of the endpoint
        if ax.a == ax.b:
            radius = 1.0
        else:
            radius = max(ax.a, ax.b) / math.sqrt(abs(ax.a ** 2 - ax.b ** 2)) - 1.0
        h_top = min(2.5e-3, radius / 8.0)
    out = []
    for h in (h_top, 0.5 * h_top, 0.25 * h_top):
        v1 = _eigs_truncated(ax, parity, h, n_grid, k)
        v2 = _eigs_truncated(ax, parity, h, 2 * n_grid, k)
        out.append((4.0 * v2 - v1) / 3.0)
    r2a = (4.0 * out[1] - out[0]) / 3.0
    r2b = (4.0 * out[2] - out[1]) / 3.0
    return (8.0 * r2b - r2a) / 7.0


def negative_count_fd(ax: Semiaxes, parity: str, k: int = 12) -> int:
    vals = eigenvalues_fd(ax, parity, k)
    if vals[-1] < 0:  # pragma: no cover
        raise RuntimeError("increase k: all sampled oracle eigenvalues negative")
    return int(np.sum(vals < 0.0))


def endpoint_data_fd(ax: Semiaxes, lam: float, h_pair=(1e-3, 5e-4),
                     n_steps: int = 20000):
    """(u(0), u'(0)) for the analytic solution, by regularized shooting.

    Starts at z = 1-h with u = 1 and u' = a^2/d^2 (the boundary relation
    displaced to the cut, an O(h) error), integrates (u, p u') to 0 with
    fixed-step RK4, normalizes by the series-free proxy u(1-h) = 1, and
    Richardson-extrapolates in h.  Fully independent of the Frobenius
    machinery.
    """
    a2, b2, d2 = ax.a ** 2, ax.b ** 2, ax.d ** 2

    def rhs(z, y):
        z2 = z * z
        den = a2 * (1.0 - z2) + b2 * z2
        sden = math.sqrt(den)
        p = (1.0 - z2) / sden
        q = -a2 * (a2 * (1.0 - z2) + b2 * (1.0 + z2)) / (d2 * den * sden)
        return np.array([y[1] / p, (q - lam * p) * y[0]])

    def shoot(h):
        z = 1.0 - h
        p0, _ = eval_pq(ax, z)
        y = np.array([1.0, p0 * a2 / d2])
        dz = -z / n_steps
        for _ in range(n_steps):
            k1 = rhs(z, y)
            k2 = rhs(z + 0.5 * dz, y + 0.5 * dz * k1)
            k3 = rhs(z + 0.5 * dz, y + 0.5 * dz * k2)
            k4 = rhs(z + dz, y + dz * k3)
            y = y + (dz / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            z += dz
        pz, _ = eval_pq(ax, 0.0)
        return np.array([y[0], y[1] / pz])

    h = h_pair[0]
    r = [shoot(h), shoot(0.5 * h), shoot(0.25 * h)]
    # leading error is O(h) from the displaced slope, then O(h^2)
    r1a = 2.0 * r[1] - r[0]
    r1b = 2.0 * r[2] - r[1]
    return (4.0 * r1b - r1a) / 3.0


def fd_gradient(f, x, step=1e-5):
    """Centered-difference gradient of a scalar function of n variables."""
    x = np.asarray(x, dtype=float)
    g = np.zeros_like(x)
    for i in range(len(x)):
        e = np.zeros_like(x)
        e[i] = step
        g[i] = (f(x + e) - f(x - e)) / (2.0 * step)
    return g
