import math

import numpy as np
import pytest

from ellipsoid_spheres.geometry import Semiaxes
from ellipsoid_spheres import sturm_liouville as sl

from oracles import eigenvalues_fd, endpoint_data_fd

RND = Semiaxes(1.0, 1.0, 1.0)
AX211 = Semiaxes(2.0, 1.0, 1.0)


def test_eval_pq_endpoint_values():
    p, q = sl.eval_pq(AX211, 0.0)
    assert math.isclose(p, 0.5) and math.isclose(q, -2.5)
    p, q = sl.eval_pq(AX211, 1.0)
    assert p == 0.0 and math.isclose(q, -8.0)


def test_eval_pq_confluent_simplification():
    # a = b collapses the denominators: p = (1 - z^2)/a, q = -2a/d^2
    ax = Semiaxes(1.5, 1.5, 0.8)
    for z in (0.0, 0.5, 1.0):
        p, q = sl.eval_pq(ax, z)
        assert math.isclose(p, (1 - z * z) / 1.5, rel_tol=1e-14)
        assert math.isclose(q, -2 * 1.5 / 0.64, rel_tol=1e-14)


def test_eval_pq_bounds():
    for ax in (AX211, Semiaxes(3.0, 1.3, 0.8)):
        z = np.linspace(0, 1, 101)
        p, q = sl.eval_pq(ax, z)
        assert np.all(p >= 0) and np.all(p <= 1 / ax.a + 1e-15)
        qlo = min(-(ax.a**2 + ax.b**2) / (ax.a * ax.d**2),
                  -2 * ax.a**2 / (ax.b * ax.d**2))
        qhi = max(-(ax.a**2 + ax.b**2) / (ax.a * ax.d**2),
                  -2 * ax.a**2 / (ax.b * ax.d**2))
        assert np.all(q >= qlo - 1e-12) and np.all(q <= qhi + 1e-12)


def test_taylor_leading_coefficients():
    phat, qhat, _ = sl.taylor_pq_at_one(AX211, 24)
    assert math.isclose(phat[1], -2.0 / AX211.b, rel_tol=1e-14)
    assert math.isclose(qhat[0], -2 * AX211.a**2 / (AX211.b * AX211.d**2),
                        rel_tol=1e-14)
    assert phat[0] == 0.0


def test_taylor_series_matches_closed_form_near_one():
    for ax in (AX211, Semiaxes(1.7, 1.1, 0.9)):
        phat, qhat, _ = sl.taylor_pq_at_one(ax, 64)
        for z in (0.97, 0.99, 0.995):
            t = z - 1.0
            p_s = np.polynomial.polynomial.polyval(t, phat)
            q_s = np.polynomial.polynomial.polyval(t, qhat)
            p_c, q_c = sl.eval_pq(ax, z)
            assert abs(p_s - p_c) < 1e-12
            assert abs(q_s - q_c) < 1e-10 * abs(q_c)


def test_taylor_coefficients_vs_finite_differences():
    # one-sided high-order differences of the closed forms at z = 1,
    # evaluated in extended precision to dodge cancellation
    import mpmath as mp

    ax = AX211
    phat, qhat, _ = sl.taylor_pq_at_one(ax, 32)
    a2, b2, d2 = mp.mpf(ax.a) ** 2, mp.mpf(ax.b) ** 2, mp.mpf(ax.d) ** 2

    def p_mp(z):
        return (1 - z**2) / mp.sqrt(a2 * (1 - z**2) + b2 * z**2)

    def q_mp(z):
        den = a2 * (1 - z**2) + b2 * z**2
        return -a2 * (a2 * (1 - z**2) + b2 * (1 + z**2)) / (d2 * den ** mp.mpf(1.5))

    with mp.workdps(40):
        for k in (1, 2, 3, 4):
            want = mp.diff(p_mp, 1, n=k, direction=-1) / mp.factorial(k)
            assert abs(float(want) - phat[k]) < 1e-6 * max(1.0, abs(phat[k]))
        for k in (0, 1, 2, 3):
            want = mp.diff(q_mp, 1, n=k, direction=-1) / mp.factorial(k)
            assert abs(float(want) - qhat[k]) < 1e-6 * max(1.0, abs(qhat[k]))


def test_taylor_order_guard():
    with pytest.raises(OverflowError):
        sl.taylor_pq_at_one(AX211, 513)
    with pytest.raises(ValueError):
        sl.taylor_pq_at_one(AX211, 3)


def test_radius_of_convergence():
    assert math.isclose(sl.radius_of_convergence(AX211),
                        2 / math.sqrt(3) - 1, rel_tol=1e-14)
    assert sl.radius_of_convergence(Semiaxes(1.3, 1.3, 1.0)) == math.inf
    # a < b branch uses max(a, b)
    assert math.isclose(sl.radius_of_convergence(Semiaxes(1.0, 2.0, 1.0)),
                        2 / math.sqrt(3) - 1, rel_tol=1e-14)


def test_frobenius_round_solution_is_linear():
    s = sl.frobenius_solution(RND, 0.0)
    assert abs(s.u0) < 1e-12
    assert abs(s.du0 - 1.0) < 1e-12
    assert s.interior_zero_count == 0
    z = np.linspace(0.6, 1.0, 9)
    assert np.max(np.abs(s.series_eval(z) - z)) < 1e-13


def test_frobenius_boundary_relation():
    for lam in (-3.0, 0.0, 2.5):
        s = sl.frobenius_solution(AX211, lam)
        assert math.isclose(s.du1, AX211.a**2 / AX211.d**2, rel_tol=1e-14)


def test_frobenius_a_equals_d_kills_u0():
    s = sl.frobenius_solution(Semiaxes(1.0, 0.7, 1.0), 0.0)
    assert abs(s.u0) < 1e-9


def test_frobenius_ode_residual_in_series_region():
    # residual of the equation -(p u')' + (q - lam p) u at 20 points of the
    # series region, evaluated by pure power-series arithmetic
    rng = np.random.default_rng(7)
    for _ in range(3):
        a = float(rng.uniform(0.8, 3.0))
        b = float(rng.uniform(0.6, 1.5))
        d = float(rng.uniform(0.6, 1.5))
        lam = float(rng.uniform(-5.0, 5.0))
        ax = Semiaxes(a, b, d)
        sol = sl.frobenius_solution(ax, lam)
        n = len(sol.coeffs) - 1
        phat, qhat, _ = sl.taylor_pq_at_one(ax, n)
        c = sol.coeffs
        du = np.arange(1, n + 1) * c[1:]
        p_du = np.convolve(phat, du)[: n + 1]
        d_p_du = np.arange(1, len(p_du)) * p_du[1:]
        qml = qhat - lam * phat
        rhs = np.convolve(qml, c)[: len(d_p_du)]
        resid = rhs - d_p_du
        ts = np.linspace(sol.z_star - 1.0, -1e-3, 20)
        vals = np.polynomial.polynomial.polyval(ts, resid)
        assert np.max(np.abs(vals)) < 1e-8


def test_l2_normalizer_round():
    s = sl.frobenius_solution(RND, 0.0)
    assert math.isclose(sl.l2_normalizer(s), math.sqrt(2 / 15), rel_tol=1e-9)


def test_projective_angle_at_markers():
    rec = sl.eigenvalue(AX211, "odd", 0)
    ang = sl.projective_angle(AX211, rec.lam)
    assert min(ang, math.pi - ang) < 1e-6
    rec = sl.eigenvalue(AX211, "even", 1)
    assert abs(sl.projective_angle(AX211, rec.lam) - math.pi / 2) < 1e-6


def test_unwrapped_angle_monotone():
    lams = np.linspace(-25.0, 15.0, 50)
    vals = [sl.unwrapped_angle(AX211, float(l)) for l in lams]
    assert all(v2 < v1 for v1, v2 in zip(vals, vals[1:]))


def test_round_ground_states():
    rec = sl.eigenvalue(RND, "odd", 0)
    assert abs(rec.lam) < 1e-9
    rec = sl.eigenvalue(RND, "even", 0)
    assert rec.lam < 0


def test_eigenvalues_match_fd_oracle_211():
    for parity in ("even", "odd"):
        want = eigenvalues_fd(AX211, parity, 3)
        got = np.array([sl.eigenvalue(AX211, parity, n).lam for n in range(3)])
        assert np.max(np.abs((want - got) / got)) < 1e-5


def test_count_negative_examples():
    assert sl.count_negative(Semiaxes(0.9, 1.0, 1.0), "odd") == 0
    for a in (0.7, 1.3, 2.0, 5.0):
        assert sl.count_negative(Semiaxes(a, 1.0, 1.0), "even") >= 1


def test_count_negative_matches_oracle_at_6():
    ax = Semiaxes(6.0, 1.0, 1.0)
    for parity in ("even", "odd"):
        vals = eigenvalues_fd(ax, parity, 10)
        assert vals[-1] > 0, "need the sampled window to exit the negatives"
        assert sl.count_negative(ax, parity) == int(np.sum(vals < 0))


def test_count_negative_increments_at_instants():
    inst = sl.instants(1.0, 1.0, 3)
    for rec in inst:
        below = sl.count_negative(Semiaxes(rec.a - 1e-3, 1.0, 1.0), rec.parity)
        above = sl.count_negative(Semiaxes(rec.a + 1e-3, 1.0, 1.0), rec.parity)
        assert above == below + 1


def test_degeneracy_instant_odd_ground_is_d():
    for b, d in ((1.0, 1.0), (0.7, 1.3), (2.0, 0.5)):
        root = sl.degeneracy_instant(b, d, "odd", 0, (0.5 * d, 1.5 * d))
        assert abs(root - d) < 1e-8


def test_degeneracy_instant_bracket_errors():
    with pytest.raises(sl.NoSignChange):
        sl.degeneracy_instant(1.0, 1.0, "odd", 0, (1.2, 1.6))
    with pytest.raises(sl.MultipleRoots):
        sl.degeneracy_instant(1.0, 1.0, "odd", 0, (0.5, 3.5))


def test_first_even_instant_against_oracle_bisection():
    # root of the oracle's lambda_1^even(a) located independently
    def oracle_lam1(a):
        return eigenvalues_fd(Semiaxes(a, 1.0, 1.0), "even", 2)[1]

    lo, hi = 1.6, 2.2
    flo = oracle_lam1(lo)
    for _ in range(14):
        mid = 0.5 * (lo + hi)
        fm = oracle_lam1(mid)
        if flo * fm <= 0:
            hi = mid
        else:
            lo, flo = mid, fm
    a_oracle = 0.5 * (lo + hi)
    a_sl = sl.degeneracy_instant(1.0, 1.0, "even", 1, (1.6, 2.2))
    assert abs(a_sl - a_oracle) < 2e-4
    assert 1.8 < a_sl < 2.0


def test_instants_merged_sequence():
    inst = sl.instants(1.0, 1.0, 4)
    ais = [i.a for i in inst]
    assert abs(ais[0] - 1.0) < 1e-8
    assert all(x < y for x, y in zip(ais, ais[1:]))
    assert [i.parity for i in inst] == ["odd", "even", "odd", "even"]
    # even instants sit below the odd instant of the same index
    assert inst[1].a < inst[2].a


def test_monotonicity_in_a_and_d():
    for parity in ("even", "odd"):
        for n in (0, 1):
            l1 = sl.eigenvalue(Semiaxes(1.6, 1.0, 1.0), parity, n).lam
            l2 = sl.eigenvalue(Semiaxes(1.8, 1.0, 1.0), parity, n).lam
            assert l2 < l1
            m1 = sl.eigenvalue(Semiaxes(1.6, 1.0, 0.9), parity, n).lam
            m2 = sl.eigenvalue(Semiaxes(1.6, 1.0, 1.1), parity, n).lam
            assert m2 > m1


def test_intertwining():
    for ax in (AX211, Semiaxes(1.4, 0.8, 1.2)):
        le = [sl.eigenvalue(ax, "even", n).lam for n in (0, 1)]
        lo = [sl.eigenvalue(ax, "odd", n).lam for n in (0, 1)]
        assert le[0] < lo[0] < le[1] < lo[1]


def test_endpoint_data_against_oracle_grid():
    for a in (1.5, 2.0, 2.5):
        for lam in (-2.0, 0.0, 3.0):
            ax = Semiaxes(a, 1.0, 1.0)
            s = sl.frobenius_solution(ax, lam)
            u0_o, du0_o = endpoint_data_fd(ax, lam)
            assert abs(s.u0 - u0_o) < 1e-5 * max(1.0, abs(u0_o))
            assert abs(s.du0 - du0_o) < 1e-5 * max(1.0, abs(du0_o))


def test_jacobi_boundary_solution():
    v = sl.jacobi_boundary_solution(RND)
    z = np.linspace(0.6, 1.0, 5)
    assert np.max(np.abs(v.series_eval(z) - z)) < 1e-12
    assert abs(v.u0) < 1e-12
    a2 = sl.degeneracy_instant(1.0, 1.0, "even", 1, (1.7, 2.1))
    v2 = sl.jacobi_boundary_solution(Semiaxes(a2, 1.0, 1.0))
    assert abs(v2.du0) < 1e-8
    # simple sign flip of v(0) across the first nontrivial odd instant
    a3 = sl.degeneracy_instant(1.0, 1.0, "odd", 1, (2.5, 3.2))
    lo = sl.jacobi_boundary_solution(Semiaxes(a3 - 0.05, 1.0, 1.0))
    hi = sl.jacobi_boundary_solution(Semiaxes(a3 + 0.05, 1.0, 1.0))
    assert lo.u0 * hi.u0 < 0


def test_oscillation_counts():
    for parity in ("even", "odd"):
        for n in range(3):
            rec = sl.eigenvalue(AX211, parity, n)
            assert rec.zero_count == n


def test_spectrum_rows_shape():
    rows = sl.spectrum_rows(1.0, 1.0, 2.0, 1)
    assert len(rows) == 4
    assert rows[0][:2] == ("even", 0)
