import math

import numpy as np
import pytest

from ellipsoid_spheres.geometry import Semiaxes
from ellipsoid_spheres import branches as br
from ellipsoid_spheres import shooter as sh

A2 = 1.9008845446  # first even instant for b = d = 1
A3 = 2.8816088171  # first nontrivial odd instant


def test_seed_branch_m2():
    b2 = br.seed_branch(1.0, 1.0, 2, instant_a=A2)
    assert [p.z_count for p in b2.points] == [1, 1]
    assert all(abs(p.a - A2) < 0.05 for p in b2.points)
    assert all(p.residual < 1e-9 for p in b2.points)
    assert b2.parity == "even"


def test_seed_branch_m3():
    b3 = br.seed_branch(1.0, 1.0, 3, instant_a=A3)
    assert [p.z_count for p in b3.points] == [1, 1]
    assert b3.parity == "odd"
    # full crossing count of the odd geodesic is 2 z + 1 = 3
    p = b3.points[-1]
    path = sh.full_geodesic(Semiaxes(p.a, 1.0, 1.0), p.s, "odd")
    assert sh.crossing_count(path) == 3


def test_seed_mirror_same_a():
    b2 = br.seed_branch(1.0, 1.0, 2, instant_a=A2)
    a_plus = b2.points[0].a
    a_minus = br._solve_in_a(1.0, 1.0, "even", -0.01, A2, sh.ShooterConfig())
    assert abs(a_plus - a_minus) < 1e-7


def test_seed_requires_m_at_least_2():
    with pytest.raises(ValueError):
        br.seed_branch(1.0, 1.0, 1, instant_a=1.0)


def test_continue_short_segment():
    b2 = br.seed_branch(1.0, 1.0, 2, instant_a=A2)
    b2 = br.continue_branch(b2, A2 + 1.0)
    assert b2.points[-1].a >= A2 + 1.0
    assert {p.z_count for p in b2.points} == {1}
    assert all(p.residual < 1e-7 for p in b2.points)
    assert all(0.0 < p.s < 0.5 * math.pi for p in b2.points)
    assert all(p.a > 1.0 for p in b2.points)
    # a increases monotonically here: no fold in this window
    avals = [p.a for p in b2.points]
    assert all(x < y for x, y in zip(avals, avals[1:]))


def test_mirror_property_of_branch_points():
    b2 = br.seed_branch(1.0, 1.0, 2, instant_a=A2)
    b2 = br.continue_branch(b2, A2 + 0.5)
    p = b2.points[-1]
    from scipy.optimize import brentq
    cfg = sh.ShooterConfig()
    f = lambda s: br._f(1.0, 1.0, "even", p.a, s, cfg)[0]
    root = brentq(f, -p.s - 0.02, -p.s + 0.02, xtol=1e-12)
    assert abs(root + p.s) < 1e-6


def test_polish_and_asymptotics_small_a():
    b2 = br.seed_branch(1.0, 1.0, 2, instant_a=A2)
    b2 = br.continue_branch(b2, A2 + 0.8)
    diag = br.asymptotics(b2, A2 + 0.7)
    assert diag["m"] == 2
    assert diag["crossings"] == 2
    assert 0 < diag["area_ratio"] < 2.0
    assert diag["index"] >= 1


def test_branch_disjointness_window():
    b2 = br.seed_branch(1.0, 1.0, 2, instant_a=A2)
    b2 = br.continue_branch(b2, 3.1)
    b3 = br.seed_branch(1.0, 1.0, 3, instant_a=A3)
    b3 = br.continue_branch(b3, 3.1)
    for a in (2.95, 3.05):
        p2 = br.polish_point(b2, a)
        p3 = br.polish_point(b3, a)
        assert abs(p2.s - p3.s) > 1e-3


def test_census_counts_first_branch():
    rep = br.census(1.0, 1.0, 2.0, n_grid=60)
    assert rep["count"] >= 1
    assert 2 in rep["distinct_m"]
    for w in rep["witnesses"]:
        assert w["residual"] < 1e-7


def test_census_monotone_under_refinement():
    lo = br.census(1.0, 1.0, 3.0, n_grid=50)
    hi = br.census(1.0, 1.0, 3.0, n_grid=100)
    assert hi["count"] >= lo["count"]


def test_census_rejects_small_a():
    with pytest.raises(ValueError):
        br.census(1.0, 1.0, 0.9)


def test_census_distinct_witness_invariants():
    rep = br.census(1.0, 1.0, 3.05, n_grid=80)
    by_m = {}
    for w in rep["witnesses"]:
        by_m.setdefault(w["m"], set()).add((w["parity"], w["z_count"]))
    # distinct m values have distinct (parity, z) labels
    labels = [lab for labs in by_m.values() for lab in labs]
    assert len(set(labels)) == len(by_m)
