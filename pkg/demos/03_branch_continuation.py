"""Tracing a global branch of nonplanar minimal spheres.

The first even branch bifurcates near a = 1.9; continuation follows it in
the (a, s) strip while the crossing invariant stays pinned.  The sphere's
area grows toward twice the vertical planar sphere as the branch climbs
toward the vertical pole.
"""

import math

from ellipsoid_spheres import Semiaxes, gamma_ver_area
from ellipsoid_spheres import branches as br
from ellipsoid_spheres import shooter as sh


def main():
    cfg = sh.ShooterConfig(s_margin=1e-7, r_min=1e-6)
    b2 = br.seed_branch(1.0, 1.0, 2, cfg=cfg)
    b2 = br.continue_branch(b2, 4.0, cfg=cfg)
    print(f"branch m=2: {len(b2.points)} points from a={b2.points[0].a:.4f} "
          f"to a={b2.points[-1].a:.4f}")
    print(f"{'a':>7} {'s':>8} {'pi/2 - s':>10} {'z':>3} {'residual':>10}")
    for p in b2.points[:: max(1, len(b2.points) // 10)]:
        print(f"{p.a:7.3f} {p.s:8.4f} {math.pi/2 - p.s:10.2e} "
              f"{p.z_count:3d} {p.residual:10.1e}")

    diag = br.asymptotics(b2, 3.9, cfg)
    ratio = diag["area_ratio"]
    print(f"\nat a = 3.9: area = {diag['area']:.4f} "
          f"({ratio:.4f} of 2 x vertical sphere area "
          f"{2 * gamma_ver_area(Semiaxes(3.9, 1, 1)):.4f})")
    print(f"necks: {diag['neck_count']}, equivariant index: {diag['index']}, "
          f"crossings of the horizontal axis: {diag['crossings']}")


if __name__ == "__main__":
    main()
