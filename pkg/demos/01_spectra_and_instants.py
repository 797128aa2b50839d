"""Spectra of the two singular eigenvalue problems and their zero crossings.

The planar sphere of an elongated ellipsoid destabilizes through a
sequence of parameter values a_m where an eigenvalue of the even or odd
linearized problem crosses zero.  This script sweeps the elongation,
prints the bottom of both spectra, and locates the first few instants,
including the independent continued-fraction confirmation.
"""

import numpy as np

from ellipsoid_spheres import Semiaxes
from ellipsoid_spheres import sturm_liouville as sl
from ellipsoid_spheres import heun


def main():
    b = d = 1.0
    print("eigenvalues of the even/odd problems, b = d = 1")
    print(f"{'a':>5} {'lam0_even':>12} {'lam0_odd':>12} {'lam1_even':>12} {'lam1_odd':>12}")
    for a in (0.8, 1.0, 1.5, 2.0, 2.5, 3.0):
        ax = Semiaxes(a, b, d)
        row = [sl.eigenvalue(ax, p, n).lam for n in (0, 1) for p in ("even", "odd")]
        print(f"{a:5.2f} {row[0]:12.6f} {row[1]:12.6f} {row[2]:12.6f} {row[3]:12.6f}")

    print("\ndegeneracy instants (merged, increasing):")
    inst = sl.instants(b, d, 6)
    for rec in inst:
        print(f"  a_{rec.m} = {rec.a:.9f}   ({rec.parity}, eigenfunction with "
              f"{rec.n} interior zeros)")
    gap = max(abs(rec.a - rec.m) for rec in inst)
    print(f"  (closest-integer diagnostic: max |a_m - m| = {gap:.4f})")

    print("\ncontinued-fraction crosscheck (independent route):")
    rep = heun.crosscheck(b, d, 4, sl_instants=inst[:4])
    for pair in rep["pairs"]:
        if pair["diff"] is not None:
            print(f"  m={pair['m']}: |a_SL - a_CF| = {pair['diff']:.2e}")
    for skip in rep["skipped_near_confluent"]:
        print(f"  m={skip['m']}: skipped ({skip['reason']})")


if __name__ == "__main__":
    main()
