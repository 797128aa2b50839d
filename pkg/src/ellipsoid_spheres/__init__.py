"""Minimal 2-spheres of revolution in elongated ellipsoids.

Numerical companion to the bifurcation theory of nonplanar minimal
2-spheres in rotationally symmetric 3-ellipsoids: the singular
Sturm-Liouville spectra governing degeneracy of the planar sphere, the
bifurcation instants (by two independent methods), geodesic shooting in
the degenerate orbit-space metric, global branch continuation, and the
flat-strip geometry of the infinite-elongation limit.
"""

from .geometry import (ChartPoint, MetricData, OrbitPoint, Semiaxes,
                       boundary_point, chart_metric, gamma_hor_area,
                       gamma_ver_area, gauss_curvature_conformal, pappus_area,
                       planar_sphere_area_crosscheck, ricci_normal)
from .sturm_liouville import (FrobeniusSolution, SpectralRecord,
                              count_negative, degeneracy_instant, eigenvalue,
                              eval_pq, frobenius_solution, instants,
                              jacobi_boundary_solution, projective_angle)
from .heun import HeunParams, cf_eval, crosscheck, heun_instants, params_from
from .shooter import (GeodesicPath, ShooterConfig, ShotOutcome, TangentState,
                      curvature_forcing, equivariant_index, full_geodesic,
                      launch, path_to_csv, shoot_to_ver)
from .branches import Branch, BranchPoint, asymptotics, census, seed_branch, \
    continue_branch, trace
from .strip import StripGeodesic, StripMetric, bounded_crossing_box, \
    classify, integrate_strip_geodesic, period, period_table

__version__ = "0.1.0"
