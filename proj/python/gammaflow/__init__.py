"""Curvature, heat-semigroup and gradient-estimate checks on weighted graphs."""

from ._core import (
    GammaflowError,
    WeightedGraph,
    check_names,
    completeness_verdict,
    curvature,
    curvature_forms,
    curvature_profile,
    cutoff,
    delta,
    family,
    gamma,
    gamma2,
    gamma_pair,
    heat,
    heat_mass,
    heat_spectrum,
    intrinsic_metric,
    laplacian,
    mass_curve,
    random_graph,
    run_checks,
    verify_cd,
)

__all__ = [
    "GammaflowError",
    "WeightedGraph",
    "check_names",
    "completeness_verdict",
    "curvature",
    "curvature_forms",
    "curvature_profile",
    "cutoff",
    "delta",
    "family",
    "gamma",
    "gamma2",
    "gamma_pair",
    "heat",
    "heat_mass",
    "heat_spectrum",
    "intrinsic_metric",
    "laplacian",
    "mass_curve",
    "random_graph",
    "run_checks",
    "verify_cd",
]
