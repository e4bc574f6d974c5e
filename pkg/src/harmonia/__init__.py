"""Geometry and value distribution of harmonic surfaces given by polynomial data."""
from .defect import (DefectConfig, HarmonicCertificate, PseudoMetricField, build_defect_config, check_certificate,
                     classical_defect_polynomial, defect_relation_check, dsigma_field, modified_defect_bound,
                     poincare_field, pseudo_metric_curvature_check, radial_length, xi_field)
from .derived import (DerivedCurve, contracted_norm_sq, derived_norm_sq, fs_laplacian_identity_check,
                      nondegeneracy_rank, nondegenerate_reduction, phi_s, wronskian, wronskian_reparam_check)
from .errors import GeometryError, HarmoniaError, InputError
from .gaussmap import (Direction, Hyperplane, angle_sandwich_check, direction_to_hyperplane, gauss_map,
                       general_position_check, hyperplane_distance, omits_hyperplane, reduced_representation,
                       three_in_plane_check)
from .geodesy import (GeodesicField, curvature_estimate_scan, discretize_metric, distance_field,
                      distance_to_boundary, metric_comparison_check)
from .nochka import (NochkaWeights, compute_nochka_weights, divisor_inequality_check, product_inequality_check,
                     verify_nochka_properties)
from .poly import ComplexPoly, DiskDomain, find_roots, poly_derivative, poly_eval, poly_gcd, roots_in_domain
from .surface import (HarmonicImmersion, curvature_induced, curvature_klotz, curvature_ratio_bound_check,
                      dilatation, hopf, metric_sample, metric_sandwich_check, qc_constant)

__version__ = "0.1.0"

__all__ = [
    "DefectConfig", "HarmonicCertificate", "PseudoMetricField", "build_defect_config", "check_certificate",
    "classical_defect_polynomial", "defect_relation_check", "dsigma_field", "modified_defect_bound",
    "poincare_field", "pseudo_metric_curvature_check", "radial_length", "xi_field", "DerivedCurve",
    "contracted_norm_sq", "derived_norm_sq", "fs_laplacian_identity_check", "nondegeneracy_rank",
    "nondegenerate_reduction", "phi_s", "wronskian", "wronskian_reparam_check", "GeometryError",
    "HarmoniaError", "InputError", "Direction", "Hyperplane", "angle_sandwich_check",
    "direction_to_hyperplane", "gauss_map", "general_position_check", "hyperplane_distance",
    "omits_hyperplane", "reduced_representation", "three_in_plane_check", "GeodesicField",
    "curvature_estimate_scan", "discretize_metric", "distance_field", "distance_to_boundary",
    "metric_comparison_check", "NochkaWeights", "compute_nochka_weights", "divisor_inequality_check",
    "product_inequality_check", "verify_nochka_properties", "ComplexPoly", "DiskDomain", "find_roots",
    "poly_derivative", "poly_eval", "poly_gcd", "roots_in_domain", "HarmonicImmersion", "curvature_induced",
    "curvature_klotz", "curvature_ratio_bound_check", "dilatation", "hopf", "metric_sample",
    "metric_sandwich_check", "qc_constant", "__version__",
]
