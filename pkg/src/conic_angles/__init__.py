"""Exact Grassmann angles and conic intrinsic volumes for polyhedral cones,
with seeded Monte Carlo verification of the probabilistic identities that
tie them to Gaussian images, absorption probabilities, and distance moments.
"""

from .cones import (ConeStructure, ConeVRep, DegenerateConeError,
                    apply_linear_map, linear_subspace_cone, orthant,
                    parse_cone_literal, simplex_tangent_cone, structure,
                    weyl_chamber_b)
from .exact import (AngleProfile, IntrinsicVolumes, crofton_from_v,
                    mgf_design_matrix, orthant_grassmann,
                    orthant_intrinsic_volumes, reg_inc_beta,
                    solve_simplex_constrained_ls, steiner_design_matrix,
                    subspace_grassmann, wendel_absorption,
                    weyl_b_coefficients, weyl_b_grassmann,
                    weyl_b_intrinsic_volumes)
from .feasible import (LpResult, NnlsResult, SolverError, cone_contains,
                       dist2, lp_solve, nnls, origin_in_interior_of_hull,
                       proj_norm2, project_onto_cone, relint_meets_subspace)
from .linalg import (RngStream, Subspace, numerical_rank, orthonormalize,
                     project_onto_subspace, sample_gaussian_matrix,
                     sample_uniform_sphere, sample_uniform_subspace)
from .mc import (Estimate, ExperimentReport, ExperimentSpec,
                 estimate_absorption, estimate_expected_grassmann_image,
                 estimate_expected_solid_angle_image, estimate_face_angle_sums,
                 estimate_grassmann_subspace, estimate_intrinsic_volumes_mgf,
                 estimate_intrinsic_volumes_steiner, estimate_persistence_v0,
                 estimate_solid_angle, run_all_experiments, run_experiment)

__version__ = "0.1.0"

__all__ = [
    "AngleProfile", "ConeStructure", "ConeVRep", "DegenerateConeError",
    "Estimate", "ExperimentReport", "ExperimentSpec", "IntrinsicVolumes",
    "LpResult", "NnlsResult", "RngStream", "SolverError", "Subspace",
    "apply_linear_map", "cone_contains", "crofton_from_v", "dist2",
    "estimate_absorption", "estimate_expected_grassmann_image",
    "estimate_expected_solid_angle_image", "estimate_face_angle_sums",
    "estimate_grassmann_subspace", "estimate_intrinsic_volumes_mgf",
    "estimate_intrinsic_volumes_steiner", "estimate_persistence_v0",
    "estimate_solid_angle", "linear_subspace_cone", "lp_solve",
    "mgf_design_matrix", "nnls", "numerical_rank", "origin_in_interior_of_hull",
    "orthant", "orthant_grassmann", "orthant_intrinsic_volumes",
    "orthonormalize", "parse_cone_literal", "proj_norm2", "project_onto_cone",
    "project_onto_subspace", "reg_inc_beta", "relint_meets_subspace",
    "run_all_experiments", "run_experiment", "sample_gaussian_matrix",
    "sample_uniform_sphere", "sample_uniform_subspace",
    "simplex_tangent_cone", "solve_simplex_constrained_ls",
    "steiner_design_matrix", "structure", "subspace_grassmann",
    "wendel_absorption", "weyl_b_coefficients", "weyl_b_grassmann",
    "weyl_b_intrinsic_volumes", "weyl_chamber_b",
]
