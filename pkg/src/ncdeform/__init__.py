"""Deformation toolkit for torus actions.

Twisted Fourier-series algebras over f.g. abelian weight groups, deformed
projective modules, truncated spectral verification and rational clock-shift
splitting, with exact rational phase arithmetic wherever the inputs are exact.
"""
from ._kernel import IMPLEMENTATION as KERNEL_IMPLEMENTATION
from .cohomology import (Bicharacter, CoboundaryData, CohomologyClass,
                         Multiplier, antisymmetrize, class_order,
                         cohomology_witness, is_coboundary, is_cohomologous,
                         is_nondegenerate, kernel_of, nondegenerate_part,
                         pullback, standard_bicharacter, verify_cocycle)
from .coefficients import ExactComplex
from .groups import (CirclePoint, FgAbelianGroup, GroupElement, Subgroup,
                     dual_length, quotient, smith_normal_form)
from .module_deform import (InvariantProjection, ModuleVector, WeightedFrame,
                            apply_projection, check_invariant_projection,
                            deform_endomorphism, deform_projection,
                            diagonal_projection, direct_sum, end_apply,
                            end_star, line_bundle_projection, mat_involution,
                            mat_residual, mat_star, module_action,
                            module_metric)
from .rational_split import (ClockShiftModel, SplitElement,
                             coset_constancy_residual, equivariance_audit,
                             refined_split, simplicity_report)
from .spectral_harness import (BlockOperator, TensorChain, TruncatedTriple,
                               averaged_trace_diagnostic, build_left,
                               build_phase_diagonal, build_right,
                               chain_representation, chirality_report,
                               dirac_commutator_norm, dirac_operator,
                               dirac_squared, epsilon_twist, gamma_matrices,
                               order_one_residual, order_zero_residual,
                               orientation_cycle_2d, theta_push,
                               weyl_counting)
from .twisted_algebra import (AlgebraElement, StarContext,
                              coboundary_isomorphism, commutation_defect,
                              deformation_composition_check, element_residual,
                              glnz_paired_source_bicharacter,
                              glnz_pullback_on_elements, involution, seminorm,
                              star)

__version__ = "0.1.0"

__all__ = [
    "AlgebraElement", "Bicharacter", "BlockOperator", "CirclePoint",
    "ClockShiftModel", "CoboundaryData", "CohomologyClass", "ExactComplex",
    "FgAbelianGroup", "GroupElement", "InvariantProjection",
    "KERNEL_IMPLEMENTATION", "ModuleVector", "Multiplier", "SplitElement",
    "StarContext", "Subgroup", "TensorChain", "TruncatedTriple",
    "WeightedFrame", "antisymmetrize", "apply_projection",
    "averaged_trace_diagnostic", "build_left", "build_phase_diagonal",
    "build_right", "chain_representation", "check_invariant_projection",
    "chirality_report", "class_order", "coboundary_isomorphism",
    "cohomology_witness", "commutation_defect", "coset_constancy_residual",
    "deform_endomorphism", "deform_projection",
    "deformation_composition_check", "diagonal_projection",
    "dirac_commutator_norm", "dirac_operator", "dirac_squared", "direct_sum",
    "dual_length", "element_residual", "end_apply", "end_star",
    "epsilon_twist", "equivariance_audit", "gamma_matrices",
    "glnz_paired_source_bicharacter", "glnz_pullback_on_elements",
    "involution", "is_coboundary", "is_cohomologous", "is_nondegenerate",
    "kernel_of", "line_bundle_projection", "mat_involution", "mat_residual",
    "mat_star", "module_action", "module_metric", "nondegenerate_part",
    "order_one_residual", "order_zero_residual", "orientation_cycle_2d",
    "pullback", "quotient", "refined_split", "seminorm",
    "simplicity_report", "smith_normal_form", "standard_bicharacter", "star",
    "theta_push", "verify_cocycle", "weyl_counting",
]
