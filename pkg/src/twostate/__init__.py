"""Exact computation and cross-verification toolkit for two-state free Brownian motion."""

from .cumulants import (
    IncrementFamilySpec,
    TwoStateElementSpec,
    brownian_family,
    cumulant_dilate,
    cumulant_free_add,
    free_cumulants_from_moments,
    mixed_moment,
    moments_from_free_cumulants,
    moments_from_two_state_cumulants,
    two_state_cumulants_from_moments,
)
from .fock import (
    FockVector,
    IntervalGrid,
    OperatorExpr,
    apply_increment,
    c_t_expr,
    centered_expr,
    cond_exp_obstruction,
    elementary_tensor,
    freeness_check,
    kernel_norm_squared,
    kernel_residual,
    kernel_shift_vacuum_pairing,
    kernel_vector,
    martingale_check,
    martingale_expr,
    phi_moment_table,
    product_lemma_vector,
    psi_moment_table,
    state_phi,
    state_psi_t,
)
from .generator import (
    generating_function_check,
    generator_apply,
    l_apply,
    mu_moment_polys,
    nu_moment_polys,
    p_polynomials,
    q_polynomials,
    time_derivative_residual,
)
from .partitions import (
    BlockClassification,
    SetPartition,
    SizeLimitError,
    adjacent_pairing,
    bell_number,
    classify_blocks,
    coarser_weight,
    enumerate_nc,
    enumerate_set_partitions,
    falling_factorial,
    is_noncrossing,
    join,
    meet,
    refines,
    stirling2,
)
from .poly import BivariatePolynomial, difference_quotient
from .spectral import (
    AtomLocationError,
    JacobiParams,
    Measure,
    NotAMeasureError,
    atom_location,
    atom_mass,
    ct_law,
    density_eval,
    exact_moment,
    free_poisson_law,
    jacobi_shift,
    jacobi_to_moments,
    moments_to_jacobi,
    orthogonal_polynomials,
    quadrature_moment,
    semicircle_law,
    shift_moments_by_series,
    support,
)
from .variations import (
    VariationReport,
    centered_power_moment,
    centered_qv_moment,
    norm_2n_table,
    psi_variation,
    sandwich_variation,
    variation_second_moment,
)

__all__ = [name for name in dir() if not name.startswith("_")]
