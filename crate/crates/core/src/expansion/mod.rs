//! Moments, cumulants and genus-stratified coefficients under Haar measure, together with
//! the identities relating them.

mod bounds;
mod cumulants;
mod formal;
mod genus;
mod grid;
mod hurwitz;
mod moments;
mod operators;
mod properties;
mod setup;
mod tutte;

pub use bounds::{
    bounds_check, catalan, planar_unit_trace_bound, unit_trace_value, BoundCheck, BoundConstants,
};
pub use cumulants::{
    blocks_of, cumulant_closed_form, cumulants_from_moments, empirical_cumulant, set_partitions,
    CumulantValue, MAX_CUMULANT_ORDER,
};
pub use formal::{formal_coefficient, formal_cumulant, multi_indices, FormalCumulant, Potential};
pub use genus::{
    genus_coefficient, genus_coefficient_by_maps, genus_coefficient_poly, GenusCache,
    GenusCoefficient,
};
pub use grid::{alternated_tuples, balanced_skeletons, relation_grid, split_tuples};
pub use hurwitz::hurwitz_reduction;
pub use moments::{cumulant_haar, moment_haar, renormalized_cumulant};
pub use operators::{
    gradient_trick_sides, gradient_trick_universal, gradient_trick_with_cumulants,
    group_normal_form, master_operator_check, numeric_xi_norm, operator_norm_bound_check,
    regularized_t, NormSample, NumericPolynomial,
};
pub use properties::{structural_checks, StructuralReport};
pub use tutte::{tutte_check, tutte_check_potential, tutte_check_tensor, IdentityCheck};
