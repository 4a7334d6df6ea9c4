//! Symmetric tensors: invariant monomials, graded dimensions, generators
//! and the explicit matrix models of the classical examples.

pub mod cache;
pub mod classical;
mod dims;
mod generators;
mod growth;
mod monomials;

pub use cache::{global_cache, DiskCache, MonomialCache, CACHE_DIR_ENV};
pub use classical::{
    determinantal_coordinates, determinantal_membership, exceptional_ray, moment_zero_point, nu_eval_blowup, nu_tilde,
    rank_at_most_one, springer_eval_pn, trace, RatSquare,
};
pub use dims::{graded_dims, graded_dims_esd, presentations_agree, Agreement, GradedDims};
pub use generators::{
    certification_bound, certified_degree_bound, generator_report, generator_report_cached, GeneratorEntry,
    GeneratorReport,
};
pub use growth::{bigness_growth_report, GrowthReport};
pub use monomials::{
    antipodal_transport, compositions, invariant_monomials_of_degree, kernel_criterion, torus_weight,
    weight_criterion, CriterionChecker, InvariantMonomial, MonomialContext,
};
