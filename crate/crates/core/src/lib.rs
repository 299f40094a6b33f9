//! Numerical spectrum of complex matrices.
//!
//! The numerical spectrum of a bounded operator `A` on a Banach space is the
//! complement of all open half planes `H` on which the resolvent obeys
//! `‖R(λ, A)‖ ≤ 1 / d(λ, ∂H)`. For a matrix it is a compact convex set whose
//! support function in direction `θ` equals the logarithmic norm of the
//! rotated matrix `e^{-iθ} A`. This crate computes that support function
//! under `ℓᵖ` norms and Hildebrandt-type renormings, reconstructs the region as
//! a pair of convex polygons, and cross-checks it against the semigroup and
//! resolvent characterizations.

pub mod cli;
pub mod error;
pub mod lognorm;
pub mod matcore;
pub mod numspec;
pub mod optim;
pub mod renorm;
pub mod semigroup;
pub mod zoo;

pub use error::{Error, Result};
pub use lognorm::{lognorm_closed, lognorm_duality, lognorm_quotient, sample_numrange, LogNormMethod, LogNormResult};
pub use matcore::{
    dual_witness, eigenvalues, mat_exp, op_norm, pairing, resolvent, resolvent_norm, spectral_abscissa, vec_norm,
    CMatrix, CVector, LpExponent, NormSpec, C64,
};
pub use numspec::{
    build_region, certify_halfplane, check_spectrum_inclusion, classify_region, numerical_bounds, numerical_radius,
    refine_region, region_for, support_sweep, Certificate, GridSpec, Region, ShapeClass, SupportSample, SweepOptions,
};
pub use renorm::{build_hildebrandt_norm, hull_convergence_report, renormed_region, RenormSpec};
pub use semigroup::{
    growth_envelope_check, norm_curve, stability_equivalence_check, subadditive_limit_check, NormCurve,
};
