//! Monte Carlo and sampling checks of the model's inequalities and
//! identities, each producing a [`CheckReport`].

mod audit;
mod contraction;
mod energy;
mod ensemble;
mod isometry;
mod monotonicity;
mod operator_checks;
mod report;
mod scaling;
mod stats;

pub use audit::{hypothesis_audit, AuditNorm};
pub use contraction::{
    contraction_check, deterministic_contraction, r_weight, weighted_difference, ContractionReport, CONTRACTION_TOL,
};
pub use energy::{
    check_energy1, check_energy_sup, check_weighted, energy1_rhs, energy2_rhs, energy3_rhs, energy4_rhs, Z_PASS,
};
pub use ensemble::{
    run_coupled_ensemble, run_ensemble, spectrum, Ensemble, EnsembleSpec, InitialLaw, MAX_BLOW_UP_FRACTION,
};
pub use isometry::{bdg_check, isometry_suite, BDG_CONSTANT};
pub use monotonicity::{
    l4_chain, monotonicity_sample, monotonicity_scan, sample_pair, MonotonicitySample, MARGIN_REL_TOL,
};
pub use operator_checks::{
    bilinear_bound_checks, conservation_check, l4_interpolation_check, orthogonality_check, orthogonality_is_exact,
    CONSERVATION_TOL,
};
pub use report::{CheckReport, Verdict, VerificationReport};
pub use scaling::{epsilon_scaling, galerkin_trend};
pub use stats::{cumulative_trapezoid, MeanSe};
