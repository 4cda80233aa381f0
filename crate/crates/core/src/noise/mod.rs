//! Wiener and compound-Poisson noise, coefficient families and the
//! hypothesis constants they satisfy.

mod certify;
mod config;
mod draws;
mod families;
mod rng;
mod sampling;

pub use certify::{certify_constants, certify_ratios, CertificationReport, MIN_CERT_SAMPLES, SAFETY_FACTOR};
pub use config::{ClosedFormConstants, NoiseConfig};
pub use draws::{poisson_count, sample_jumps, wiener_increment, JumpDraw, StepNoise};
pub use families::{lq_norm_sq, JumpFamily, JumpKind, MarkLaw, QSpectrum, SigmaFamily};
pub use rng::{
    address, philox4x32_10, RngStream, LANE_JUMP_COUNT, LANE_JUMP_MARK, LANE_JUMP_TIME, LANE_SEQUENTIAL, LANE_WIENER,
};
pub use sampling::{log_uniform, random_state, with_h_norm, with_l4_norm, SAMPLER_SLOPES};
