//! Jump-adapted Euler-Maruyama and IMEX integration of the Galerkin system.

mod paths;
mod scheme;
mod trajectory;

pub use paths::{galerkin_refine, simulate_coupled, simulate_path, sup_snapshot_distance};
pub use scheme::{
    draw_step_noise, step, step_with_noise, JumpEvent, SchemeConfig, SchemeKind, BLOW_UP_NORM, EM_STABILITY_LIMIT,
};
pub use trajectory::{PairTrajectory, Quadrature, Trajectory};
