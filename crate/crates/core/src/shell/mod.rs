//! Shell states, norms and the operators of the GOY and Sabra models.

mod forcing;
mod operators;
mod state;

pub use forcing::{Forcing, ForcingNorm};
pub use operators::{apply_a, energy_transfer, project, BilinearBounds, Model, Triad, Variant};
pub use state::{inner_h, Norms, ShellState, WaveLadder, MIN_SHELLS};
