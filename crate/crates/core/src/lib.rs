//! Shell models of turbulence (GOY and Sabra) driven by Wiener and
//! compound-Poisson noise, with integrators and a numerical lab that checks
//! the model's energy, monotonicity and uniqueness estimates.

pub mod cli;
pub mod error;
pub mod integrator;
pub mod lab;
pub mod noise;
pub mod shell;

pub use error::{Error, Result};
