//! Every example under `examples/` runs to completion.

#[path = "../examples/config_run.rs"]
mod config_run;
#[path = "../examples/coupled_contraction.rs"]
mod coupled_contraction;
#[path = "../examples/energy_estimates.rs"]
mod energy_estimates;
#[path = "../examples/galerkin_scaling.rs"]
mod galerkin_scaling;
#[path = "../examples/monotonicity.rs"]
mod monotonicity;
#[path = "../examples/noise_certification.rs"]
mod noise_certification;
#[path = "../examples/shell_operators.rs"]
mod shell_operators;
#[path = "../examples/single_path.rs"]
mod single_path;
#[path = "../examples/stochastic_integrals.rs"]
mod stochastic_integrals;

#[test]
fn shell_operators_runs() {
    shell_operators::run_example().unwrap();
}

#[test]
fn noise_certification_runs() {
    noise_certification::run_example().unwrap();
}

#[test]
fn single_path_runs() {
    let csv = single_path::run_example().unwrap();
    assert!(csv.starts_with("t,re_u1,im_u1,"));
    assert_eq!(csv.lines().count(), 1 + 41);
}

#[test]
fn coupled_contraction_runs() {
    coupled_contraction::run_example().unwrap();
}

#[test]
fn energy_estimates_runs() {
    energy_estimates::run_example().unwrap();
}

#[test]
fn monotonicity_runs() {
    monotonicity::run_example().unwrap();
}

#[test]
fn stochastic_integrals_runs() {
    stochastic_integrals::run_example().unwrap();
}

#[test]
fn galerkin_scaling_runs() {
    galerkin_scaling::run_example().unwrap();
}

#[test]
fn config_run_runs() {
    config_run::run_example().unwrap();
}
