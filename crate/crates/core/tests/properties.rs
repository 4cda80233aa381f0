use num_complex::Complex64;
use proptest::prelude::*;

use shellsim::cli::{ForcingSpec, RunConfig};
use shellsim::integrator::{simulate_path, SchemeConfig};
use shellsim::noise::{JumpFamily, MarkLaw, NoiseConfig, QSpectrum, RngStream, SigmaFamily};
use shellsim::shell::{inner_h, Model, ShellState, Triad, Variant, WaveLadder};

fn state(max_shells: usize) -> impl Strategy<Value = ShellState> {
    (4..=max_shells, 0.5f64..4.0)
        .prop_flat_map(|(n, k0)| (Just(n), Just(k0), prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), n)))
        .prop_map(|(n, k0, xs)| {
            let amps = xs.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
            ShellState::from_amplitudes(WaveLadder::new(k0, n).unwrap(), amps).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sabra_conserves_energy_for_any_zero_sum_triad(u in state(30), a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let model = Model::with_triad(Variant::Sabra, 1.0, Triad { a, b, c: -a - b }).unwrap();
        let bu = model.apply_b(&u, &u).unwrap();
        let scale = u.ladder().k_max() * u.h_norm().powi(3) * (a.abs() + b.abs() + (a + b).abs()).max(1.0);
        prop_assert!(inner_h(&bu, &u).unwrap().abs() <= 1e-12 * scale);
    }

    #[test]
    fn goy_conserves_energy(u in state(30)) {
        let model = Model::goy(1.0).unwrap();
        let bu = model.apply_b(&u, &u).unwrap();
        prop_assert!(inner_h(&bu, &u).unwrap().abs() <= 1e-12 * u.ladder().k_max() * u.h_norm().powi(3));
    }

    #[test]
    fn l4_below_interpolation_bound(u in state(24)) {
        let k1 = u.ladder().k(1);
        prop_assert!(u.l4_pow4() <= (1.0 + 1e-12) * u.h_norm_sq() * u.v_norm_sq() / (k1 * k1));
    }

    #[test]
    fn norm_ladder(u in state(24)) {
        // |u| <= ||u|| / k_1 and truncation never grows a norm
        prop_assert!(u.h_norm() * u.ladder().k(1) <= u.v_norm() * (1.0 + 1e-12));
        let m = 4 + (u.len() - 4) / 2;
        let p = u.resize(m).unwrap();
        prop_assert!(p.h_norm() <= u.h_norm() && p.v_norm() <= u.v_norm());
    }

    #[test]
    fn streams_replay(seed in any::<u64>(), id in any::<u64>()) {
        let mut a = RngStream::new(seed, id);
        let mut b = RngStream::new(seed, id);
        let xs: Vec<f64> = (0..8).map(|_| a.next_normal()).collect();
        let ys: Vec<f64> = (0..8).map(|_| b.next_normal()).collect();
        prop_assert_eq!(xs, ys);
        let mut c = RngStream::new(seed, id.wrapping_add(1));
        prop_assert_ne!(a.next_uniform(), c.next_uniform());
    }

    #[test]
    fn config_round_trip(
        variant in prop_oneof![Just(Variant::Goy), Just(Variant::Sabra)],
        shells in 4usize..40,
        nu in 1e-3f64..10.0,
        eps in 0.0f64..1e-3,
        seed in 0u64..=(i64::MAX as u64),
        re in -5.0f64..5.0,
        deltas in prop::collection::vec(1e-6f64..1e3, 1..4),
        std in 0.0f64..3.0,
    ) {
        let c = RunConfig {
            variant,
            shells,
            nu,
            epsilon: eps,
            seed,
            deltas,
            forcing: ForcingSpec::ConstantShell { shell: 1, amplitude: Complex64::new(re, -re / 3.0) },
            mark_law: MarkLaw::Gaussian { std },
            ..RunConfig::default()
        };
        let back = RunConfig::parse(&c.to_config_string()).unwrap();
        prop_assert_eq!(back, c);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn csv_values_read_back_exactly(seed in any::<u32>(), eps in 0.0f64..0.2) {
        let ladder = WaveLadder::new(1.0, 6).unwrap();
        let noise = NoiseConfig::new(
            eps,
            QSpectrum::new(1.0, 1.0).unwrap(),
            SigmaFamily::additive_uniform(1.0, 6),
            JumpFamily::additive_on_shell(6, 2, 1.0, MarkLaw::Uniform { lo: -1.0, hi: 1.0 }, 3.0).unwrap(),
            6,
        ).unwrap();
        let u0 = ShellState::unit(ladder, 1).unwrap();
        let scheme = SchemeConfig::imex(1e-2, 0.2).unwrap().with_record_stride(5);
        let tr = simulate_path(&u0, &Model::sabra(1.0).unwrap(), &noise, &scheme, &RngStream::new(seed as u64, 0), None).unwrap();
        let csv = tr.to_csv_string();
        for (line, s) in csv.lines().skip(1).zip(&tr.states) {
            let xs: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
            for (n, z) in s.amplitudes().iter().enumerate() {
                prop_assert_eq!((xs[1 + 2 * n], xs[2 + 2 * n]), (z.re, z.im));
            }
        }
    }

    #[test]
    fn noiseless_energy_balance_closes(amp in 0.1f64..2.0) {
        // Euler-Maruyama with eps = 0: |u|^2 + 2 nu int ||u||^2 = |u0|^2 up to O(dt)
        let ladder = WaveLadder::new(1.0, 5).unwrap();
        let u0 = shellsim::lab::InitialLaw::power_law(ladder, amp, 1.0);
        let scheme = SchemeConfig::em(1e-4, 0.2).unwrap().with_record_stride(2000);
        let tr = simulate_path(&u0, &Model::goy(1.0).unwrap(), &NoiseConfig::silent(5), &scheme, &RngStream::new(0, 0), None).unwrap();
        let worst = tr.energy_balance_residual(1.0).iter().fold(0.0f64, |m, r| m.max(r.abs()));
        prop_assert!(worst < 1e-2 * u0.h_norm_sq().max(u0.h_norm_sq().powf(1.5)));
    }
}
