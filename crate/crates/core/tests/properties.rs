use capcon_core::dense_coding::{
    ec_dc_capacity, ec_dc_capacity_d2, ec_dc_value_at, protocol_average_state_spectrum,
    EncodingPlan, SharedState,
};
use capcon_core::dephasing::{
    avg_equiprob_capacity, avg_optimal_capacity, strict_equiprob_capacity, strict_optimal_capacity,
};
use capcon_core::dual::{dual_dephasing_equiprob_capacity, dual_dephasing_optimal_capacity, dual_noiseless_capacity};
use capcon_core::noiseless::{noiseless_capacity, optimal_encoding};
use capcon_core::optimize::{maximize, OptimizationProblem, OptimizerConfig};
use capcon_core::quantum::{
    apply_channel, energy, holevo_chi, partial_trace, random_mixed_state, random_pure_state, tensor,
    von_neumann_entropy, ChannelSpec, Ensemble, Hamiltonian, Subsystem,
};
use capcon_core::rng::SplitMix64;
use capcon_core::thermal::{mean_energy, solve_beta, thermal_weights};
use capcon_core::Constraint;
use proptest::prelude::*;

fn shannon(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|x| -x * x.log2()).sum()
}

fn random_ensemble(dim: usize, n: usize, pure: bool, seed: u64) -> Ensemble {
    let mut rng = SplitMix64::new(seed);
    let raw: Vec<f64> = (0..n).map(|_| 0.05 + rng.next_f64()).collect();
    let total: f64 = raw.iter().sum();
    let items = raw
        .iter()
        .map(|w| {
            let s = if pure {
                random_pure_state(dim, &mut rng)
            } else {
                random_mixed_state(dim, &mut rng)
            };
            (w / total, s)
        })
        .collect();
    Ensemble::new(items).unwrap()
}

fn energy_range() -> impl Strategy<Value = f64> {
    0.01f64..0.99
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn holevo_bound(dim in 2usize..5, n in 1usize..5, seed: u64) {
        let ens = random_ensemble(dim, n, false, seed);
        let chi = holevo_chi(&ens).unwrap();
        prop_assert!(chi >= -1e-12);
        prop_assert!(chi <= (dim as f64).log2() + 1e-12);
    }

    #[test]
    fn pure_ensembles_reach_average_entropy(dim in 2usize..5, n in 1usize..5, seed: u64) {
        let ens = random_ensemble(dim, n, true, seed);
        let s = von_neumann_entropy(&ens.average_state()).unwrap();
        prop_assert!((holevo_chi(&ens).unwrap() - s).abs() < 1e-10);
    }

    #[test]
    fn dephasing_relabeling(lambda in 0.0f64..1.0, n in 1usize..5, seed: u64) {
        let ens = random_ensemble(2, n, false, seed);
        let run = |l: f64| {
            let ch = ChannelSpec::dephasing(l).unwrap();
            holevo_chi(&ens.try_map(|s| apply_channel(&ch, s)).unwrap()).unwrap()
        };
        prop_assert!((run(lambda) - run(1.0 - lambda)).abs() < 1e-10);
    }

    #[test]
    fn dephasing_never_increases_chi(lambda in 0.0f64..1.0, n in 1usize..5, seed: u64) {
        let ens = random_ensemble(2, n, false, seed);
        let ch = ChannelSpec::dephasing(lambda).unwrap();
        let out = ens.try_map(|s| apply_channel(&ch, s)).unwrap();
        prop_assert!(holevo_chi(&out).unwrap() <= holevo_chi(&ens).unwrap() + 1e-9);
    }

    #[test]
    fn energy_is_linear(dim in 2usize..6, n in 1usize..5, seed: u64) {
        let ens = random_ensemble(dim, n, false, seed);
        let h = Hamiltonian::new(dim).unwrap();
        let mixed = energy(&ens.average_state(), &h).unwrap();
        let parts: f64 = ens.items().iter().map(|(p, s)| p * energy(s, &h).unwrap()).sum();
        prop_assert!((mixed - parts).abs() < 1e-10);
    }

    #[test]
    fn partial_trace_undoes_tensor(da in 2usize..4, db in 2usize..4, seed: u64) {
        let mut rng = SplitMix64::new(seed);
        let a = random_mixed_state(da, &mut rng);
        let b = random_mixed_state(db, &mut rng);
        let ab = tensor(&a, &b);
        let ra = partial_trace(&ab, (da, db), Subsystem::A).unwrap();
        let rb = partial_trace(&ab, (da, db), Subsystem::B).unwrap();
        prop_assert!(ra.matrix().max_abs_diff(a.matrix()) < 1e-12);
        prop_assert!(rb.matrix().max_abs_diff(b.matrix()) < 1e-12);
    }

    #[test]
    fn produced_states_are_valid(dim in 2usize..5, n in 1usize..5, seed: u64, lambda in 0.0f64..1.0) {
        let ens = random_ensemble(dim, n, false, seed);
        let avg = ens.average_state();
        prop_assert!(avg.validate().is_ok());
        if dim == 2 {
            let ch = ChannelSpec::dephasing(lambda).unwrap();
            prop_assert!(apply_channel(&ch, &avg).unwrap().validate().is_ok());
        }
    }

    #[test]
    fn beta_round_trip(d in 2usize..40, frac in 0.001f64..0.999) {
        let e = frac * (d - 1) as f64 / 2.0;
        let beta = solve_beta(d, e).unwrap();
        prop_assert!((mean_energy(d, beta) - e).abs() < 1e-10);
    }

    #[test]
    fn thermal_weights_decrease(d in 2usize..30, frac in 0.001f64..0.999) {
        let e = frac * (d - 1) as f64 / 2.0;
        let w = thermal_weights(d, e).unwrap().weights;
        prop_assert!(w.windows(2).all(|p| p[1] <= p[0] + 1e-15));
        prop_assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    // Any distribution on {0,1,2} with mean E is the Gibbs one plus t(1,-2,1).
    #[test]
    fn thermal_weights_maximize_entropy(e in 0.05f64..0.95, s in 0.0f64..1.0) {
        let w = thermal_weights(3, e).unwrap().weights;
        let lo = (-w[0]).max(-w[2]).max((w[1] - 1.0) / 2.0);
        let hi = (w[1] / 2.0).min(1.0 - w[0]).min(1.0 - w[2]);
        let t = lo + s * (hi - lo);
        let other = [w[0] + t, w[1] - 2.0 * t, w[2] + t];
        prop_assert!((other[1] + 2.0 * other[2] - e).abs() < 1e-12);
        prop_assert!(shannon(&other) <= shannon(&w) + 1e-12);
    }

    #[test]
    fn noiseless_monotone(d in 2usize..12, e in 0.0f64..6.0, de in 0.0f64..1.0) {
        let c = |d, e| noiseless_capacity(d, e, Constraint::Average).unwrap().value;
        prop_assert!(c(d, e + de) >= c(d, e) - 1e-12);
        prop_assert!(c(d + 1, e) >= c(d, e) - 1e-12);
        if e >= (d - 1) as f64 / 2.0 {
            prop_assert_eq!(c(d, e), (d as f64).log2());
        }
    }

    #[test]
    fn encoding_attains_capacity(d in 2usize..6, e in 0.01f64..3.0) {
        let chi = holevo_chi(&optimal_encoding(d, e).unwrap()).unwrap();
        let cap = noiseless_capacity(d, e, Constraint::Strict).unwrap().value;
        prop_assert!((chi - cap).abs() < 1e-9);
    }

    #[test]
    fn dual_optimal_dominates(e in 0.0f64..1.0, l in 0.5f64..1.0) {
        let opt = dual_dephasing_optimal_capacity(e, l).unwrap().value;
        let eq = dual_dephasing_equiprob_capacity(e, l).unwrap().value;
        prop_assert!(opt >= eq - 1e-9);
        if e >= 0.5 {
            prop_assert!((opt - eq).abs() < 1e-9);
        }
    }

    #[test]
    fn dual_pure_limit(e in 0.0f64..1.0) {
        let dual = dual_noiseless_capacity(e, 1.0).unwrap().value;
        let plain = noiseless_capacity(2, e, Constraint::Average).unwrap().value;
        prop_assert!((dual - plain).abs() < 1e-12);
    }

    #[test]
    fn protocol_entropy_adds(d in 2usize..5, frac in 0.01f64..0.99, seed: u64) {
        let psi = SharedState::thermal(d, frac * (d - 1) as f64 / 2.0).unwrap();
        let mut rng = SplitMix64::new(seed);
        let raw: Vec<f64> = (0..d).map(|_| 0.01 + rng.next_f64()).collect();
        let total: f64 = raw.iter().sum();
        let q: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let plan = EncodingPlan::new(q.clone(), &psi).unwrap();
        let spectrum = protocol_average_state_spectrum(&plan, &psi).unwrap();
        let expect = shannon(&q) + shannon(&psi.schmidt_weights);
        prop_assert!((shannon(&spectrum) - expect).abs() < 1e-12);
    }

    #[test]
    fn pinning_full_energy_gives_no_advantage(d in 2usize..5, frac in 0.01f64..0.99) {
        let e = frac * (d - 1) as f64 / 2.0;
        let pinned = ec_dc_value_at(d, e, e).unwrap();
        prop_assert!((pinned - thermal_weights(d, e).unwrap().entropy()).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn dephasing_symmetry(lambda in 0.0f64..1.0, e in energy_range()) {
        let fs = [avg_equiprob_capacity, avg_optimal_capacity, strict_equiprob_capacity, strict_optimal_capacity];
        for f in fs {
            let a = f(lambda, e).unwrap().value;
            let b = f(1.0 - lambda, e).unwrap().value;
            prop_assert!((a - b).abs() < 1e-8, "λ={lambda} E={e}: {a} vs {b}");
        }
    }

    #[test]
    fn dephasing_ordering(lambda in 0.0f64..1.0, e in energy_range()) {
        let ao = avg_optimal_capacity(lambda, e).unwrap().value;
        let ae = avg_equiprob_capacity(lambda, e).unwrap().value;
        let so = strict_optimal_capacity(lambda, e).unwrap().value;
        let se = strict_equiprob_capacity(lambda, e).unwrap().value;
        prop_assert!(ao >= ae - 1e-9);
        prop_assert!(ao >= so - 1e-9);
        prop_assert!(ae >= se - 1e-9);
        prop_assert!(so >= se - 1e-9);
    }

    #[test]
    fn qubit_dense_coding_routes_agree(e in 0.01f64..0.49) {
        let general = ec_dc_capacity(2, e).unwrap().value;
        let closed = ec_dc_capacity_d2(e).unwrap().value;
        prop_assert!((general - closed).abs() < 1e-6);
    }

    #[test]
    fn optimizer_is_deterministic_and_feasible(seed: u64, c in 0.2f64..0.8) {
        let prob = OptimizationProblem::new(vec![(0.0, 1.0), (0.0, 1.0)], |x: &[f64]| {
            Ok(-(x[0] - 0.9).powi(2) - (x[1] - 0.7).powi(2))
        })
        .unwrap()
        .with_constraint(move |x: &[f64]| x[0] + x[1] - c);
        let cfg = OptimizerConfig::for_dimension(2, seed);
        let a = maximize(&prob, &cfg).unwrap();
        let b = maximize(&prob, &cfg).unwrap();
        prop_assert_eq!(a.value.to_bits(), b.value.to_bits());
        prop_assert_eq!(&a.argmax, &b.argmax);
        prop_assert_eq!(a.diagnostics.evaluations, b.diagnostics.evaluations);
        prop_assert!(prob.is_feasible(&a.argmax, 1e-9));
    }
}

