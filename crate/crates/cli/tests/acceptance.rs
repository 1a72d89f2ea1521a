//! Acceptance criteria, one printed line each. Run with
//! `cargo test -p capcon-cli --test acceptance`.

use std::process::{Command, ExitCode};
use std::time::Instant;

use capcon_core::dc_search::{dc_capacity, dc_dephasing_capacity, dc_hierarchy_row, DcChannel, DcSearch, DcVariant};
use capcon_core::dense_coding::{ec_dc_capacity_d2, passive_no_go_check};
use capcon_core::dephasing::{
    avg_equiprob_capacity, strict_equiprob_capacity, strict_optimal_capacity,
};
use capcon_core::dual::{
    dual_dephasing_equiprob_capacity, dual_dephasing_optimal_capacity, dual_noiseless_capacity,
};
use capcon_core::noiseless::{capacity_curve, noiseless_capacity};
use capcon_core::quantum::{energy, purity, Hamiltonian};
use capcon_core::thermal::{d3_closed_form_weights, thermal_weights};
use capcon_core::{Constraint, Dimension, Probabilities};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn h(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
    }
}

fn ensure(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Two pure qubit states at polar angles `θ₁` (azimuth 0) and `θ₂`
/// (azimuth π) on a `res × res` grid; the weight is whatever puts the mean
/// energy at exactly `E`. Holevo quantity of a pure pair is the entropy of
/// the average Bloch vector.
fn bloch_grid_oracle(e: f64, res: usize) -> f64 {
    let mut best = 0.0f64;
    for i in 0..res {
        let t1 = std::f64::consts::PI * i as f64 / (res - 1) as f64;
        let (x1, z1) = (t1.sin(), t1.cos());
        let e1 = (1.0 - z1) / 2.0;
        for j in 0..res {
            let t2 = std::f64::consts::PI * j as f64 / (res - 1) as f64;
            let (x2, z2) = (-t2.sin(), t2.cos());
            let e2 = (1.0 - z2) / 2.0;
            if (e2 - e1).abs() < 1e-15 {
                continue;
            }
            let p = (e2 - e) / (e2 - e1);
            if !(0.0..=1.0).contains(&p) {
                continue;
            }
            let r = (p * x1 + (1.0 - p) * x2).hypot(p * z1 + (1.0 - p) * z2);
            best = best.max(h((1.0 + r.min(1.0)) / 2.0));
        }
    }
    best
}

fn c1_noiseless() -> Verdict {
    let mut worst = 0.0f64;
    let mut ok = true;
    for e in [0.1, 0.25, 0.4] {
        let cap = noiseless_capacity(2, e, Constraint::Average).unwrap().value;
        let oracle = bloch_grid_oracle(e, 1000);
        ok &= (cap - h(e)).abs() < 1e-12;
        ok &= oracle <= h(e) + 1e-4 && oracle >= h(e) - 1e-3;
        worst = worst.max((oracle - h(e)).abs());
    }
    ensure(ok, format!("10^6-point Bloch oracle within {worst:.2e} of H(E)"))
}

fn c2_thermal() -> Verdict {
    let mut energy_dev = 0.0f64;
    for d in 2..=8usize {
        for i in 1..=20 {
            let e = (d - 1) as f64 / 2.0 * i as f64 / 21.0;
            let w = thermal_weights(d, e).unwrap().weights;
            let mean: f64 = w.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
            energy_dev = energy_dev.max((mean - e).abs());
        }
    }
    let mut closed_dev = 0.0f64;
    for i in 1..=9 {
        let e = i as f64 / 10.0;
        let p0 = (7.0 - 3.0 * e - (1.0 + 6.0 * e - 3.0 * e * e).sqrt()) / 6.0;
        let p1 = 2.0 - 2.0 * p0 - e;
        let exact = [p0, p1, 1.0 - p0 - p1];
        let solved = thermal_weights(3, e).unwrap().weights;
        let library = d3_closed_form_weights(e).unwrap();
        for k in 0..3 {
            closed_dev = closed_dev.max((solved[k] - exact[k]).abs()).max((library[k] - exact[k]).abs());
        }
    }
    ensure(
        energy_dev <= 1e-9 && closed_dev <= 1e-8,
        format!("mean-energy error {energy_dev:.1e}, qutrit closed-form error {closed_dev:.1e}"),
    )
}

fn c3_dimension() -> Verdict {
    let e: f64 = 0.3;
    let dims = [2, 3, 4, 8, 16].map(Dimension::Finite);
    let curve: Vec<f64> = capacity_curve(e, &dims).unwrap().into_iter().map(|(_, v)| v).collect();
    let increasing = curve.windows(2).all(|w| w[1] > w[0]);
    let limit = (1.0 + e) * (1.0 + e).log2() - e * e.log2();
    let d64 = capacity_curve(e, &[Dimension::Finite(64)]).unwrap()[0].1;
    ensure(
        increasing && (d64 - limit).abs() <= 1e-3 && (limit - 1.013155).abs() < 1e-6,
        format!("increasing over d=2..16: {increasing}; d=64 {d64:.6} vs limit {limit:.6}"),
    )
}

fn c4_dephasing_closed_forms() -> Verdict {
    let mut avg_dev = 0.0f64;
    let mut strict_dev = 0.0f64;
    for i in 1..=50 {
        let e = i as f64 / 100.0;
        avg_dev = avg_dev.max((avg_equiprob_capacity(0.5, e).unwrap().value - (h(e) - h(2.0 * e) / 2.0)).abs());
        let e = i as f64 / 50.0;
        strict_dev = strict_dev.max((strict_equiprob_capacity(0.5, e).unwrap().value - (h(e / 2.0) - h(e) / 2.0)).abs());
    }
    let a = avg_equiprob_capacity(0.5, 0.25).unwrap().value;
    let s = strict_equiprob_capacity(0.5, 0.25).unwrap().value;
    ensure(
        avg_dev <= 1e-6 && strict_dev <= 1e-6 && (a - 0.311278).abs() <= 1e-6 && (s - 0.137925).abs() <= 1e-6,
        format!("max deviation avg {avg_dev:.1e}, strict {strict_dev:.1e}; spots {a:.6} / {s:.6}"),
    )
}

fn c5_strict_gap() -> Verdict {
    let gap = |l, e| strict_optimal_capacity(l, e).unwrap().value - strict_equiprob_capacity(l, e).unwrap().value;
    let mut min_gap = f64::INFINITY;
    for l in [0.40, 0.45, 0.50] {
        for e in [0.5, 0.7] {
            min_gap = min_gap.min(gap(l, e));
        }
    }
    let mut max_eq = 0.0f64;
    for (l, e) in [(0.3, 1.0), (0.5, 1.0), (0.0, 0.25), (0.0, 0.75), (1.0, 0.25), (1.0, 0.75)] {
        max_eq = max_eq.max(gap(l, e).abs());
    }
    ensure(
        min_gap >= 10.0 * 5e-5 && max_eq <= 1e-6,
        format!("smallest gap {min_gap:.2e} (need 5e-4), largest gap at equality points {max_eq:.1e}"),
    )
}

fn c6_dc_optimizer() -> Verdict {
    let variant = DcVariant::new(DcChannel::Noiseless, Constraint::Average, Probabilities::Optimized);
    let search = DcSearch::default();
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    for e in [0.1f64, 0.25, 0.4] {
        let ep = (1.0 - (1.0 - 2.0 * e).sqrt()) / 2.0;
        let r = dc_capacity(e, variant, &search, &[]).unwrap();
        worst.0 = worst.0.max((r.value - 2.0 * h(ep)).abs());
        worst.1 = worst.1.max((r.parameter("e_prime").unwrap() - ep).abs());
        worst.2 = worst.2.max((r.parameter("q0").unwrap() - (1.0 - ep)).abs());
    }
    ensure(
        worst.0 <= 1e-4 && worst.1 <= 1e-3 && worst.2 <= 1e-3,
        format!("cold search: value {:.1e}, E'* {:.1e}, q0* {:.1e} from closed form", worst.0, worst.1, worst.2),
    )
}

fn c7_ratio() -> Verdict {
    let ratios: Vec<f64> = (1..=100)
        .map(|i| {
            let e = 0.5 * i as f64 / 101.0;
            ec_dc_capacity_d2(e).unwrap().value / h(e)
        })
        .collect();
    let increasing = ratios.windows(2).all(|w| w[1] > w[0]);
    let top = ec_dc_capacity_d2(0.5).unwrap().value / h(0.5);
    ensure(
        increasing && (top - 2.0).abs() <= 1e-9,
        format!("increasing on 100 points: {increasing}; ratio at 1/2 = {top:.12}"),
    )
}

fn c8_no_go() -> Verdict {
    let mut margin = f64::INFINITY;
    for e in [0.25, 0.4] {
        let r = passive_no_go_check(500, e, 42).unwrap();
        if r.trials != 500 {
            return Err(format!("ran {} trials", r.trials));
        }
        margin = margin.min(h(e) + 1e-9 - r.max_chi);
    }
    ensure(margin >= 0.0, format!("500 trials each, smallest margin below H(E) {margin:.3e}"))
}

/// Unassisted strict capacity of complete dephasing: outputs are diagonal,
/// so the best ensemble mixes energies 0 and E.
fn deph_strict_oracle(e: f64) -> f64 {
    (0..=200_000)
        .map(|i| {
            let p = i as f64 / 200_000.0;
            h(p * e) - p * h(e)
        })
        .fold(0.0, f64::max)
}

fn c9_cq_advantage() -> Verdict {
    let search = DcSearch::default();
    let mut min_adv = f64::INFINITY;
    let mut oracle_dev = 0.0f64;
    for i in 1..=9 {
        let e = i as f64 / 10.0;
        let dc = dc_dephasing_capacity(e, Constraint::Strict, Probabilities::Optimized, &search).unwrap().value;
        let un = strict_optimal_capacity(0.5, e).unwrap().value;
        oracle_dev = oracle_dev.max((un - deph_strict_oracle(e)).abs());
        min_adv = min_adv.min(dc - un);
    }
    let dc1 = dc_dephasing_capacity(1.0, Constraint::Strict, Probabilities::Optimized, &search).unwrap().value;
    let un1 = strict_optimal_capacity(0.5, 1.0).unwrap().value;
    let mut avg_dev = 0.0f64;
    for e in [0.1, 0.25, 0.4] {
        let v = dc_dephasing_capacity(e, Constraint::Average, Probabilities::Optimized, &search).unwrap().value;
        avg_dev = avg_dev.max((v - h(e)).abs());
    }
    ensure(
        min_adv >= 1e-3 && (dc1 - un1).abs() <= 1e-4 && avg_dev <= 1e-4 && oracle_dev <= 1e-6,
        format!(
            "smallest advantage {min_adv:.4}, gap at E=1 {:.1e}, average variant vs H(E) {avg_dev:.1e}, unassisted vs scan {oracle_dev:.1e}",
            (dc1 - un1).abs()
        ),
    )
}

fn c10_hierarchy() -> Verdict {
    let search = DcSearch::default();
    let mut worst_chain = f64::NEG_INFINITY;
    let mut min_adv = f64::INFINITY;
    for i in 1..=9 {
        let e = i as f64 / 20.0;
        let r = dc_hierarchy_row(e, &search).unwrap();
        for (hi, lo) in [
            (r.avg_optimized, r.avg_equiprobable),
            (r.avg_equiprobable, r.strict_optimized),
            (r.strict_optimized, r.strict_equiprobable),
        ] {
            worst_chain = worst_chain.max(lo - hi);
        }
        min_adv = min_adv.min(r.strict_equiprobable - h(e));
    }
    ensure(
        worst_chain <= 1e-4 && min_adv > 1e-3,
        format!("largest chain violation {worst_chain:.1e} (slack 1e-4), smallest advantage over H(E) {min_adv:.4}"),
    )
}

fn c11_dual() -> Verdict {
    let rm = (1.0 - 0.8f64.sqrt()) / 2.0;
    let zero = dual_noiseless_capacity(0.04, 0.9).unwrap().value;
    let top = dual_noiseless_capacity(0.6, 0.9).unwrap().value;
    let mid = dual_noiseless_capacity(0.3, 0.9).unwrap().value;
    let eq = dual_dephasing_equiprob_capacity(0.3, 0.9).unwrap().value;
    let branches = zero == 0.0
        && (top - (1.0 - h(rm))).abs() <= 1e-12
        && (mid - (h(0.3) - h(rm))).abs() <= 1e-12
        && (eq - (h(0.3) - 0.5 * (h(rm) + h(0.6 - rm)))).abs() <= 1e-12;

    let ham = Hamiltonian::new(2).unwrap();
    let mut dev = 0.0f64;
    for l in [0.6, 0.75, 0.9, 1.0] {
        for e in [0.1, 0.2, 0.3, 0.45, 0.5, 0.8] {
            for r in [
                dual_noiseless_capacity(e, l).unwrap(),
                dual_dephasing_equiprob_capacity(e, l).unwrap(),
                dual_dephasing_optimal_capacity(e, l).unwrap(),
            ] {
                let Some(ens) = r.optimal_ensemble.as_ref() else { continue };
                dev = dev.max((r.ensemble_chi().unwrap().unwrap() - r.value).abs());
                dev = dev.max((energy(&ens.average_state(), &ham).unwrap() - e.min(0.5)).abs());
                for (_, s) in ens.items() {
                    dev = dev.max((purity(s) - l).abs());
                }
            }
        }
    }
    ensure(
        branches && dev <= 1e-9,
        format!("branches {zero:.6} / {top:.6} / {mid:.6} / {eq:.6}; ensemble consistency {dev:.1e}"),
    )
}

fn c12_determinism() -> Verdict {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_capcon"))
            .args(["verify", "--suite", "all", "--seed", "42"])
            .env_remove("CAPCON_SEED")
            .output()
            .expect("capcon runs")
    };
    let (a, b) = (run(), run());
    let same = a.stdout == b.stdout && !a.stdout.is_empty();
    ensure(
        same && a.status.success() && b.status.success(),
        format!("{} bytes, identical: {same}, exit {:?}", a.stdout.len(), a.status.code()),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("noiseless closed form vs Bloch grid oracle", c1_noiseless),
        ("thermal weights", c2_thermal),
        ("dimensional advantage", c3_dimension),
        ("dephasing closed forms", c4_dephasing_closed_forms),
        ("strict optimal vs equiprobable gap", c5_strict_gap),
        ("qubit dense coding, full optimizer", c6_dc_optimizer),
        ("advantage ratio", c7_ratio),
        ("passive encoding no-go", c8_no_go),
        ("dense coding advantage over complete dephasing", c9_cq_advantage),
        ("noiseless dense coding hierarchy", c10_hierarchy),
        ("energy and purity constraints", c11_dual),
        ("verify report determinism", c12_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = f();
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match &verdict {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        if verdict.is_err() {
            failed += 1;
        }
        println!("[{tag}] {:>2} {name}: {detail} ({secs:.1}s)", i + 1);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
