//! Verification suites. Every check records what it expected, what it got
//! and the tolerance it was judged at; the report is a pure function of
//! the seed.

use rayon::prelude::*;
use serde::Serialize;

use capcon_core::dense_coding::{ec_dc_capacity, ec_dc_capacity_d2, passive_no_go_check};
use capcon_core::dephasing::{
    avg_equiprob_capacity, strict_equiprob_capacity, strict_optimal_capacity,
};
use capcon_core::dual::{
    dual_dephasing_equiprob_capacity, dual_dephasing_optimal_capacity, dual_noiseless_capacity,
};
use capcon_core::noiseless::{capacity_curve, infinite_dimensional_capacity, noiseless_capacity};
use capcon_core::optimize::{grid_oracle, maximize, OptimizationProblem, OptimizerConfig};
use capcon_core::quantum::{energy, purity, Hamiltonian};
use capcon_core::rng::SplitMix64;
use capcon_core::thermal::{d3_closed_form_weights, thermal_weights};
use capcon_core::{CapacityResult, Constraint, Dimension};

use crate::args::Suite;
use crate::config::Settings;
use crate::error::CliResult;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Expected {
    Value(f64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub check: String,
    pub expected: Expected,
    pub got: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    pub fn approx(name: impl Into<String>, expected: f64, got: f64, tol: f64) -> Self {
        Self {
            check: name.into(),
            expected: Expected::Value(expected),
            got,
            tol,
            pass: (got - expected).abs() <= tol,
        }
    }

    pub fn at_least(name: impl Into<String>, bound: f64, got: f64, tol: f64) -> Self {
        Self {
            check: name.into(),
            expected: Expected::Text(format!(">= {bound}")),
            got,
            tol,
            pass: got >= bound - tol,
        }
    }

    pub fn at_most(name: impl Into<String>, bound: f64, got: f64, tol: f64) -> Self {
        Self {
            check: name.into(),
            expected: Expected::Text(format!("<= {bound}")),
            got,
            tol,
            pass: got <= bound + tol,
        }
    }

    /// Strict inequality `got > bound`, reported with `tol = 0`.
    pub fn above(name: impl Into<String>, bound: f64, got: f64) -> Self {
        Self {
            check: name.into(),
            expected: Expected::Text(format!("> {bound}")),
            got,
            tol: 0.0,
            pass: got > bound,
        }
    }
}

fn h(x: f64) -> f64 {
    if x <= 0.0 || x >= 1.0 {
        0.0
    } else {
        -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
    }
}

/// Entropy of a qubit state with Bloch radius `r`.
fn bloch_entropy(r: f64) -> f64 {
    h((1.0 + r.min(1.0)) / 2.0)
}

fn max_dev(pairs: impl IntoIterator<Item = (f64, f64)>) -> f64 {
    pairs.into_iter().map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

fn min_step(xs: &[f64]) -> f64 {
    xs.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
}

pub fn run_suite(suite: Suite, settings: &Settings) -> CliResult<Vec<Check>> {
    Ok(match suite {
        Suite::ClosedForms => closed_forms()?,
        Suite::Oracles => oracles(settings)?,
        Suite::NoGo => no_go(settings.seed)?,
        Suite::All => {
            let mut all = closed_forms()?;
            all.extend(oracles(settings)?);
            all.extend(no_go(settings.seed)?);
            all
        }
    })
}

pub fn closed_forms() -> CliResult<Vec<Check>> {
    let mut out = Vec::new();

    for e in [0.1, 0.25, 0.4] {
        let c = noiseless_capacity(2, e, Constraint::Average)?.value;
        out.push(Check::approx(format!("noiseless d=2 E={e} equals H(E)"), h(e), c, 1e-12));
    }
    out.push(Check::approx(
        "noiseless d=2 E=0.25",
        0.811278,
        noiseless_capacity(2, 0.25, Constraint::Strict)?.value,
        1e-6,
    ));

    let mut worst = 0.0f64;
    for d in 2..=8usize {
        let top = (d - 1) as f64 / 2.0;
        for i in 1..=20 {
            let e = top * i as f64 / 21.0;
            let w = thermal_weights(d, e)?.weights;
            let mean: f64 = w.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
            worst = worst.max((mean - e).abs());
        }
    }
    out.push(Check::approx("thermal mean energy, d=2..8 on 20-point grids", 0.0, worst, 1e-9));

    let mut dev = 0.0f64;
    for i in 1..=9 {
        let e = i as f64 / 10.0;
        let solved = thermal_weights(3, e)?.weights;
        let closed = d3_closed_form_weights(e)?;
        dev = dev.max(max_dev(solved.iter().copied().zip(closed)));
    }
    out.push(Check::approx("qutrit weights, root-solved vs closed form", 0.0, dev, 1e-8));

    let dims: Vec<Dimension> = [2, 3, 4, 8, 16].map(Dimension::Finite).to_vec();
    let curve: Vec<f64> = capacity_curve(0.3, &dims)?.into_iter().map(|(_, v)| v).collect();
    out.push(Check::above("capacity at E=0.3 strictly increasing in d=2,3,4,8,16 (min step)", 0.0, min_step(&curve)));
    let big = capacity_curve(0.3, &[Dimension::Finite(64)])?[0].1;
    out.push(Check::approx("capacity at E=0.3, d=64 vs d=inf", 1.013155, big, 1e-3));
    out.push(Check::approx(
        "d=inf capacity at E=0.3",
        1.013155,
        infinite_dimensional_capacity(0.3)?,
        1e-6,
    ));

    let avg = (1..=50).map(|i| {
        let e = i as f64 / 100.0;
        Ok((avg_equiprob_capacity(0.5, e)?.value, h(e) - h(2.0 * e) / 2.0))
    });
    let avg: Vec<(f64, f64)> = avg.collect::<CliResult<_>>()?;
    out.push(Check::approx("avg equiprobable, complete dephasing, 50 points", 0.0, max_dev(avg), 1e-6));
    let strict = (1..=50).map(|i| {
        let e = i as f64 / 50.0;
        Ok((strict_equiprob_capacity(0.5, e)?.value, h(e / 2.0) - h(e) / 2.0))
    });
    let strict: Vec<(f64, f64)> = strict.collect::<CliResult<_>>()?;
    out.push(Check::approx("strict equiprobable, complete dephasing, 50 points", 0.0, max_dev(strict), 1e-6));
    out.push(Check::approx("avg equiprobable lambda=0.5 E=0.25", 0.311278, avg_equiprob_capacity(0.5, 0.25)?.value, 1e-6));
    out.push(Check::approx("strict equiprobable lambda=0.5 E=0.25", 0.137925, strict_equiprob_capacity(0.5, 0.25)?.value, 1e-6));

    for (l, e) in [(0.4, 0.5), (0.4, 0.7), (0.45, 0.5), (0.45, 0.7), (0.5, 0.5), (0.5, 0.7)] {
        let gap = strict_optimal_capacity(l, e)?.value - strict_equiprob_capacity(l, e)?.value;
        out.push(Check::at_least(format!("strict optimal - equiprobable gap, lambda={l} E={e}"), 5e-4, gap, 0.0));
    }
    for (l, e) in [(0.3, 1.0), (0.5, 1.0), (0.0, 0.25), (0.0, 0.75), (1.0, 0.25), (1.0, 0.75)] {
        let gap = strict_optimal_capacity(l, e)?.value - strict_equiprob_capacity(l, e)?.value;
        out.push(Check::approx(format!("strict optimal = equiprobable, lambda={l} E={e}"), 0.0, gap, 1e-6));
    }

    out.extend(dual_checks()?);
    out.extend(dense_coding_checks()?);
    Ok(out)
}

fn dual_checks() -> CliResult<Vec<Check>> {
    let mut out = Vec::new();
    let rl = 0.8f64.sqrt();
    let rm = (1.0 - rl) / 2.0;
    out.push(Check::approx("dual zero branch E=0.04 L=0.9", 0.0, dual_noiseless_capacity(0.04, 0.9)?.value, 0.0));
    out.push(Check::approx("dual noiseless E=0.6 L=0.9", 1.0 - h(rm), dual_noiseless_capacity(0.6, 0.9)?.value, 1e-12));
    out.push(Check::approx("dual noiseless E=0.3 L=0.9", h(0.3) - h(rm), dual_noiseless_capacity(0.3, 0.9)?.value, 1e-12));
    out.push(Check::approx(
        "dual dephasing equiprobable E=0.3 L=0.9",
        h(0.3) - 0.5 * (h(rm) + h(0.6 - rm)),
        dual_dephasing_equiprob_capacity(0.3, 0.9)?.value,
        1e-12,
    ));

    let ham = Hamiltonian::new(2)?;
    let (mut chi_dev, mut energy_dev, mut purity_dev) = (0.0f64, 0.0f64, 0.0f64);
    for l in [0.6, 0.75, 0.9, 1.0] {
        for e in [0.1, 0.2, 0.3, 0.45, 0.5, 0.8] {
            let results: [CapacityResult; 3] = [
                dual_noiseless_capacity(e, l)?,
                dual_dephasing_equiprob_capacity(e, l)?,
                dual_dephasing_optimal_capacity(e, l)?,
            ];
            for r in results {
                let Some(ens) = r.optimal_ensemble.as_ref() else {
                    continue;
                };
                if let Some(chi) = r.ensemble_chi() {
                    chi_dev = chi_dev.max((chi? - r.value).abs());
                }
                energy_dev = energy_dev.max((energy(&ens.average_state(), &ham)? - e.min(0.5)).abs());
                for (_, s) in ens.items() {
                    purity_dev = purity_dev.max((purity(s) - l).abs());
                }
            }
        }
    }
    out.push(Check::approx("dual ensembles: chi vs value", 0.0, chi_dev, 1e-9));
    out.push(Check::approx("dual ensembles: average energy vs min(E, 1/2)", 0.0, energy_dev, 1e-9));
    out.push(Check::approx("dual ensembles: member purity vs L", 0.0, purity_dev, 1e-9));
    Ok(out)
}

fn dense_coding_checks() -> CliResult<Vec<Check>> {
    let mut out = Vec::new();
    let ep = (1.0 - 0.5f64.sqrt()) / 2.0;
    out.push(Check::approx("dense coding d=2 E=0.25 closed form", 2.0 * h(ep), ec_dc_capacity_d2(0.25)?.value, 1e-9));
    out.push(Check::approx("dense coding d=2 E=0.5", 2.0, ec_dc_capacity(2, 0.5)?.value, 1e-9));

    let routes = (1..=50).map(|i| {
        let e = i as f64 / 102.0;
        Ok((ec_dc_capacity(2, e)?.value, ec_dc_capacity_d2(e)?.value))
    });
    let routes: Vec<(f64, f64)> = routes.collect::<CliResult<_>>()?;
    out.push(Check::approx("dense coding d=2: nested search vs closed form, 50 points", 0.0, max_dev(routes), 1e-6));

    let ratios = (1..=100)
        .map(|i| {
            let e = 0.5 * i as f64 / 101.0;
            Ok(ec_dc_capacity_d2(e)?.value / h(e))
        })
        .collect::<CliResult<Vec<f64>>>()?;
    out.push(Check::above("advantage ratio increasing on 100 points in (0, 1/2) (min step)", 0.0, min_step(&ratios)));
    out.push(Check::approx("advantage ratio at E=1/2", 2.0, ec_dc_capacity_d2(0.5)?.value / h(0.5), 1e-9));
    Ok(out)
}

/// Best Holevo quantity over pairs of pure qubit states `(θ₁, 0)` and
/// `(θ₂, π)` on a `res × res` polar grid, with the weight set so that the
/// mean energy is exactly `E`.
pub fn bloch_pair_oracle(e: f64, res: usize) -> f64 {
    let thetas: Vec<f64> = (0..res)
        .map(|i| std::f64::consts::PI * i as f64 / (res - 1) as f64)
        .collect();
    let mut best = 0.0f64;
    for &t1 in &thetas {
        let (x1, z1) = (t1.sin(), t1.cos());
        let e1 = (1.0 - z1) / 2.0;
        for &t2 in &thetas {
            let (x2, z2) = (-t2.sin(), t2.cos());
            let e2 = (1.0 - z2) / 2.0;
            let p = if (e2 - e1).abs() < 1e-15 {
                if (e1 - e).abs() > 1e-12 {
                    continue;
                }
                0.5
            } else {
                (e2 - e) / (e2 - e1)
            };
            if !(0.0..=1.0).contains(&p) {
                continue;
            }
            let r = ((p * x1 + (1.0 - p) * x2).powi(2) + (p * z1 + (1.0 - p) * z2).powi(2)).sqrt();
            best = best.max(bloch_entropy(r));
        }
    }
    best
}

/// Strict-constraint dephasing oracle: `p₀ × amplitude` grid over the
/// pair `(E, +)`, `(E − Δ, −)` with `Δ = E − a²`, evaluated on Bloch
/// vectors after the channel.
pub fn dephasing_pair_oracle(lambda: f64, e: f64, res: usize) -> f64 {
    let shrink = 2.0 * lambda - 1.0;
    let state = |en: f64, sign: f64| {
        let z = 1.0 - 2.0 * en;
        let x = sign * 2.0 * (en * (1.0 - en)).max(0.0).sqrt() * shrink;
        (x, z)
    };
    let (xa, za) = state(e, 1.0);
    let sa = bloch_entropy(xa.hypot(za));
    let top = e.sqrt();
    let mut best = 0.0f64;
    for j in 0..res {
        let a = top * j as f64 / (res - 1) as f64;
        let (xb, zb) = state(a * a, -1.0);
        let sb = bloch_entropy(xb.hypot(zb));
        for i in 0..res {
            let p = i as f64 / (res - 1) as f64;
            let (x, z) = (p * xa + (1.0 - p) * xb, p * za + (1.0 - p) * zb);
            let chi = bloch_entropy(x.hypot(z)) - p * sa - (1.0 - p) * sb;
            best = best.max(chi);
        }
    }
    best
}

pub fn oracles(settings: &Settings) -> CliResult<Vec<Check>> {
    let pool = settings.pool()?;
    let mut out = Vec::new();

    let bloch: Vec<(f64, f64)> = pool.install(|| {
        [0.1, 0.25, 0.4]
            .par_iter()
            .map(|&e| (e, bloch_pair_oracle(e, 1000)))
            .collect()
    });
    for (e, oracle) in bloch {
        out.push(Check::at_most(format!("Bloch pair oracle E={e} <= H(E) + 1e-4"), h(e), oracle, 1e-4));
        out.push(Check::at_least(format!("Bloch pair oracle E={e} >= H(E) - 1e-3"), h(e), oracle, 1e-3));
    }

    let pairs: Vec<(f64, f64)> = [0.2, 0.4, 0.45]
        .iter()
        .flat_map(|&l| [0.3, 0.5, 0.7].map(|e| (l, e)))
        .collect();
    let deph = pool.install(|| {
        pairs
            .par_iter()
            .map(|&(l, e)| Ok((l, e, dephasing_pair_oracle(l, e, 2001), strict_optimal_capacity(l, e)?.value)))
            .collect::<CliResult<Vec<_>>>()
    })?;
    for (l, e, oracle, opt) in deph {
        out.push(Check::approx(format!("strict optimal dephasing vs 2001^2 oracle, lambda={l} E={e}"), oracle, opt, 1e-5));
    }

    // Qubit dense coding with the shared-state energy E' and weight q0 free.
    let budget = 0.25;
    let prob = OptimizationProblem::new(vec![(0.0, 1.0), (0.0, 0.5)], |x: &[f64]| Ok(h(x[0]) + h(x[1])))?
        .with_constraint(move |x: &[f64]| x[0] * x[1] + (1.0 - x[0]) * (1.0 - x[1]) - budget);
    let found = maximize(&prob, &OptimizerConfig::for_dimension(2, settings.seed))?;
    let (grid, _) = grid_oracle(&prob, &[2001, 2001])?;
    let closed = 2.0 * h((1.0 - 0.5f64.sqrt()) / 2.0);
    out.push(Check::at_least("optimizer vs 2001^2 grid oracle, qubit dense coding E=0.25", grid, found.value, 1e-4));
    out.push(Check::approx("optimizer vs closed form, qubit dense coding E=0.25", closed, found.value, 1e-4));

    let mut rng = SplitMix64::new(settings.seed);
    for (d, e) in [(3usize, 0.5), (4, 1.0), (5, 0.7)] {
        let gibbs = thermal_weights(d, e)?;
        let best = gibbs.entropy();
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..1000 {
            let q = random_with_mean(d, e, &mut rng);
            worst = worst.max(capcon_core::quantum::shannon_entropy(&q)?);
        }
        out.push(Check::at_most(format!("Gibbs weights maximize entropy at mean energy, d={d} E={e}, 1000 samples"), best, worst, 1e-12));
    }
    Ok(out)
}

/// Random distribution on `0..d` with mean exactly `e`, or the Gibbs
/// weights if the sampled mixture cannot reach it.
fn random_with_mean(d: usize, e: f64, rng: &mut SplitMix64) -> Vec<f64> {
    loop {
        let raw: Vec<f64> = (0..d).map(|_| rng.next_f64() + 1e-3).collect();
        let total: f64 = raw.iter().sum();
        let q: Vec<f64> = raw.iter().map(|x| x / total).collect();
        let mean: f64 = q.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
        // Mix with a point mass at the end of the spectrum on the far side of E.
        let (target, end) = if mean > e { (0.0, 0) } else { ((d - 1) as f64, d - 1) };
        let t = (e - mean) / (target - mean);
        if (0.0..1.0).contains(&t) {
            let mut out: Vec<f64> = q.iter().map(|p| (1.0 - t) * p).collect();
            out[end] += t;
            return out;
        }
    }
}

pub fn no_go(seed: u64) -> CliResult<Vec<Check>> {
    let mut out = Vec::new();
    for e in [0.25, 0.4] {
        let r = passive_no_go_check(500, e, seed)?;
        out.push(Check {
            check: format!("passive encodings E={e}, {} trials, max chi <= H(E)", r.trials),
            expected: Expected::Text(format!("<= {}", r.bound)),
            got: r.max_chi,
            tol: 1e-9,
            pass: r.holds && r.max_chi <= h(e) + 1e-9,
        });
    }
    Ok(out)
}
