//! Numerical dense-coding capacities over the qubit parametrization
//!
//! ```text
//! |ψ⟩ = √(1 − E')|00⟩ + √E'|11⟩,   U₀ = I,   U_j = exp(−i μ_j n̂_j·σ⃗)  (j = 1, 2, 3)
//! n̂_j = (sin θ_j cos φ_j, sin θ_j sin φ_j, cos θ_j)
//! ```
//!
//! with message probabilities either uniform or free. The channel acts on
//! the sender qubit only and is either the identity or complete dephasing.
//! The energy bound applies to the sender marginal after encoding, per
//! message (strict) or on the ensemble average.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::capacity::{CapacityResult, Constraint, OptimizerInfo, Probabilities};
use crate::error::{domain, Error, Result};
use crate::linalg::{pauli, CMatrix};
use crate::optimize::{maximize, OptimizationProblem, OptimizerConfig};
use crate::quantum::{apply_channel_local, h2, holevo_chi, ChannelSpec, DensityOperator, Ensemble};
use crate::rng::SplitMix64;

const MESSAGES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DcChannel {
    Noiseless,
    /// `λ = ½` dephasing on the sender qubit.
    Dephasing,
}

impl DcChannel {
    fn spec(self) -> ChannelSpec {
        match self {
            Self::Noiseless => ChannelSpec::Identity,
            Self::Dephasing => ChannelSpec::Dephasing { lambda: 0.5 },
        }
    }
}

/// Which of the four numerical capacities to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct DcVariant {
    pub channel: DcChannel,
    pub constraint: Constraint,
    pub probabilities: Probabilities,
}

impl DcVariant {
    pub fn new(channel: DcChannel, constraint: Constraint, probabilities: Probabilities) -> Self {
        Self {
            channel,
            constraint,
            probabilities,
        }
    }

    pub fn dimension(&self) -> usize {
        match self.probabilities {
            Probabilities::Equiprobable => 1 + 3 * (MESSAGES - 1),
            Probabilities::Optimized => 1 + 3 * (MESSAGES - 1) + MESSAGES,
        }
    }
}

/// Budget for the stochastic search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DcSearch {
    pub seed: u64,
    /// Independent evolution-strategy runs, each with its own seed.
    pub restarts: usize,
    pub max_evals: usize,
    pub refine_iters: usize,
}

impl Default for DcSearch {
    fn default() -> Self {
        Self {
            seed: 42,
            restarts: 8,
            max_evals: 20_000,
            refine_iters: 3000,
        }
    }
}

struct Decoded {
    e_prime: f64,
    unitaries: [CMatrix; MESSAGES],
    probs: [f64; MESSAGES],
}

fn decode(variant: &DcVariant, x: &[f64]) -> Decoded {
    let identity = CMatrix::identity(2);
    let rot = |j: usize| pauli::rotation(x[1 + 3 * j], x[2 + 3 * j], x[3 + 3 * j]);
    let unitaries = [identity, rot(0), rot(1), rot(2)];
    let probs = match variant.probabilities {
        Probabilities::Equiprobable => [0.25; MESSAGES],
        Probabilities::Optimized => {
            let w = &x[1 + 3 * (MESSAGES - 1)..];
            let total: f64 = w.iter().sum();
            if total < 1e-12 {
                [0.25; MESSAGES]
            } else {
                [w[0] / total, w[1] / total, w[2] / total, w[3] / total]
            }
        }
    };
    Decoded {
        e_prime: x[0],
        unitaries,
        probs,
    }
}

/// Sender energy `⟨1|U ρ_S U†|1⟩` with `ρ_S = diag(1 − E', E')`.
fn sender_energy(u: &CMatrix, e_prime: f64) -> f64 {
    u[(1, 0)].norm_sqr() * (1.0 - e_prime) + u[(1, 1)].norm_sqr() * e_prime
}

fn encoded_state(u: &CMatrix, e_prime: f64) -> Result<DensityOperator> {
    let (a, b) = ((1.0 - e_prime).max(0.0).sqrt(), e_prime.max(0.0).sqrt());
    // (U ⊗ I)(a|00⟩ + b|11⟩), index = 2·sender + receiver.
    let v = [u[(0, 0)] * a, u[(0, 1)] * b, u[(1, 0)] * a, u[(1, 1)] * b];
    DensityOperator::pure(&v)
}

/// Input ensemble for a parameter vector.
pub fn dc_ensemble(variant: &DcVariant, x: &[f64]) -> Result<Ensemble> {
    let dec = decode(variant, x);
    let items = dec
        .unitaries
        .iter()
        .zip(dec.probs)
        .map(|(u, p)| Ok((p, encoded_state(u, dec.e_prime)?)))
        .collect::<Result<Vec<_>>>()?;
    Ensemble::new(items)
}

/// Holevo quantity of the ensemble after the channel.
pub fn dc_objective(variant: &DcVariant, x: &[f64]) -> Result<f64> {
    let ch = variant.channel.spec();
    let out = dc_ensemble(variant, x)?.try_map(|s| apply_channel_local(&ch, s, (2, 2)))?;
    holevo_chi(&out)
}

/// Per-message sender energies and message probabilities.
pub fn dc_energies(variant: &DcVariant, x: &[f64]) -> ([f64; MESSAGES], [f64; MESSAGES]) {
    let dec = decode(variant, x);
    let mut e = [0.0; MESSAGES];
    for (slot, u) in e.iter_mut().zip(&dec.unitaries) {
        *slot = sender_energy(u, dec.e_prime);
    }
    (e, dec.probs)
}

fn bounds(variant: &DcVariant, energy: f64) -> Vec<(f64, f64)> {
    let mut b = vec![(0.0, energy.min(1.0))];
    for _ in 1..MESSAGES {
        b.extend([(0.0, TAU), (0.0, PI), (0.0, TAU)]);
    }
    if variant.probabilities == Probabilities::Optimized {
        b.extend([(0.0, 1.0); MESSAGES]);
    }
    b
}

/// Extends an equiprobable parameter vector with uniform raw weights so it
/// can seed an optimized-probability search.
pub fn with_uniform_weights(x: &[f64]) -> Vec<f64> {
    let mut v = x[..1 + 3 * (MESSAGES - 1)].to_vec();
    v.extend([1.0; MESSAGES]);
    v
}

/// Numerical capacity of one variant at energy `E ∈ (0, 1]`.
///
/// `warm` points join the initial population of every restart.
pub fn dc_capacity(
    energy: f64,
    variant: DcVariant,
    search: &DcSearch,
    warm: &[Vec<f64>],
) -> Result<CapacityResult> {
    if !(energy > 0.0 && energy <= 1.0) {
        return Err(domain(format!("qubit dense coding needs 0 < E ≤ 1, got {energy}")));
    }
    if search.restarts == 0 {
        return Err(domain("at least one restart is required"));
    }
    let mut prob = OptimizationProblem::new(bounds(&variant, energy), move |x| {
        dc_objective(&variant, x)
    })?;
    match variant.constraint {
        Constraint::Strict => {
            for i in 0..MESSAGES {
                prob = prob.with_constraint(move |x| dc_energies(&variant, x).0[i] - energy);
            }
        }
        Constraint::Average => {
            prob = prob.with_constraint(move |x| {
                let (e, p) = dc_energies(&variant, x);
                e.iter().zip(p).map(|(a, b)| a * b).sum::<f64>() - energy
            });
        }
    }
    for w in warm.iter().filter(|w| w.len() == variant.dimension()) {
        prob = prob.with_initial_point(w.clone());
    }

    let mut seeds = SplitMix64::new(search.seed);
    let mut best: Option<crate::optimize::Maximum> = None;
    let mut evaluations = 0;
    for _ in 0..search.restarts {
        let cfg = OptimizerConfig {
            seed: seeds.next_u64(),
            max_evals: search.max_evals,
            refine_iters: search.refine_iters,
            ..OptimizerConfig::for_dimension(variant.dimension(), 0)
        };
        let run = match maximize(&prob, &cfg) {
            Ok(run) => run,
            Err(Error::InfeasibleProblem { .. }) => continue,
            Err(e) => return Err(e),
        };
        evaluations += run.diagnostics.evaluations;
        if best.as_ref().is_none_or(|b| run.value > b.value) {
            best = Some(run);
        }
    }
    let best = best.ok_or(Error::InfeasibleProblem { evaluations })?;

    let (energies, probs) = dc_energies(&variant, &best.argmax);
    let mean: f64 = energies.iter().zip(probs).map(|(e, p)| e * p).sum();
    let e_prime = best.argmax[0];
    let mut res = CapacityResult::new(best.value)
        .with_ensemble(dc_ensemble(&variant, &best.argmax)?, variant.channel.spec())
        .with_local_dims((2, 2))
        .with_parameter("e_prime", e_prime)
        .with_parameter("avg_energy", mean)
        .with_parameter("max_energy", energies.iter().copied().fold(0.0, f64::max));
    if (1.0 - 2.0 * e_prime).abs() > 1e-9 {
        res = res.with_parameter("q0", 1.0 - (mean - e_prime) / (1.0 - 2.0 * e_prime));
    }
    res.optimizer_info = Some(OptimizerInfo {
        evaluations,
        converged: best.diagnostics.converged,
        argmax: best.argmax,
    });
    Ok(res)
}

/// Entanglement-assisted capacity of the completely dephasing channel.
pub fn dc_dephasing_capacity(
    energy: f64,
    constraint: Constraint,
    probabilities: Probabilities,
    search: &DcSearch,
) -> Result<CapacityResult> {
    let variant = DcVariant::new(DcChannel::Dephasing, constraint, probabilities);
    let warm = match (constraint, probabilities) {
        (Constraint::Strict, Probabilities::Equiprobable) => Vec::new(),
        _ => {
            let eq = dc_capacity(
                energy,
                DcVariant::new(DcChannel::Dephasing, Constraint::Strict, Probabilities::Equiprobable),
                search,
                &[],
            )?;
            let x = eq.optimizer_info.map(|i| i.argmax).unwrap_or_default();
            if probabilities == Probabilities::Optimized {
                vec![with_uniform_weights(&x)]
            } else {
                vec![x]
            }
        }
    };
    dc_capacity(energy, variant, search, &warm)
}

/// One row of the noiseless dense-coding hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HierarchyRow {
    pub energy: f64,
    pub avg_optimized: f64,
    pub avg_equiprobable: f64,
    pub strict_optimized: f64,
    pub strict_equiprobable: f64,
    pub unassisted: f64,
}

/// The four noiseless dense-coding capacities at `E ∈ (0, ½)` plus the
/// unassisted `H(E)`. Each run is seeded with the optimizers of the
/// variants whose feasible sets it contains.
pub fn dc_hierarchy_row(energy: f64, search: &DcSearch) -> Result<HierarchyRow> {
    if !(energy > 0.0 && energy < 0.5) {
        return Err(domain(format!("hierarchy energies lie in (0, 1/2), got {energy}")));
    }
    let v = |c, p| DcVariant::new(DcChannel::Noiseless, c, p);
    let arg = |r: &CapacityResult| r.optimizer_info.as_ref().map(|i| i.argmax.clone()).unwrap_or_default();

    let strict_eq = dc_capacity(energy, v(Constraint::Strict, Probabilities::Equiprobable), search, &[])?;
    let strict_opt = dc_capacity(
        energy,
        v(Constraint::Strict, Probabilities::Optimized),
        search,
        &[with_uniform_weights(&arg(&strict_eq))],
    )?;
    let avg_eq = dc_capacity(
        energy,
        v(Constraint::Average, Probabilities::Equiprobable),
        search,
        &[arg(&strict_eq)],
    )?;
    let avg_opt = dc_capacity(
        energy,
        v(Constraint::Average, Probabilities::Optimized),
        search,
        &[with_uniform_weights(&arg(&avg_eq)), arg(&strict_opt)],
    )?;
    Ok(HierarchyRow {
        energy,
        avg_optimized: avg_opt.value,
        avg_equiprobable: avg_eq.value,
        strict_optimized: strict_opt.value,
        strict_equiprobable: strict_eq.value,
        unassisted: h2(energy),
    })
}

pub fn dc_hierarchy(grid: &[f64], search: &DcSearch) -> Result<Vec<HierarchyRow>> {
    grid.iter().map(|&e| dc_hierarchy_row(e, search)).collect()
}
