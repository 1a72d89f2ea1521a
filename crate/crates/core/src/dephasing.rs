//! Energy-constrained capacities of the qubit dephasing channel
//! `Λ_λ(ρ) = λρ + (1 − λ) σ_z ρ σ_z`.
//!
//! Encodings use two pure states `√(1 − e)|0⟩ ± √e|1⟩`. Under an average
//! constraint the energies are `E ± Δ`; under a strict one they are `E`
//! (phase `+`) and `E − Δ` (phase `−`).

use crate::capacity::{CapacityResult, OptimizerInfo};
use crate::error::{domain, Result};
use crate::optimize::{multistart_golden_max, nelder_mead_max, OptimizationProblem};
use crate::quantum::{apply_channel, h2, holevo_chi, ChannelSpec, DensityOperator, Ensemble};

/// Interval width for the one-parameter line searches.
pub const LINE_TOL: f64 = 1e-10;
const BRACKETS: usize = 3;
/// Points per axis of the coarse `(p₀, Δ)` grid.
pub const COARSE_GRID: usize = 201;
const REFINE_ITERS: usize = 500;
const REFINE_STARTS: usize = 3;

/// One dephasing capacity query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DephasingQuery {
    pub lambda: f64,
    pub energy: f64,
}

impl DephasingQuery {
    pub fn new(lambda: f64, energy: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(domain(format!("λ = {lambda} outside [0, 1]")));
        }
        if !(0.0..=1.0).contains(&energy) {
            return Err(domain(format!("qubit energy {energy} outside [0, 1]")));
        }
        Ok(Self { lambda, energy })
    }

    fn channel(&self) -> ChannelSpec {
        ChannelSpec::Dephasing {
            lambda: self.lambda,
        }
    }
}

/// `Proj(√(1 − e)|0⟩ + sign·√e|1⟩)`.
pub fn ansatz_state(e: f64, sign: f64) -> Result<DensityOperator> {
    let e = e.clamp(0.0, 1.0);
    DensityOperator::pure_real(&[(1.0 - e).sqrt(), sign * e.sqrt()])
}

fn pair_ensemble(p0: f64, e0: f64, e1: f64) -> Result<Ensemble> {
    Ensemble::new(vec![
        (p0, ansatz_state(e0, 1.0)?),
        (1.0 - p0, ansatz_state(e1, -1.0)?),
    ])
}

fn output_chi(q: &DephasingQuery, ens: &Ensemble) -> Result<f64> {
    let ch = q.channel();
    holevo_chi(&ens.try_map(|s| apply_channel(&ch, s))?)
}

fn finish(q: &DephasingQuery, value: f64, ens: Ensemble) -> CapacityResult {
    CapacityResult::new(value).with_ensemble(ens, q.channel())
}

/// Average constraint, equiprobable messages: maximum over `Δ ∈ [0, E]`.
pub fn avg_equiprob_capacity(lambda: f64, energy: f64) -> Result<CapacityResult> {
    let q = DephasingQuery::new(lambda, energy)?;
    if energy >= 0.5 {
        let ens = pair_ensemble(0.5, 0.0, 1.0)?;
        return Ok(finish(&q, 1.0, ens).with_parameter("delta", 0.5));
    }
    let objective = |delta: f64| {
        pair_ensemble(0.5, energy + delta, energy - delta)
            .and_then(|ens| output_chi(&q, &ens))
            .unwrap_or(f64::NEG_INFINITY)
    };
    let (delta, _) = multistart_golden_max(objective, 0.0, energy, BRACKETS, LINE_TOL);
    let ens = pair_ensemble(0.5, energy + delta, energy - delta)?;
    let value = output_chi(&q, &ens)?;
    Ok(finish(&q, value, ens).with_parameter("delta", delta))
}

/// Average constraint, optimized probabilities: `H(E)` below `E = ½`,
/// achieved by `{1 − E: |0⟩, E: |1⟩}` for every `λ`.
pub fn avg_optimal_capacity(lambda: f64, energy: f64) -> Result<CapacityResult> {
    let q = DephasingQuery::new(lambda, energy)?;
    let p1 = energy.min(0.5);
    let mut items = vec![(1.0 - p1, DensityOperator::basis(2, 0)?)];
    if p1 > 0.0 {
        items.push((p1, DensityOperator::basis(2, 1)?));
    }
    let ens = Ensemble::new(items)?;
    let mut res = finish(&q, h2(p1), ens).with_parameter("p0", 1.0 - p1);
    res.unique = lambda != 0.0 && lambda != 1.0;
    Ok(res)
}

/// Strict constraint, equiprobable messages: `ρ₀` at energy `E`, `ρ₋` at
/// `E − Δ`, maximized over `Δ ∈ [0, E]`.
pub fn strict_equiprob_capacity(lambda: f64, energy: f64) -> Result<CapacityResult> {
    let q = DephasingQuery::new(lambda, energy)?;
    let objective = |delta: f64| strict_chi(&q, 0.5, delta).unwrap_or(f64::NEG_INFINITY);
    let (delta, _) = multistart_golden_max(objective, 0.0, energy, BRACKETS, LINE_TOL);
    let ens = pair_ensemble(0.5, energy, energy - delta)?;
    let value = output_chi(&q, &ens)?;
    Ok(finish(&q, value, ens).with_parameter("delta", delta))
}

fn strict_chi(q: &DephasingQuery, p0: f64, delta: f64) -> Result<f64> {
    output_chi(q, &pair_ensemble(p0, q.energy, q.energy - delta)?)
}

/// Strict constraint, optimized probabilities: maximum over
/// `(p₀, Δ) ∈ [0, 1] × [0, E]` by a coarse grid and simplex refinement.
pub fn strict_optimal_capacity(lambda: f64, energy: f64) -> Result<CapacityResult> {
    let q = DephasingQuery::new(lambda, energy)?;
    if energy == 0.0 {
        let ens = pair_ensemble(1.0, 0.0, 0.0)?;
        return Ok(finish(&q, 0.0, ens)
            .with_parameter("p0", 1.0)
            .with_parameter("delta", 0.0));
    }

    let mut evaluations = 0;
    let mut cells: Vec<(f64, [f64; 2])> = Vec::with_capacity(COARSE_GRID * COARSE_GRID);
    let last = (COARSE_GRID - 1) as f64;
    for i in 0..COARSE_GRID {
        let p0 = i as f64 / last;
        for j in 0..COARSE_GRID {
            let delta = energy * j as f64 / last;
            cells.push((strict_chi(&q, p0, delta)?, [p0, delta]));
            evaluations += 1;
        }
    }
    cells.sort_by(|a, b| b.0.total_cmp(&a.0));

    let equi = strict_equiprob_capacity(lambda, energy)?;
    let mut starts: Vec<[f64; 2]> = cells.iter().take(REFINE_STARTS).map(|c| c.1).collect();
    starts.push([0.5, equi.parameter("delta").unwrap_or(0.0)]);

    let prob = OptimizationProblem::new(vec![(0.0, 1.0), (0.0, energy)], |x| {
        strict_chi(&q, x[0], x[1])
    })?;
    let (mut best, mut arg, mut converged) = (cells[0].0, cells[0].1.to_vec(), false);
    if equi.value > best {
        best = equi.value;
        arg = starts[REFINE_STARTS].to_vec();
    }
    for start in &starts {
        let local = nelder_mead_max(&prob, start, 0.005, REFINE_ITERS, 0.0)?;
        evaluations += local.evaluations;
        if local.value > best {
            best = local.value;
            arg = local.argmax;
            converged = local.converged;
        }
    }

    let ens = pair_ensemble(arg[0], energy, energy - arg[1])?;
    let value = output_chi(&q, &ens)?;
    let mut res = finish(&q, value, ens)
        .with_parameter("p0", arg[0])
        .with_parameter("delta", arg[1]);
    res.optimizer_info = Some(OptimizerInfo {
        evaluations,
        converged,
        argmax: arg,
    });
    Ok(res)
}
