//! Energy-constrained dense coding with a shared state
//! `|ψ⟩ = Σ_n √p_n |n, n⟩` whose Schmidt weights are Gibbs weights at
//! energy `E'`.
//!
//! The sender applies `X^k Z^m` with probability `q_k/d`. Group `k = 0`
//! leaves the sender's energy at `E'`; group `k` moves it to
//! `E'_k = Σ_n ((n + k) mod d) p_n`.

use serde::Serialize;

use crate::capacity::CapacityResult;
use crate::error::{domain, Error, Result};
use crate::linalg::{clock, matrix_power, shift, CMatrix, C64};
use crate::noiseless::noiseless_capacity;
use crate::optimize::multistart_golden_max;
use crate::quantum::{
    apply_channel_local, check_distribution, entropy_bits, h2, holevo_chi, partial_trace,
    random_state_vector, ChannelSpec, DensityOperator, Ensemble, PhaseTerm, Subsystem, PROB_TOL,
};
use crate::rng::SplitMix64;
use crate::thermal::{scale, thermal_weights};
use crate::Constraint;

/// The pre-shared state `Σ_n √p_n |n, n⟩`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharedState {
    pub d: usize,
    pub e_prime: f64,
    pub schmidt_weights: Vec<f64>,
}

impl SharedState {
    /// Gibbs Schmidt weights at `E' ∈ [0, (d − 1)/2]`; `E' = 0` is the
    /// product state `|0, 0⟩`.
    pub fn thermal(d: usize, e_prime: f64) -> Result<Self> {
        let top = crate::thermal::emergent_scale(d)?;
        if !(0.0..=top).contains(&e_prime) {
            return Err(domain(format!("E' = {e_prime} outside [0, {top}]")));
        }
        Ok(Self {
            d,
            e_prime,
            schmidt_weights: gibbs_or_ground(d, e_prime)?,
        })
    }

    /// Arbitrary Schmidt weights.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        check_distribution(&weights, PROB_TOL)?;
        if weights.len() < 2 {
            return Err(domain("shared state needs d ≥ 2"));
        }
        Ok(Self {
            d: weights.len(),
            e_prime: mean_level(&weights),
            schmidt_weights: weights,
        })
    }

    pub fn maximally_entangled(d: usize) -> Result<Self> {
        Self::from_weights(vec![1.0 / d as f64; d])
    }

    /// Amplitudes on `C^d ⊗ C^d`, sender first.
    pub fn state_vector(&self) -> Vec<C64> {
        let d = self.d;
        let mut v = vec![C64::new(0.0, 0.0); d * d];
        for (n, p) in self.schmidt_weights.iter().enumerate() {
            v[n * d + n] = C64::new(p.sqrt(), 0.0);
        }
        v
    }

    pub fn entanglement_entropy(&self) -> f64 {
        entropy_bits(&self.schmidt_weights)
    }

    /// `2√(p₀p₁)` for a two-qubit state.
    pub fn concurrence(&self) -> Result<f64> {
        match self.schmidt_weights.as_slice() {
            [p0, p1] => Ok(2.0 * (p0 * p1).sqrt()),
            _ => Err(Error::DimensionMismatch {
                expected: 2,
                got: self.d,
            }),
        }
    }
}

fn mean_level(weights: &[f64]) -> f64 {
    weights.iter().enumerate().map(|(n, p)| n as f64 * p).sum()
}

fn gibbs_or_ground(d: usize, e: f64) -> Result<Vec<f64>> {
    if e <= 0.0 {
        let mut w = vec![0.0; d];
        w[0] = 1.0;
        return Ok(w);
    }
    Ok(thermal_weights(d, e.min(scale(d)))?.weights)
}

/// `Σ_n ((n + k) mod d) p_n`.
pub fn shifted_energy(k: usize, weights: &[f64]) -> Result<f64> {
    let d = weights.len();
    if k >= d {
        return Err(Error::IndexOutOfRange { index: k, dim: d });
    }
    Ok(weights
        .iter()
        .enumerate()
        .map(|(n, p)| ((n + k) % d) as f64 * p)
        .sum())
}

/// Group probabilities `q_k` with the sender energies they produce.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EncodingPlan {
    pub d: usize,
    pub group_weights: Vec<f64>,
    pub shifted_energies: Vec<f64>,
}

impl EncodingPlan {
    pub fn new(group_weights: Vec<f64>, psi: &SharedState) -> Result<Self> {
        if group_weights.len() != psi.d {
            return Err(Error::DimensionMismatch {
                expected: psi.d,
                got: group_weights.len(),
            });
        }
        check_distribution(&group_weights, PROB_TOL)?;
        let shifted_energies = (0..psi.d)
            .map(|k| shifted_energy(k, &psi.schmidt_weights))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            d: psi.d,
            group_weights,
            shifted_energies,
        })
    }

    /// `Σ_k q_k E'_k`.
    pub fn average_energy(&self) -> f64 {
        self.group_weights
            .iter()
            .zip(&self.shifted_energies)
            .map(|(q, e)| q * e)
            .sum()
    }

    /// The `d²` encoded states `(X^k Z^m ⊗ I)|ψ⟩` with weights `q_k/d`.
    pub fn ensemble(&self, psi: &SharedState) -> Result<Ensemble> {
        let d = self.d;
        let v = psi.state_vector();
        let id = CMatrix::identity(d);
        let (x, z) = (shift(d), clock(d));
        let mut items = Vec::with_capacity(d * d);
        for (k, q) in self.group_weights.iter().enumerate() {
            let xk = matrix_power(&x, k);
            for m in 0..d {
                let u = &xk * &matrix_power(&z, m);
                let w = u.kron(&id).apply(&v);
                items.push((q / d as f64, DensityOperator::pure(&w)?));
            }
        }
        Ensemble::new(items)
    }
}

/// `log₂ d + H(p)`, the capacity without an energy bound.
pub fn unconstrained_dc_capacity(psi: &SharedState) -> f64 {
    (psi.d as f64).log2() + psi.entanglement_entropy()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ViolationReport {
    pub avg_energy: f64,
    pub violates: bool,
}

/// Sender energy of the uniform `{X^k Z^m}` encoding, compared with `E`.
pub fn violation_check(d: usize, energy: f64, psi: &SharedState) -> Result<ViolationReport> {
    if psi.d != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: psi.d,
        });
    }
    let plan = EncodingPlan::new(vec![1.0 / d as f64; d], psi)?;
    let avg_energy = plan.average_energy();
    Ok(ViolationReport {
        avg_energy,
        violates: avg_energy > energy + 1e-12,
    })
}

/// Maximum of `H(q)` subject to `Σ q_k e_k ≤ budget`: `q_k ∝ e^{−γ e_k}` with
/// `γ ≥ 0` found by bisection.
pub fn max_entropy_under_budget(energies: &[f64], budget: f64) -> Result<Vec<f64>> {
    let mean = |g: f64| -> (Vec<f64>, f64) {
        let lo = energies.iter().copied().fold(f64::INFINITY, f64::min);
        let w: Vec<f64> = energies.iter().map(|e| (-g * (e - lo)).exp()).collect();
        let z: f64 = w.iter().sum();
        let q: Vec<f64> = w.into_iter().map(|x| x / z).collect();
        let m = q.iter().zip(energies).map(|(a, b)| a * b).sum();
        (q, m)
    };
    let (uniform, m0) = mean(0.0);
    if m0 <= budget {
        return Ok(uniform);
    }
    let min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    if min > budget + 1e-15 {
        return Err(domain(format!("budget {budget} below the smallest energy {min}")));
    }
    let mut hi = 1.0;
    while mean(hi).1 > budget {
        hi *= 2.0;
        if hi > 1e12 {
            // Only the minimum-energy entries fit the budget.
            return Ok(mean(hi).0);
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if mean(mid).1 > budget {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(mean(hi).0)
}

/// Average-constrained dense-coding capacity for dimension `d`: the
/// maximum over `E'` and `q` of `H(q) + H(p^{E'})` with `Σ q_k E'_k ≤ E`.
pub fn ec_dc_capacity(d: usize, energy: f64) -> Result<CapacityResult> {
    let top = crate::thermal::emergent_scale(d)?;
    if energy.is_nan() || energy < 0.0 || energy.is_infinite() {
        return Err(domain(format!("energy {energy} must be finite and non-negative")));
    }
    if energy == 0.0 {
        return Ok(CapacityResult::new(0.0)
            .with_parameter("e_prime", 0.0)
            .with_parameter("q0", 1.0));
    }
    let e_max = energy.min(top);
    let objective = |e_prime: f64| inner_value(d, e_prime, energy).unwrap_or(f64::NEG_INFINITY);
    let (e_star, _) = if energy >= top {
        (top, objective(top))
    } else {
        multistart_golden_max(objective, 0.0, e_max, 3, 1e-10)
    };

    let psi = SharedState::thermal(d, e_star)?;
    let shifted = (0..d)
        .map(|k| shifted_energy(k, &psi.schmidt_weights))
        .collect::<Result<Vec<_>>>()?;
    let q = max_entropy_under_budget(&shifted, energy)?;
    let value = entropy_bits(&q) + psi.entanglement_entropy();
    let plan = EncodingPlan::new(q.clone(), &psi)?;
    let mut res = CapacityResult::new(value)
        .with_ensemble(plan.ensemble(&psi)?, ChannelSpec::Identity)
        .with_local_dims((d, d))
        .with_parameter("e_prime", e_star)
        .with_parameter("avg_energy", plan.average_energy());
    for (k, qk) in q.iter().enumerate() {
        res = res.with_parameter(&format!("q{k}"), *qk);
    }
    Ok(res)
}

fn inner_value(d: usize, e_prime: f64, budget: f64) -> Result<f64> {
    let p = gibbs_or_ground(d, e_prime)?;
    let shifted = (0..d)
        .map(|k| shifted_energy(k, &p))
        .collect::<Result<Vec<_>>>()?;
    let q = max_entropy_under_budget(&shifted, budget)?;
    Ok(entropy_bits(&q) + entropy_bits(&p))
}

/// Qubit closed form `2H((1 − √(1 − 2E))/2)` below `E = ½`, with
/// `E'* = (1 − √(1 − 2E))/2` and `q₀* = 1 − E'*`.
pub fn ec_dc_capacity_d2(energy: f64) -> Result<CapacityResult> {
    if energy.is_nan() || energy < 0.0 || energy.is_infinite() {
        return Err(domain(format!("energy {energy} must be finite and non-negative")));
    }
    let e_prime = if energy >= 0.5 {
        0.5
    } else {
        (1.0 - (1.0 - 2.0 * energy).sqrt()) / 2.0
    };
    let value = if energy >= 0.5 { 2.0 } else { 2.0 * h2(e_prime) };
    let q0 = 1.0 - e_prime;
    let psi = SharedState::thermal(2, e_prime)?;
    let plan = EncodingPlan::new(vec![q0, 1.0 - q0], &psi)?;
    Ok(CapacityResult::new(value)
        .with_ensemble(plan.ensemble(&psi)?, ChannelSpec::Identity)
        .with_local_dims((2, 2))
        .with_parameter("e_prime", e_prime)
        .with_parameter("q0", q0)
        .with_parameter("concurrence", psi.concurrence()?))
}

/// Bipartite average state of the ensemble built from `plan`.
pub fn protocol_average_state(plan: &EncodingPlan, psi: &SharedState) -> Result<DensityOperator> {
    if plan.d != psi.d {
        return Err(Error::DimensionMismatch {
            expected: plan.d,
            got: psi.d,
        });
    }
    Ok(plan.ensemble(psi)?.average_state())
}

/// Eigenvalues of that average state, largest first.
pub fn protocol_average_state_spectrum(plan: &EncodingPlan, psi: &SharedState) -> Result<Vec<f64>> {
    let mut ev: Vec<f64> = protocol_average_state(plan, psi)?
        .eigenvalues()
        .into_iter()
        .map(|x| x.max(0.0))
        .collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    Ok(ev)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoGoReport {
    pub trials: usize,
    pub max_chi: f64,
    pub bound: f64,
    pub holds: bool,
}

/// Random ensembles built only from energy-preserving channels on the
/// sender half of random two-qubit pure states whose sender energy is at
/// most `E`; reports whether their Holevo quantity stays below `H(E)`.
pub fn passive_no_go_check(trials: usize, energy: f64, seed: u64) -> Result<NoGoReport> {
    if !(energy > 0.0 && energy <= 0.5) {
        return Err(domain(format!("no-go check needs 0 < E ≤ 1/2, got {energy}")));
    }
    let bound = noiseless_capacity(2, energy, Constraint::Strict)?.value;
    let mut rng = SplitMix64::new(seed);
    let mut max_chi: f64 = 0.0;
    for _ in 0..trials {
        let mut r = rng.fork();
        let psi = random_bounded_state(energy, &mut r)?;
        let messages = 2 + r.below(3);
        let raw: Vec<f64> = (0..messages).map(|_| r.next_f64() + 1e-3).collect();
        let total: f64 = raw.iter().sum();
        let mut items = Vec::with_capacity(messages);
        for w in raw {
            let ch = random_passive_channel(&mut r)?;
            items.push((w / total, apply_channel_local(&ch, &psi, (2, 2))?));
        }
        max_chi = max_chi.max(holevo_chi(&Ensemble::new(items)?)?);
    }
    Ok(NoGoReport {
        trials,
        max_chi,
        bound,
        holds: max_chi <= bound + 1e-9,
    })
}

/// `(U_η ⊗ V)(√(1 − a)|00⟩ + √a|11⟩)` with Haar-like `U_η`, `V`, resampled
/// until the sender energy is at most `E`.
fn random_bounded_state(energy: f64, rng: &mut SplitMix64) -> Result<DensityOperator> {
    loop {
        let a = rng.uniform(0.0, 0.5);
        let u = random_unitary(rng);
        let v = random_unitary(rng);
        let psi = SharedState::from_weights(vec![1.0 - a, a])?;
        let w = u.kron(&v).apply(&psi.state_vector());
        let rho = DensityOperator::pure(&w)?;
        let sender = partial_trace(&rho, (2, 2), Subsystem::A)?;
        if sender.populations()[1] <= energy {
            return Ok(rho);
        }
    }
}

fn random_unitary(rng: &mut SplitMix64) -> CMatrix {
    let a = random_state_vector(2, rng);
    // Second column orthogonal to the first, with a random phase.
    let phase = C64::from_polar(1.0, rng.uniform(0.0, std::f64::consts::TAU));
    let b = [-a[1].conj() * phase, a[0].conj() * phase];
    CMatrix::from_rows(2, vec![a[0], b[0], a[1], b[1]]).expect("2x2")
}

fn random_passive_channel(rng: &mut SplitMix64) -> Result<ChannelSpec> {
    let terms = 1 + rng.below(3);
    let raw: Vec<f64> = (0..terms).map(|_| rng.next_f64() + 1e-3).collect();
    let total: f64 = raw.iter().sum();
    ChannelSpec::energy_preserving_mixture(
        raw.into_iter()
            .map(|w| PhaseTerm {
                weight: w / total,
                theta: rng.uniform(0.0, std::f64::consts::TAU),
            })
            .collect(),
    )
}

/// Capacity with the shared state pinned at `E'`: `H(p^{E'})` plus the
/// best `H(q)` under the budget.
pub fn ec_dc_value_at(d: usize, energy: f64, e_prime: f64) -> Result<f64> {
    inner_value(d, e_prime, energy)
}
