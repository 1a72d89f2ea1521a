//! Gibbs states of `H = Σ n |n⟩⟨n|`: partition function, mean energy,
//! inverse-temperature root finding and thermal weights.

use serde::Serialize;

use crate::error::{domain, Result};

/// Upper end of the energy range on which a `d`-level Gibbs state exists
/// at non-negative temperature: `(d − 1)/2`. Above it the energy bound is
/// inactive and every capacity saturates.
pub fn emergent_scale(d: usize) -> Result<f64> {
    if d < 2 {
        return Err(domain(format!("dimension {d} < 2")));
    }
    Ok(scale(d))
}

pub(crate) fn scale(d: usize) -> f64 {
    (d as f64 - 1.0) / 2.0
}

/// `Z = Σ_{n<d} e^{−nβ} = (1 − e^{−dβ}) / (1 − e^{−β})`.
pub fn partition_function(d: usize, beta: f64) -> f64 {
    if beta == 0.0 {
        return d as f64;
    }
    if beta == f64::INFINITY {
        return 1.0;
    }
    (-(-(d as f64) * beta).exp_m1()) / (-(-beta).exp_m1())
}

/// `E(β) = −∂_β ln Z`, evaluated as the weighted level sum, which stays
/// accurate near `β = 0` where the closed form cancels.
pub fn mean_energy(d: usize, beta: f64) -> f64 {
    if beta == f64::INFINITY {
        return 0.0;
    }
    let w = unnormalized_weights(d, beta);
    let z: f64 = w.iter().sum();
    w.iter().enumerate().map(|(n, x)| n as f64 * x).sum::<f64>() / z
}

fn unnormalized_weights(d: usize, beta: f64) -> Vec<f64> {
    (0..d).map(|n| (-(n as f64) * beta).exp()).collect()
}

/// Inverse temperature `β* ≥ 0` with `E(β*) = energy`.
///
/// Bracket `[0, β_hi]` with `β_hi` doubled from 1 until the mean energy
/// drops below the target, then bisect.
pub fn solve_beta(d: usize, energy: f64) -> Result<f64> {
    let top = emergent_scale(d)?;
    if !(energy > 0.0 && energy <= top) {
        return Err(domain(format!(
            "energy {energy} outside (0, {top}] for d = {d}"
        )));
    }
    if energy == top {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    while mean_energy(d, hi) >= energy {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(domain(format!("energy {energy} too small to resolve")));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if mean_energy(d, mid) > energy {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Pick whichever end of the final bracket is closer in energy.
    let (elo, ehi) = (mean_energy(d, lo), mean_energy(d, hi));
    Ok(if (elo - energy).abs() <= (ehi - energy).abs() {
        lo
    } else {
        hi
    })
}

/// Gibbs weights `p_n = e^{−nβ}/Z` at mean energy `energy`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThermalWeights {
    pub dim: usize,
    pub energy: f64,
    pub beta: f64,
    pub weights: Vec<f64>,
}

impl ThermalWeights {
    pub fn entropy(&self) -> f64 {
        crate::quantum::entropy_bits(&self.weights)
    }
}

pub fn thermal_weights(d: usize, energy: f64) -> Result<ThermalWeights> {
    let beta = solve_beta(d, energy)?;
    Ok(ThermalWeights {
        dim: d,
        energy,
        beta,
        weights: weights_at_beta(d, beta),
    })
}

pub(crate) fn weights_at_beta(d: usize, beta: f64) -> Vec<f64> {
    let w = unnormalized_weights(d, beta);
    let z: f64 = w.iter().sum();
    w.into_iter().map(|x| x / z).collect()
}

/// Qutrit Gibbs weights in closed form, valid for `0 < E < 1`:
/// `p₀ = (7 − 3E − √(1 + 6E − 3E²))/6`, `p₁ = 2 − 2p₀ − E`, `p₂ = 1 − p₀ − p₁`.
pub fn d3_closed_form_weights(energy: f64) -> Result<[f64; 3]> {
    if !(energy > 0.0 && energy < 1.0) {
        return Err(domain(format!("qutrit closed form needs 0 < E < 1, got {energy}")));
    }
    let e = energy;
    let p0 = (7.0 - 3.0 * e - (1.0 + 6.0 * e - 3.0 * e * e).sqrt()) / 6.0;
    let p1 = 2.0 - 2.0 * p0 - e;
    let p2 = 1.0 - p0 - p1;
    Ok([p0, p1, p2])
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Qutrit weights from the positive root `x = e^{−β}` of
    /// `(2 − E)x² + (1 − E)x − E = 0`.
    fn qutrit_quadratic_weights(e: f64) -> [f64; 3] {
        let (a, b, c) = (2.0 - e, 1.0 - e, -e);
        let x = (-b + (b * b - 4.0 * a * c).sqrt()) / (2.0 * a);
        let z = 1.0 + x + x * x;
        [1.0 / z, x / z, x * x / z]
    }

    /// `1/(e^β − 1) − d/(e^{dβ} − 1)`, the textbook form of `−∂_β ln Z`.
    fn closed_form_energy(d: usize, beta: f64) -> f64 {
        1.0 / beta.exp_m1() - d as f64 / (d as f64 * beta).exp_m1()
    }

    #[test]
    fn emergent_scale_examples() {
        assert_eq!(emergent_scale(2).unwrap(), 0.5);
        assert_eq!(emergent_scale(3).unwrap(), 1.0);
        assert_eq!(emergent_scale(11).unwrap(), 5.0);
        assert!(emergent_scale(1).is_err());
    }

    #[test]
    fn partition_function_examples() {
        assert_eq!(partition_function(5, 0.0), 5.0);
        assert_eq!(partition_function(5, f64::INFINITY), 1.0);
        assert!((partition_function(5, 800.0) - 1.0).abs() < 1e-15);
        assert!((partition_function(2, 3f64.ln()) - 4.0 / 3.0).abs() < 1e-15);
        let direct: f64 = (0..7).map(|n| (-0.3 * n as f64).exp()).sum();
        assert!((partition_function(7, 0.3) - direct).abs() < 1e-14);
    }

    #[test]
    fn mean_energy_examples() {
        assert!((mean_energy(4, 0.0) - 1.5).abs() < 1e-15);
        assert!((mean_energy(2, 3f64.ln()) - 0.25).abs() < 1e-15);
        assert!(mean_energy(6, 60.0) < 1e-25);
        assert_eq!(mean_energy(6, f64::INFINITY), 0.0);
    }

    #[test]
    fn mean_energy_agrees_with_closed_form_away_from_zero() {
        for d in [2, 3, 5, 16] {
            for beta in [0.05, 0.3, 1.0, 2.5, 7.0] {
                let a = mean_energy(d, beta);
                let b = closed_form_energy(d, beta);
                assert!((a - b).abs() < 1e-12, "d={d} β={beta}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn mean_energy_is_strictly_decreasing() {
        for d in [2, 3, 8] {
            let mut prev = mean_energy(d, 0.0);
            for i in 1..200 {
                let e = mean_energy(d, i as f64 * 0.05);
                assert!(e < prev);
                prev = e;
            }
        }
    }

    #[test]
    fn solve_beta_examples() {
        let b = solve_beta(2, 0.25).unwrap();
        assert!((b - 3f64.ln()).abs() < 1e-12);
        assert_eq!(solve_beta(3, 1.0).unwrap(), 0.0);
        let b64 = solve_beta(64, 0.3).unwrap();
        assert!((b64 - (1.0 + 1.0 / 0.3f64).ln()).abs() < 1e-6);
        assert!(solve_beta(2, 0.0).is_err());
        assert!(solve_beta(2, 0.6).is_err());
        assert!(solve_beta(2, -0.1).is_err());
    }

    #[test]
    fn solve_beta_residual_is_tight() {
        for d in [2, 3, 4, 7, 12, 64] {
            let top = scale(d);
            for i in 1..=40 {
                let e = top * i as f64 / 40.0;
                let b = solve_beta(d, e).unwrap();
                let resid = (mean_energy(d, b) - e).abs();
                assert!(resid <= 1e-12 * e.max(1.0), "d={d} E={e} resid={resid:e}");
            }
        }
    }

    #[test]
    fn thermal_weights_examples() {
        let w = thermal_weights(2, 0.25).unwrap();
        assert!((w.weights[0] - 0.75).abs() < 1e-12 && (w.weights[1] - 0.25).abs() < 1e-12);
        let u = thermal_weights(3, 1.0).unwrap();
        for p in u.weights {
            assert!((p - 1.0 / 3.0).abs() < 1e-15);
        }
        let q = thermal_weights(3, 0.5).unwrap();
        for (p, e) in q.weights.iter().zip(qutrit_quadratic_weights(0.5)) {
            assert!((p - e).abs() < 1e-12);
        }
        // Six-decimal values quoted for this case, rounded loosely.
        for (p, e) in q.weights.iter().zip([0.616203, 0.267593, 0.116204]) {
            assert!((p - e).abs() < 2e-6);
        }
    }

    #[test]
    fn d3_closed_form_examples() {
        let w = d3_closed_form_weights(0.5).unwrap();
        for (p, e) in w.iter().zip(qutrit_quadratic_weights(0.5)) {
            assert!((p - e).abs() < 1e-12);
        }
        assert!((w[1] + 2.0 * w[2] - 0.5).abs() < 1e-12);
        let near = d3_closed_form_weights(1.0 - 1e-9).unwrap();
        for p in near {
            assert!((p - 1.0 / 3.0).abs() < 1e-6);
        }
        assert!(d3_closed_form_weights(1.0).is_err());
        assert!(d3_closed_form_weights(0.0).is_err());
    }

    #[test]
    fn d3_closed_form_matches_root_solve() {
        for i in 1..=9 {
            let e = i as f64 / 10.0;
            let a = d3_closed_form_weights(e).unwrap();
            let b = thermal_weights(3, e).unwrap();
            for (x, y) in a.iter().zip(&b.weights) {
                assert!((x - y).abs() < 1e-8, "E={e}");
            }
        }
    }

    #[test]
    fn weights_are_monotone_below_scale() {
        for d in [3, 5, 9] {
            let w = thermal_weights(d, 0.7).unwrap();
            assert!(w.weights.windows(2).all(|p| p[0] >= p[1]));
        }
    }
}
