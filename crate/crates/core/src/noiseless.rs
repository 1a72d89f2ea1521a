//! Energy-constrained capacity of the noiseless `d`-level channel.
//!
//! Below the emergent scale `(d − 1)/2` the capacity is the entropy of the
//! Gibbs state at the given energy, achieved by `d` equiprobable phase
//! states `Σ_n ω^{kn} √p_n |n⟩`. Each of these carries energy exactly `E`,
//! so average and strict constraints give the same number.

use crate::capacity::{CapacityResult, Constraint, Dimension};
use crate::error::{domain, Result};
use crate::quantum::{qft_phase_state, ChannelSpec, DensityOperator, Ensemble};
use crate::thermal::{emergent_scale, partition_function, solve_beta, thermal_weights};

/// The constraint kind does not change the result.
pub fn noiseless_capacity(d: usize, energy: f64, _constraint: Constraint) -> Result<CapacityResult> {
    let top = emergent_scale(d)?;
    check_energy(energy)?;
    if energy == 0.0 {
        let ground = Ensemble::new(vec![(1.0, DensityOperator::basis(d, 0)?)])?;
        return Ok(CapacityResult::new(0.0).with_ensemble(ground, ChannelSpec::Identity));
    }
    let ens = optimal_encoding(d, energy)?;
    let value = if energy >= top {
        (d as f64).log2()
    } else {
        thermal_weights(d, energy)?.entropy()
    };
    Ok(CapacityResult::new(value)
        .with_ensemble(ens, ChannelSpec::Identity)
        .with_parameter("energy_used", energy.min(top)))
}

/// `(1 + E) log₂(1 + E) − E log₂ E`, the `d → ∞` limit.
pub fn infinite_dimensional_capacity(energy: f64) -> Result<f64> {
    check_energy(energy)?;
    if energy == 0.0 {
        return Ok(0.0);
    }
    Ok((1.0 + energy) * (1.0 + energy).log2() - energy * energy.log2())
}

fn check_energy(energy: f64) -> Result<()> {
    if energy.is_nan() || energy < 0.0 || energy.is_infinite() {
        return Err(domain(format!("energy {energy} must be finite and non-negative")));
    }
    Ok(())
}

/// The `d` equiprobable phase states over the Gibbs weights at
/// `min(E, (d − 1)/2)`.
pub fn optimal_encoding(d: usize, energy: f64) -> Result<Ensemble> {
    let top = emergent_scale(d)?;
    if energy.is_nan() || energy <= 0.0 {
        return Err(domain(format!("encoding needs positive energy, got {energy}")));
    }
    let weights = thermal_weights(d, energy.min(top))?.weights;
    let states = (0..d)
        .map(|k| qft_phase_state(k, &weights))
        .collect::<Result<Vec<_>>>()?;
    Ensemble::uniform(states)
}

/// Capacity at fixed `E` for each requested dimension, in input order.
/// Finite dimensions use `(β*E + ln Z) log₂ e` below the emergent scale.
pub fn capacity_curve(energy: f64, dims: &[Dimension]) -> Result<Vec<(Dimension, f64)>> {
    if energy.is_nan() || energy <= 0.0 {
        return Err(domain(format!("capacity curve needs E > 0, got {energy}")));
    }
    dims.iter()
        .map(|&dim| {
            let v = match dim {
                Dimension::Infinite => infinite_dimensional_capacity(energy)?,
                Dimension::Finite(d) => {
                    if energy >= emergent_scale(d)? {
                        (d as f64).log2()
                    } else {
                        let beta = solve_beta(d, energy)?;
                        (beta * energy + partition_function(d, beta).ln()) * std::f64::consts::LOG2_E
                    }
                }
            };
            Ok((dim, v))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CMatrix;
    use crate::quantum::{energy, holevo_chi, Hamiltonian};

    fn h(x: f64) -> f64 {
        -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
    }

    /// Shannon entropy of the Gibbs weights, `log₂ d` at or above the scale.
    fn gibbs_entropy(d: usize, energy: f64) -> Result<f64> {
        if energy <= 0.0 {
            return Ok(0.0);
        }
        if energy >= crate::thermal::scale(d) {
            return Ok((d as f64).log2());
        }
        Ok(crate::quantum::entropy_bits(&thermal_weights(d, energy)?.weights))
    }

    #[test]
    fn capacity_examples() {
        let c = |d, e| noiseless_capacity(d, e, Constraint::Average).unwrap().value;
        assert_eq!(c(2, 0.7), 1.0);
        assert!((c(2, 0.25) - h(0.25)).abs() < 1e-12);
        assert!((c(2, 0.25) - 0.811278).abs() < 1e-6);
        assert_eq!(c(4, 1.5), 2.0);
        assert_eq!(c(3, 0.0), 0.0);
        assert!(noiseless_capacity(2, -0.1, Constraint::Strict).is_err());
    }

    #[test]
    fn strict_and_average_agree() {
        for d in [2, 3, 5] {
            for e in [0.1, 0.4, 0.9, 3.0] {
                let a = noiseless_capacity(d, e, Constraint::Average).unwrap().value;
                let s = noiseless_capacity(d, e, Constraint::Strict).unwrap().value;
                assert_eq!(a, s);
            }
        }
    }

    #[test]
    fn encoding_examples() {
        let ens = optimal_encoding(2, 0.25).unwrap();
        let plus = DensityOperator::pure_real(&[0.75f64.sqrt(), 0.5]).unwrap();
        let minus = DensityOperator::pure_real(&[0.75f64.sqrt(), -0.5]).unwrap();
        assert!(ens.items()[0].1.matrix().max_abs_diff(plus.matrix()) < 1e-12);
        assert!(ens.items()[1].1.matrix().max_abs_diff(minus.matrix()) < 1e-12);
        assert_eq!(ens.probabilities(), vec![0.5, 0.5]);

        let half = optimal_encoding(2, 0.5).unwrap();
        assert!((holevo_chi(&half).unwrap() - 1.0).abs() < 1e-12);

        let q = optimal_encoding(3, 0.5).unwrap();
        let w = crate::thermal::d3_closed_form_weights(0.5).unwrap();
        let expect: f64 = w.iter().map(|p| -p * p.log2()).sum();
        assert!((holevo_chi(&q).unwrap() - expect).abs() < 1e-9);
    }

    #[test]
    fn every_encoding_state_has_energy_e_and_average_is_thermal() {
        for (d, e) in [(2, 0.3), (3, 0.5), (4, 1.1), (6, 0.2)] {
            let ens = optimal_encoding(d, e).unwrap();
            let ham = Hamiltonian::new(d).unwrap();
            for (_, s) in ens.items() {
                assert!((energy(s, &ham).unwrap() - e).abs() < 1e-10);
            }
            let tau = CMatrix::from_diagonal(&thermal_weights(d, e).unwrap().weights);
            assert!(ens.average_state().matrix().max_abs_diff(&tau) < 1e-10);
            let chi = holevo_chi(&ens).unwrap();
            let cap = noiseless_capacity(d, e, Constraint::Strict).unwrap().value;
            assert!((chi - cap).abs() < 1e-9);
        }
    }

    #[test]
    fn curve_examples() {
        let dims = [
            Dimension::Finite(2),
            Dimension::Finite(64),
            Dimension::Infinite,
        ];
        let c = capacity_curve(0.3, &dims).unwrap();
        assert!((c[0].1 - h(0.3)).abs() < 1e-12);
        assert!((c[0].1 - 0.881291).abs() < 1e-6);
        assert!((c[2].1 - 1.013155).abs() < 1e-6);
        assert!((c[1].1 - c[2].1).abs() < 1e-3);
    }

    #[test]
    fn curve_formula_matches_gibbs_entropy() {
        for d in [2, 3, 7, 20] {
            for e in [0.05, 0.3, 0.8, 2.0] {
                let c = capacity_curve(e, &[Dimension::Finite(d)]).unwrap()[0].1;
                let g = gibbs_entropy(d, e).unwrap();
                assert!((c - g).abs() < 1e-10, "d={d} E={e}");
            }
        }
    }
}
