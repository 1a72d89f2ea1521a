//! Qubit capacities under an average energy bound `E` together with a
//! strict purity bound `Tr ρ² = L` on every input state.
//!
//! Purity `L` fixes the Bloch radius `r_L = √(2L − 1)`, so energies below
//! `r₋ = (1 − r_L)/2` are unreachable and the capacity vanishes there.

use serde::Serialize;

use crate::capacity::CapacityResult;
use crate::error::{domain, Error, Result};
use crate::quantum::{h2, ChannelSpec, DensityOperator, Ensemble};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualQuery {
    pub energy: f64,
    pub purity: f64,
    pub r_l: f64,
    pub r_minus: f64,
    pub r_plus: f64,
}

impl DualQuery {
    pub fn new(energy: f64, purity: f64) -> Result<Self> {
        if energy.is_nan() || energy < 0.0 || energy.is_infinite() {
            return Err(domain(format!("energy {energy} must be finite and non-negative")));
        }
        if !(0.5..=1.0).contains(&purity) {
            return Err(domain(format!("purity {purity} outside [1/2, 1]")));
        }
        let r_l = (2.0 * purity - 1.0).sqrt();
        Ok(Self {
            energy,
            purity,
            r_l,
            r_minus: (1.0 - r_l) / 2.0,
            r_plus: (1.0 + r_l) / 2.0,
        })
    }

    fn branch(&self) -> Branch {
        if self.energy >= 0.5 {
            Branch::Saturated
        } else if self.energy >= self.r_minus {
            Branch::Middle
        } else {
            Branch::Infeasible
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Branch {
    Infeasible,
    Middle,
    Saturated,
}

/// Qubit state with Bloch vector `(x, 0, z)`.
fn bloch_state(x: f64, z: f64) -> Result<DensityOperator> {
    DensityOperator::from_bloch(x, 0.0, z)
}

/// Noiseless channel: `1 − H(r₋)` for `E ≥ ½`, `H(E) − H(r₋)` for
/// `r₋ ≤ E < ½`, else 0. The ensemble is two equiprobable sphere states
/// mirrored in `x` at mean energy `min(E, ½)`.
pub fn dual_noiseless_capacity(energy: f64, purity: f64) -> Result<CapacityResult> {
    let q = DualQuery::new(energy, purity)?;
    let e = energy.min(0.5);
    let value = match q.branch() {
        Branch::Infeasible => return Ok(CapacityResult::new(0.0)),
        _ => (h2(e) - h2(q.r_minus)).max(0.0),
    };
    let z = 1.0 - 2.0 * e;
    let x = (q.r_l * q.r_l - z * z).max(0.0).sqrt();
    let ens = Ensemble::uniform(vec![bloch_state(x, z)?, bloch_state(-x, z)?])?;
    Ok(CapacityResult::new(value).with_ensemble(ens, ChannelSpec::Identity))
}

/// Weight of the low-energy state `ρ₋` in the optimal dephasing ensemble:
/// `½` for `E ≥ ½`, `½(1 + (1 − 2E)/r_L)` on the middle branch.
pub fn dual_optimal_probability(energy: f64, purity: f64) -> Result<f64> {
    let q = DualQuery::new(energy, purity)?;
    match q.branch() {
        Branch::Saturated => Ok(0.5),
        _ if q.r_l == 0.0 => Err(Error::DegenerateRadius),
        Branch::Middle => Ok((0.5 * (1.0 + (1.0 - 2.0 * energy) / q.r_l)).min(1.0)),
        Branch::Infeasible => Err(domain(format!(
            "energy {energy} below the reachable minimum {}",
            q.r_minus
        ))),
    }
}

/// Complete dephasing, equiprobable messages:
/// `H(E) − ½(H(r₋) + H(2E − r₋))` on the middle branch. Inputs are the
/// sphere state at energy `r₋` and the one at `2E − r₋`.
pub fn dual_dephasing_equiprob_capacity(energy: f64, purity: f64) -> Result<CapacityResult> {
    let q = DualQuery::new(energy, purity)?;
    let channel = ChannelSpec::Dephasing { lambda: 0.5 };
    let (value, high) = match q.branch() {
        Branch::Infeasible => return Ok(CapacityResult::new(0.0)),
        Branch::Middle => {
            let high = 2.0 * energy - q.r_minus;
            let v = h2(energy) - 0.5 * (h2(q.r_minus) + h2(high));
            (v.max(0.0), high)
        }
        Branch::Saturated => (1.0 - h2(q.r_minus), q.r_plus),
    };
    let z_high = 1.0 - 2.0 * high;
    let x_high = (q.r_l * q.r_l - z_high * z_high).max(0.0).sqrt();
    let ens = Ensemble::uniform(vec![bloch_state(0.0, q.r_l)?, bloch_state(x_high, z_high)?])?;
    Ok(CapacityResult::new(value)
        .with_ensemble(ens, channel)
        .with_parameter("high_energy", high))
}

/// Complete dephasing, optimized probabilities: equal to the noiseless
/// value, achieved by `{1 − p: ρ₊, p: ρ₋}` with the diagonal states
/// `ρ± = r∓|0⟩⟨0| + r±|1⟩⟨1|`.
pub fn dual_dephasing_optimal_capacity(energy: f64, purity: f64) -> Result<CapacityResult> {
    let q = DualQuery::new(energy, purity)?;
    let channel = ChannelSpec::Dephasing { lambda: 0.5 };
    if q.branch() == Branch::Infeasible {
        return Ok(CapacityResult::new(0.0));
    }
    let value = dual_noiseless_capacity(energy, purity)?.value;
    let p = match dual_optimal_probability(energy, purity) {
        Ok(p) => p,
        Err(Error::DegenerateRadius) => 0.5,
        Err(e) => return Err(e),
    };
    let plus = DensityOperator::diagonal(&[q.r_minus, q.r_plus])?;
    let minus = DensityOperator::diagonal(&[q.r_plus, q.r_minus])?;
    let ens = Ensemble::new(vec![(1.0 - p, plus), (p, minus)])?;
    Ok(CapacityResult::new(value)
        .with_ensemble(ens, channel)
        .with_parameter("p", p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{energy, purity, Hamiltonian};

    fn h(x: f64) -> f64 {
        if x <= 0.0 || x >= 1.0 {
            0.0
        } else {
            -x * x.log2() - (1.0 - x) * (1.0 - x).log2()
        }
    }

    fn r_minus(l: f64) -> f64 {
        (1.0 - (2.0 * l - 1.0).sqrt()) / 2.0
    }

    #[test]
    fn query_fields_are_consistent() {
        let q = DualQuery::new(0.3, 0.9).unwrap();
        assert!((q.r_l - 0.8f64.sqrt()).abs() < 1e-12);
        assert!((q.r_minus + q.r_plus - 1.0).abs() < 1e-12);
        assert!(DualQuery::new(0.3, 0.4).is_err());
        assert!(DualQuery::new(-0.1, 0.9).is_err());
    }

    #[test]
    fn noiseless_examples() {
        let rm = r_minus(0.9);
        assert!((rm - 0.052786).abs() < 1e-6);
        let top = dual_noiseless_capacity(0.6, 0.9).unwrap().value;
        assert!((top - (1.0 - h(rm))).abs() < 1e-12);
        let mid = dual_noiseless_capacity(0.3, 0.9).unwrap().value;
        assert!((mid - (h(0.3) - h(rm))).abs() < 1e-12);
        assert_eq!(dual_noiseless_capacity(0.04, 0.9).unwrap().value, 0.0);
    }

    #[test]
    fn probability_examples() {
        assert_eq!(dual_optimal_probability(0.5, 0.9).unwrap(), 0.5);
        assert!((dual_optimal_probability(0.3, 0.9).unwrap() - 0.723607).abs() < 1e-6);
        let rm = r_minus(0.9);
        assert!((dual_optimal_probability(rm, 0.9).unwrap() - 1.0).abs() < 1e-12);
        assert!(dual_optimal_probability(0.01, 0.9).is_err());
        assert_eq!(
            dual_optimal_probability(0.3, 0.5),
            Err(Error::DegenerateRadius)
        );
    }

    #[test]
    fn dephasing_examples() {
        let rm = r_minus(0.9);
        let eq = dual_dephasing_equiprob_capacity(0.3, 0.9).unwrap().value;
        assert!((eq - (h(0.3) - 0.5 * (h(rm) + h(0.6 - rm)))).abs() < 1e-12);
        assert!((h(0.6 - rm) - 0.993559).abs() < 1e-6);
        let top = dual_dephasing_equiprob_capacity(0.6, 0.9).unwrap().value;
        assert!((top - dual_noiseless_capacity(0.6, 0.9).unwrap().value).abs() < 1e-12);
        assert_eq!(dual_dephasing_equiprob_capacity(0.02, 0.9).unwrap().value, 0.0);

        let opt = dual_dephasing_optimal_capacity(0.3, 0.9).unwrap();
        assert!((opt.value - (h(0.3) - h(rm))).abs() < 1e-12);
        assert!((opt.parameter("p").unwrap() - 0.723607).abs() < 1e-6);
        assert_eq!(
            dual_dephasing_optimal_capacity(0.6, 0.9).unwrap().parameter("p"),
            Some(0.5)
        );
        let pure = dual_dephasing_optimal_capacity(0.3, 1.0).unwrap().value;
        assert!((pure - h(0.3)).abs() < 1e-12);
    }

    #[test]
    fn ensembles_are_consistent() {
        let ham = Hamiltonian::new(2).unwrap();
        for l in [0.6, 0.75, 0.9, 1.0] {
            for e in [0.1, 0.2, 0.3, 0.45, 0.5, 0.8] {
                for r in [
                    dual_noiseless_capacity(e, l).unwrap(),
                    dual_dephasing_equiprob_capacity(e, l).unwrap(),
                    dual_dephasing_optimal_capacity(e, l).unwrap(),
                ] {
                    let Some(ens) = r.optimal_ensemble.as_ref() else {
                        assert_eq!(r.value, 0.0);
                        continue;
                    };
                    let chi = r.ensemble_chi().unwrap().unwrap();
                    assert!((chi - r.value).abs() < 1e-9, "L={l} E={e}");
                    let avg = energy(&ens.average_state(), &ham).unwrap();
                    assert!((avg - e.min(0.5)).abs() < 1e-9);
                    for (_, s) in ens.items() {
                        assert!((purity(s) - l).abs() < 1e-9);
                    }
                }
            }
        }
    }

    #[test]
    fn degenerate_radius() {
        assert_eq!(dual_noiseless_capacity(0.3, 0.5).unwrap().value, 0.0);
        assert!(dual_noiseless_capacity(0.7, 0.5).unwrap().value.abs() < 1e-12);
    }

    #[test]
    fn seams_are_continuous() {
        for l in [0.6, 0.9] {
            let rm = r_minus(l);
            for f in [dual_noiseless_capacity, dual_dephasing_equiprob_capacity] {
                let below = f(rm - 1e-13, l).unwrap().value;
                let at = f(rm, l).unwrap().value;
                assert!(below.abs() < 1e-9 && at.abs() < 1e-9);
                let lo = f(0.5 - 1e-12, l).unwrap().value;
                let hi = f(0.5, l).unwrap().value;
                assert!((lo - hi).abs() < 1e-9);
            }
        }
    }
}
