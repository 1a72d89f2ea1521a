//! Result and query types shared by every capacity computation.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::quantum::{apply_channel_local, holevo_chi, ChannelSpec, Ensemble};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Constraint {
    /// The ensemble-averaged state obeys the energy bound.
    Average,
    /// Every encoded state obeys the energy bound.
    Strict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Probabilities {
    Equiprobable,
    Optimized,
}

/// Hilbert-space dimension, with the infinite-dimensional oscillator as a
/// first-class value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Dimension {
    Finite(usize),
    Infinite,
}

impl std::fmt::Display for Dimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Finite(d) => write!(f, "{d}"),
            Self::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizerInfo {
    pub evaluations: usize,
    pub converged: bool,
    pub argmax: Vec<f64>,
}

/// A capacity in bits with the data that achieves it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityResult {
    pub value: f64,
    /// Input ensemble before the channel acts.
    #[serde(skip)]
    pub optimal_ensemble: Option<Ensemble>,
    #[serde(skip)]
    pub channel: ChannelSpec,
    /// `(d_A, d_B)` when the channel acts on the first factor of a
    /// bipartite ensemble.
    pub local_dims: Option<(usize, usize)>,
    /// Named optimal parameters such as `delta`, `p0` or `e_prime`.
    pub parameters: BTreeMap<String, f64>,
    pub optimizer_info: Option<OptimizerInfo>,
    /// The achieving ensemble is known to be unique.
    pub unique: bool,
}

impl CapacityResult {
    pub fn new(value: f64) -> Self {
        Self {
            value,
            optimal_ensemble: None,
            channel: ChannelSpec::Identity,
            local_dims: None,
            parameters: BTreeMap::new(),
            optimizer_info: None,
            unique: false,
        }
    }

    pub fn with_ensemble(mut self, ens: Ensemble, channel: ChannelSpec) -> Self {
        self.optimal_ensemble = Some(ens);
        self.channel = channel;
        self
    }

    pub fn with_local_dims(mut self, dims: (usize, usize)) -> Self {
        self.local_dims = Some(dims);
        self
    }

    pub fn with_parameter(mut self, name: &str, value: f64) -> Self {
        self.parameters.insert(name.to_owned(), value);
        self
    }

    pub fn parameter(&self, name: &str) -> Option<f64> {
        self.parameters.get(name).copied()
    }

    /// Holevo quantity of the stored ensemble after the channel, if an
    /// ensemble is stored.
    pub fn ensemble_chi(&self) -> Option<Result<f64>> {
        let ens = self.optimal_ensemble.as_ref()?;
        Some(self.output_ensemble(ens).and_then(|out| holevo_chi(&out)))
    }

    fn output_ensemble(&self, ens: &Ensemble) -> Result<Ensemble> {
        ens.try_map(|s| {
            let dims = self.local_dims.unwrap_or((s.dim(), 1));
            apply_channel_local(&self.channel, s, dims)
        })
    }
}
