//! Classical capacities of finite-dimensional quantum channels under energy
//! and purity constraints.

pub mod capacity;
pub mod dc_search;
pub mod dephasing;
pub mod dense_coding;
pub mod dual;
pub mod error;
pub mod linalg;
pub mod noiseless;
pub mod optimize;
pub mod quantum;
pub mod rng;
pub mod thermal;

pub use capacity::{CapacityResult, Constraint, Dimension, OptimizerInfo, Probabilities};
pub use error::{Error, Result};
