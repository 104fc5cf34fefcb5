//! RBF-kernel support vector machines.
//!
//! Binary soft-margin problems are solved by sequential minimal
//! optimization ([`smo_train_binary`]); multiclass problems are decomposed
//! one-vs-one and combined by majority vote ([`train_multiclass`],
//! [`predict`]).

mod cache;
mod kernel;
mod multiclass;
mod persist;
mod smo;

pub use cache::KernelCache;
pub use kernel::rbf_kernel;
pub use multiclass::{predict, predict_votes, train_multiclass, PairModel, SvmModel, Votes};
pub use persist::{load_model, read_model, save_model, write_model, MODEL_MAGIC, MODEL_VERSION};
pub use smo::{decision_value, smo_train_binary, BinaryModel, SmoSolution, SmoSolver};

use crate::error::{Error, Result};

/// Training hyperparameters. Defaults are C = 512, γ = 0.125.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmParams {
    /// Soft-margin penalty, the upper bound on every dual coefficient.
    pub c: f64,
    /// RBF width in `exp(-γ‖x−y‖²)`.
    pub gamma: f64,
    /// KKT tolerance; also the stopping gap of the maximal violating pair.
    pub tol: f64,
    /// Consecutive no-progress updates tolerated before the solver gives up.
    pub max_passes: usize,
    /// Kernel row cache budget in bytes, shared by concurrently trained
    /// pair models.
    pub cache_bytes: usize,
}

impl Default for SvmParams {
    fn default() -> Self {
        Self {
            c: 512.0,
            gamma: 0.125,
            tol: 1e-3,
            max_passes: 10,
            cache_bytes: 256 << 20,
        }
    }
}

impl SvmParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("c", self.c), ("gamma", self.gamma), ("tol", self.tol)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::arg(format!("svm parameter {name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}
