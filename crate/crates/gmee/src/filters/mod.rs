//! Adaptive filters under a uniform step contract.
//!
//! Every algorithm consumes one `(input, desired)` pair per step, returns
//! the a priori error `e = d − wᵀu` computed with the pre-update weights,
//! and then applies its own weight update. Window-based algorithms
//! (MEE/GMEE/QGMEE) push the sample into their window before updating.

mod baseline;
mod gmee;

pub use baseline::{Gmcc, Lmf, Lms, Rls};
pub use gmee::{gmee_gradient, Gmee, GmeeConfig, Mee, Qgmee, WindowGradient};

use crate::error::{Error, Result};
use crate::kernel::GgdKernel;

/// Uniform step-wise filter contract.
pub trait AdaptiveFilter: Send {
    /// Process one sample: return `d − wᵀu` under the pre-update weights,
    /// then update the weights.
    fn step(&mut self, input: &[f64], desired: f64) -> Result<f64>;

    fn weights(&self) -> &[f64];

    fn name(&self) -> &'static str;

    /// Cumulative arithmetic performed by the update loops, for filters
    /// that instrument it.
    fn op_counters(&self) -> Option<OpCounters> {
        None
    }
}

/// Running tally of arithmetic performed by a filter's update loops.
///
/// Divisions count as multiplications; `exp` and `powf` both count as
/// exponentiations. Used to compare the measured per-iteration cost of the
/// quantized and unquantized entropy updates.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct OpCounters {
    pub mults: u64,
    pub adds: u64,
    pub exps: u64,
}

impl OpCounters {
    pub fn delta(self, earlier: OpCounters) -> OpCounters {
        OpCounters {
            mults: self.mults - earlier.mults,
            adds: self.adds - earlier.adds,
            exps: self.exps - earlier.exps,
        }
    }
}

pub(crate) fn check_dims(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Declarative description of one algorithm instance; the unit of
/// configuration for experiments, sweeps, and the CLI.
#[derive(Debug, Clone, PartialEq)]
pub enum AlgorithmSpec {
    Lms { eta: f64 },
    Lmf { eta: f64 },
    Gmcc { eta: f64, shape: f64, lambda: f64 },
    Rls { forgetting: f64, delta: f64 },
    Mee { eta: f64, beta: f64, window: usize },
    Gmee { eta: f64, alpha: f64, beta: f64, window: usize },
    Qgmee { eta: f64, alpha: f64, beta: f64, window: usize, gamma: f64 },
}

impl AlgorithmSpec {
    pub const ALL_NAMES: [&'static str; 7] = ["lms", "lmf", "gmcc", "rls", "mee", "gmee", "qgmee"];

    pub fn name(&self) -> &'static str {
        match self {
            AlgorithmSpec::Lms { .. } => "lms",
            AlgorithmSpec::Lmf { .. } => "lmf",
            AlgorithmSpec::Gmcc { .. } => "gmcc",
            AlgorithmSpec::Rls { .. } => "rls",
            AlgorithmSpec::Mee { .. } => "mee",
            AlgorithmSpec::Gmee { .. } => "gmee",
            AlgorithmSpec::Qgmee { .. } => "qgmee",
        }
    }

    /// Instantiate a filter of length `m` from this description.
    pub fn build(&self, m: usize) -> Result<Box<dyn AdaptiveFilter>> {
        Ok(match *self {
            AlgorithmSpec::Lms { eta } => Box::new(Lms::new(m, eta)?),
            AlgorithmSpec::Lmf { eta } => Box::new(Lmf::new(m, eta)?),
            AlgorithmSpec::Gmcc { eta, shape, lambda } => Box::new(Gmcc::new(m, eta, shape, lambda)?),
            AlgorithmSpec::Rls { forgetting, delta } => Box::new(Rls::new(m, forgetting, delta)?),
            AlgorithmSpec::Mee { eta, beta, window } => Box::new(Mee::new(m, eta, beta, window)?),
            AlgorithmSpec::Gmee { eta, alpha, beta, window } => Box::new(Gmee::new(
                m,
                GmeeConfig::new(GgdKernel::new(alpha, beta)?, eta, window)?,
            )?),
            AlgorithmSpec::Qgmee { eta, alpha, beta, window, gamma } => Box::new(Qgmee::new(
                m,
                GmeeConfig::new(GgdKernel::new(alpha, beta)?, eta, window)?.with_gamma(gamma)?,
            )?),
        })
    }

    /// Step size, when the algorithm has one (RLS does not).
    pub fn eta(&self) -> Option<f64> {
        match *self {
            AlgorithmSpec::Lms { eta }
            | AlgorithmSpec::Lmf { eta }
            | AlgorithmSpec::Gmcc { eta, .. }
            | AlgorithmSpec::Mee { eta, .. }
            | AlgorithmSpec::Gmee { eta, .. }
            | AlgorithmSpec::Qgmee { eta, .. } => Some(eta),
            AlgorithmSpec::Rls { .. } => None,
        }
    }

    /// Copy with a replaced step size; RLS is returned unchanged.
    pub fn with_eta(&self, new_eta: f64) -> Self {
        let mut spec = self.clone();
        match &mut spec {
            AlgorithmSpec::Lms { eta }
            | AlgorithmSpec::Lmf { eta }
            | AlgorithmSpec::Gmcc { eta, .. }
            | AlgorithmSpec::Mee { eta, .. }
            | AlgorithmSpec::Gmee { eta, .. }
            | AlgorithmSpec::Qgmee { eta, .. } => *eta = new_eta,
            AlgorithmSpec::Rls { .. } => {}
        }
        spec
    }
}
