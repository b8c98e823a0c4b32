//! Seeded noise generators and the white-Gaussian input process.
//!
//! All randomness flows through a named, portable generator (ChaCha8 keyed
//! from a 64-bit seed) so experiment streams are reproducible anywhere.
//! Monte-Carlo harnesses derive one generator per run as
//! `seed = base_seed + run_index` and keep separate stream ids for input,
//! noise, and system draws.

use crate::error::{Error, Result};
use rand::Rng;
use rand_distr::StandardNormal;
use std::f64::consts::PI;

/// Additive-noise distribution for system identification experiments.
///
/// Every variant is zero mean (the Gaussian variant only when `mean = 0`):
/// Rayleigh spikes are centered by subtracting the analytic mean
/// `scale·√(π/2)` before gating, and the uniform support is derived from the
/// requested variance (half-width `√(3σ²)`).
#[derive(Debug, Clone, PartialEq)]
pub enum NoiseModel {
    Gaussian {
        mean: f64,
        variance: f64,
    },
    Uniform {
        variance: f64,
    },
    /// With probability `1 − outlier_prob` draw N(0, variance_small),
    /// otherwise N(0, variance_large).
    MixedGaussian {
        outlier_prob: f64,
        variance_small: f64,
        variance_large: f64,
    },
    /// `b·(R − E[R])` with `b ~ Bernoulli(spike_prob)` and
    /// `R ~ Rayleigh(rayleigh_scale)`.
    BernoulliRayleigh {
        spike_prob: f64,
        rayleigh_scale: f64,
    },
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            NoiseModel::Gaussian { variance, .. } => {
                if !(variance > 0.0) {
                    return Err(Error::invalid("variance", format!("must be > 0, got {variance}")));
                }
            }
            NoiseModel::Uniform { variance } => {
                if !(variance > 0.0) {
                    return Err(Error::invalid("variance", format!("must be > 0, got {variance}")));
                }
            }
            NoiseModel::MixedGaussian {
                outlier_prob,
                variance_small,
                variance_large,
            } => {
                if !(0.0..=1.0).contains(&outlier_prob) {
                    return Err(Error::invalid(
                        "outlier_prob",
                        format!("must be in [0, 1], got {outlier_prob}"),
                    ));
                }
                if !(variance_small > 0.0) || !(variance_large > 0.0) {
                    return Err(Error::invalid(
                        "variance",
                        format!("variances must be > 0, got {variance_small} and {variance_large}"),
                    ));
                }
            }
            NoiseModel::BernoulliRayleigh {
                spike_prob,
                rayleigh_scale,
            } => {
                if !(0.0..=1.0).contains(&spike_prob) {
                    return Err(Error::invalid(
                        "spike_prob",
                        format!("must be in [0, 1], got {spike_prob}"),
                    ));
                }
                if !(rayleigh_scale > 0.0) {
                    return Err(Error::invalid(
                        "rayleigh_scale",
                        format!("must be > 0, got {rayleigh_scale}"),
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn gaussian(mean: f64, variance: f64) -> Result<Self> {
        let m = NoiseModel::Gaussian { mean, variance };
        m.validate()?;
        Ok(m)
    }

    pub fn uniform(variance: f64) -> Result<Self> {
        let m = NoiseModel::Uniform { variance };
        m.validate()?;
        Ok(m)
    }

    pub fn mixed_gaussian(outlier_prob: f64, variance_small: f64, variance_large: f64) -> Result<Self> {
        let m = NoiseModel::MixedGaussian {
            outlier_prob,
            variance_small,
            variance_large,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn bernoulli_rayleigh(spike_prob: f64, rayleigh_scale: f64) -> Result<Self> {
        let m = NoiseModel::BernoulliRayleigh {
            spike_prob,
            rayleigh_scale,
        };
        m.validate()?;
        Ok(m)
    }

    /// One noise draw. Parameters were validated at construction.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        match *self {
            NoiseModel::Gaussian { mean, variance } => {
                mean + variance.sqrt() * rng.sample::<f64, _>(StandardNormal)
            }
            NoiseModel::Uniform { variance } => {
                let half_width = (3.0 * variance).sqrt();
                rng.random_range(-half_width..half_width)
            }
            NoiseModel::MixedGaussian {
                outlier_prob,
                variance_small,
                variance_large,
            } => {
                let var = if rng.random_bool(outlier_prob) {
                    variance_large
                } else {
                    variance_small
                };
                var.sqrt() * rng.sample::<f64, _>(StandardNormal)
            }
            NoiseModel::BernoulliRayleigh {
                spike_prob,
                rayleigh_scale,
            } => {
                // Inverse-transform Rayleigh draw, centered to zero mean.
                let gate = rng.random_bool(spike_prob);
                let u: f64 = rng.random();
                let r = rayleigh_scale * (-2.0 * (1.0 - u).ln()).sqrt();
                if gate {
                    r - rayleigh_scale * (PI / 2.0).sqrt()
                } else {
                    0.0
                }
            }
        }
    }

    /// Analytic variance of the model.
    pub fn variance(&self) -> f64 {
        match *self {
            NoiseModel::Gaussian { variance, .. } => variance,
            NoiseModel::Uniform { variance } => variance,
            NoiseModel::MixedGaussian {
                outlier_prob,
                variance_small,
                variance_large,
            } => (1.0 - outlier_prob) * variance_small + outlier_prob * variance_large,
            NoiseModel::BernoulliRayleigh {
                spike_prob,
                rayleigh_scale,
            } => {
                // E[v²] = p·E[(R − E[R])²] = p·(2 − π/2)·scale²
                spike_prob * (2.0 - PI / 2.0) * rayleigh_scale * rayleigh_scale
            }
        }
    }

    pub fn std_dev(&self) -> f64 {
        self.variance().sqrt()
    }

    /// Short label used in sweep tables and CSV output.
    pub fn label(&self) -> &'static str {
        match self {
            NoiseModel::Gaussian { .. } => "gaussian",
            NoiseModel::Uniform { .. } => "uniform",
            NoiseModel::MixedGaussian { .. } => "mixed_gaussian",
            NoiseModel::BernoulliRayleigh { .. } => "bernoulli_rayleigh",
        }
    }
}

/// Fill `buf` with one i.i.d. standard-normal input vector.
pub fn next_input<R: Rng>(rng: &mut R, buf: &mut [f64]) {
    for slot in buf.iter_mut() {
        *slot = rng.sample::<f64, _>(StandardNormal);
    }
}

/// Owned stream of i.i.d. standard-normal input vectors of dimension `m`.
pub fn input_stream<R: Rng>(m: usize, rng: R) -> InputStream<R> {
    InputStream { m, rng }
}

pub struct InputStream<R> {
    m: usize,
    rng: R,
}

impl<R: Rng> Iterator for InputStream<R> {
    type Item = Vec<f64>;

    fn next(&mut self) -> Option<Vec<f64>> {
        let mut v = vec![0.0; self.m];
        next_input(&mut self.rng, &mut v);
        Some(v)
    }
}
