//! Kernel functions for density estimation and entropy criteria.
//!
//! Two kernels live here: the classic Gaussian window and the generalized
//! Gaussian kernel `G_{α,β}(x) = α/(2βΓ(1/α)) · exp(−|x/β|^α)`, whose shape
//! exponent α interpolates between Laplace (α = 1), Gaussian (α = 2) and
//! increasingly box-like densities as α grows.

use crate::error::{Error, Result};
use crate::special::gamma;
use std::f64::consts::PI;

/// Gaussian kernel `(1/(√(2π)σ)) · exp(−x²/(2σ²))`.
pub fn gaussian_kernel(x: f64, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) {
        return Err(Error::invalid("sigma", format!("must be > 0, got {sigma}")));
    }
    Ok(gaussian_unchecked(x, sigma))
}

/// Same as [`gaussian_kernel`] with the bandwidth already validated.
pub(crate) fn gaussian_unchecked(x: f64, sigma: f64) -> f64 {
    (-x * x / (2.0 * sigma * sigma)).exp() / ((2.0 * PI).sqrt() * sigma)
}

/// Generalized Gaussian kernel with precomputed normalization.
///
/// Invariants enforced at construction: `alpha ≥ 1`, `beta > 0`. The
/// normalization `α/(2βΓ(1/α))` and the scale power `β^α` are computed once
/// so every evaluation (and every consumer of the gradient scale) sees the
/// same floating-point values.
#[derive(Debug, Clone, PartialEq)]
pub struct GgdKernel {
    alpha: f64,
    beta: f64,
    norm_const: f64,
    beta_pow_alpha: f64,
}

impl GgdKernel {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha >= 1.0) {
            return Err(Error::invalid(
                "alpha",
                format!("shape exponent must be ≥ 1, got {alpha}"),
            ));
        }
        if !(beta > 0.0) {
            return Err(Error::invalid(
                "beta",
                format!("kernel scale must be > 0, got {beta}"),
            ));
        }
        let norm_const = alpha / (2.0 * beta * gamma(1.0 / alpha));
        Ok(GgdKernel {
            alpha,
            beta,
            norm_const,
            beta_pow_alpha: beta.powf(alpha),
        })
    }

    /// Rescaled copy with a new kernel width (normalization recomputed).
    pub fn with_beta(&self, beta: f64) -> Result<Self> {
        GgdKernel::new(self.alpha, beta)
    }

    /// Reshaped copy with a new exponent (normalization recomputed).
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        GgdKernel::new(alpha, self.beta)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn norm_const(&self) -> f64 {
        self.norm_const
    }

    /// `β^α`, the denominator of the stochastic-gradient scale `α/(L²β^α)`.
    pub fn beta_pow_alpha(&self) -> f64 {
        self.beta_pow_alpha
    }

    /// Kernel density at `x`: `norm_const · exp(−|x/β|^α)`.
    pub fn eval(&self, x: f64) -> f64 {
        self.norm_const * (-(x.abs() / self.beta).powf(self.alpha)).exp()
    }

    /// Pairwise gradient weight `G_{α,β}(Δ) · |Δ|^{α−1} · sign(Δ)`.
    ///
    /// Coincident samples contribute nothing: sign(0) = 0 exactly, also at
    /// α = 1 where `|0|⁰` would otherwise evaluate to 1.
    pub fn grad_weight(&self, delta: f64) -> f64 {
        if delta == 0.0 {
            return 0.0;
        }
        self.eval(delta) * delta.abs().powf(self.alpha - 1.0) * delta.signum()
    }

    /// Derivative of [`grad_weight`](Self::grad_weight) with respect to Δ:
    /// `G_{α,β}(Δ) · [(α−1)|Δ|^{α−2} − (α/β^α)|Δ|^{2α−2}]`.
    ///
    /// This is the restoring-force curvature used by the stability
    /// predictor. At Δ = 0 it is `G(0)` for α = 2, zero for α > 2, and
    /// undefined for α < 2 (we return 0 there; continuous noise hits the
    /// point with probability zero).
    pub fn grad_weight_deriv(&self, delta: f64) -> f64 {
        if delta == 0.0 {
            return if self.alpha == 2.0 {
                self.norm_const
            } else {
                0.0
            };
        }
        let a = delta.abs();
        let g = self.eval(delta);
        g * ((self.alpha - 1.0) * a.powf(self.alpha - 2.0)
            - self.alpha / self.beta_pow_alpha * a.powf(2.0 * self.alpha - 2.0))
    }
}
