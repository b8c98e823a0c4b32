//! Information-potential estimators and Renyi entropy.
//!
//! The information potential (IP) of an error sample is the double sum
//! `(1/L²) ΣᵢΣⱼ κ(eᵢ − eⱼ)` over all ordered pairs; maximizing it minimizes
//! the error entropy. Summation order is fixed i-major, j-minor with plain
//! accumulation so results are bit-reproducible across platforms.

use crate::error::{Error, Result};
use crate::kernel::{gaussian_unchecked, GgdKernel};

/// Parzen density estimate `(1/L) Σᵢ G_{α,β}(x − eᵢ)` at the point `x`.
pub fn parzen_pdf(errors: &[f64], kernel: &GgdKernel, x: f64) -> Result<f64> {
    if errors.is_empty() {
        return Err(Error::EmptyInput("parzen_pdf needs at least one error"));
    }
    let mut acc = 0.0;
    for &e in errors {
        acc += kernel.eval(x - e);
    }
    Ok(acc / errors.len() as f64)
}

/// Quadratic IP with a Gaussian kernel of bandwidth `sigma`.
pub fn quadratic_ip(errors: &[f64], sigma: f64) -> Result<f64> {
    if errors.is_empty() {
        return Err(Error::EmptyInput("quadratic_ip needs at least one error"));
    }
    if !(sigma > 0.0) {
        return Err(Error::invalid("sigma", format!("must be > 0, got {sigma}")));
    }
    let l = errors.len() as f64;
    let mut acc = 0.0;
    for &ei in errors {
        for &ej in errors {
            acc += gaussian_unchecked(ei - ej, sigma);
        }
    }
    Ok(acc / (l * l))
}

/// Generalized IP `(1/L²) ΣᵢΣⱼ G_{α,β}(eᵢ − eⱼ)`.
pub fn generalized_ip(errors: &[f64], kernel: &GgdKernel) -> Result<f64> {
    if errors.is_empty() {
        return Err(Error::EmptyInput("generalized_ip needs at least one error"));
    }
    let l = errors.len() as f64;
    let mut acc = 0.0;
    for &ei in errors {
        for &ej in errors {
            acc += kernel.eval(ei - ej);
        }
    }
    Ok(acc / (l * l))
}

/// Renyi entropy of order `mu`: `(1/(1−μ)) · ln(ip)`.
pub fn renyi_entropy(ip: f64, mu: f64) -> Result<f64> {
    if !(ip > 0.0) {
        return Err(Error::invalid("ip", format!("must be > 0, got {ip}")));
    }
    if !(mu > 0.0) || mu == 1.0 {
        return Err(Error::invalid(
            "mu",
            format!("order must be > 0 and ≠ 1, got {mu}"),
        ));
    }
    Ok(ip.ln() / (1.0 - mu))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kernel(alpha: f64, beta: f64) -> GgdKernel {
        GgdKernel::new(alpha, beta).unwrap()
    }

    #[test]
    fn parzen_single_sample_is_the_kernel() {
        let k = kernel(2.0, 1.0);
        let v = parzen_pdf(&[0.0], &k, 0.0).unwrap();
        assert_eq!(v, k.eval(0.0));
    }

    #[test]
    fn parzen_symmetric_pair_collapses() {
        let k = kernel(3.0, 0.7);
        let a = 0.9;
        let v = parzen_pdf(&[-a, a], &k, 0.0).unwrap();
        assert!((v - k.eval(a)).abs() < 1e-15);
    }

    #[test]
    fn parzen_three_term_hand_sum() {
        let k = kernel(2.0, 1.0);
        let errors = [0.1, 0.3, -0.2];
        let x = 0.0;
        let want = (k.eval(x - 0.1) + k.eval(x - 0.3) + k.eval(x + 0.2)) / 3.0;
        let got = parzen_pdf(&errors, &k, x).unwrap();
        assert_eq!(got, want);
    }

    #[test]
    fn parzen_rejects_empty() {
        let k = kernel(2.0, 1.0);
        assert!(parzen_pdf(&[], &k, 0.0).is_err());
    }

    #[test]
    fn parzen_integrates_to_one() {
        let k = kernel(2.0, 0.8);
        let errors = [0.4, -1.1, 2.3, 0.0];
        // Simpson over [-50β + min(e), 50β + max(e)]
        let lo = -50.0 * k.beta() - 1.1;
        let hi = 50.0 * k.beta() + 2.3;
        let n = 1 << 17;
        let h = (hi - lo) / n as f64;
        let f = |x: f64| parzen_pdf(&errors, &k, x).unwrap();
        let mut acc = f(lo) + f(hi);
        for i in 1..n {
            acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(lo + i as f64 * h);
        }
        let integral = acc * h / 3.0;
        assert!((integral - 1.0).abs() < 1e-6, "∫ = {integral}");
    }

    #[test]
    fn quadratic_ip_equal_errors_hit_the_peak() {
        let v = quadratic_ip(&[0.7, 0.7, 0.7], 1.3).unwrap();
        assert!((v - gaussian_unchecked(0.0, 1.3)).abs() < 1e-15);
    }

    #[test]
    fn quadratic_ip_two_sample_brute_force() {
        // (2·G(0) + 2·G(1))/4 for errors {0, 1}, σ = 1
        let v = quadratic_ip(&[0.0, 1.0], 1.0).unwrap();
        assert!((v - 0.320456502460288).abs() < 1e-15);
    }

    #[test]
    fn quadratic_ip_errors() {
        assert!(quadratic_ip(&[], 1.0).is_err());
        assert!(quadratic_ip(&[1.0], 0.0).is_err());
    }

    #[test]
    fn generalized_ip_equal_errors_hit_the_peak() {
        let k = kernel(4.0, 0.5);
        let v = generalized_ip(&[-0.2, -0.2], &k).unwrap();
        assert!((v - k.eval(0.0)).abs() < 1e-15);
    }

    #[test]
    fn generalized_ip_two_sample_form() {
        let k = kernel(3.0, 1.4);
        let (e1, e2) = (0.6, -0.9);
        let want = (2.0 * k.eval(0.0) + 2.0 * k.eval(e1 - e2)) / 4.0;
        let got = generalized_ip(&[e1, e2], &k).unwrap();
        assert!((got - want).abs() < 1e-15);
    }

    #[test]
    fn generalized_ip_alpha_two_equals_quadratic_ip() {
        // G_{2,β} is the Gaussian kernel at σ = β/√2, so the two IP
        // estimators coincide (normalization ratio is exactly 1).
        let beta = 2.1;
        let k = kernel(2.0, beta);
        let errors = [0.3, -0.8, 1.9, 0.05, -2.4];
        let a = generalized_ip(&errors, &k).unwrap();
        let b = quadratic_ip(&errors, beta / 2.0_f64.sqrt()).unwrap();
        assert!((a - b).abs() < 1e-14 * a);
    }

    #[test]
    fn renyi_point_values() {
        assert_eq!(renyi_entropy(1.0, 2.0).unwrap(), 0.0);
        let h = renyi_entropy(0.5, 2.0).unwrap();
        assert!((h - std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn renyi_monotone_decreasing_in_ip_for_mu_two() {
        let mut prev = f64::INFINITY;
        for i in 1..=20 {
            let ip = i as f64 * 0.1;
            let h = renyi_entropy(ip, 2.0).unwrap();
            assert!(h < prev);
            prev = h;
        }
    }

    #[test]
    fn renyi_rejects_bad_inputs() {
        assert!(renyi_entropy(0.0, 2.0).is_err());
        assert!(renyi_entropy(-1.0, 2.0).is_err());
        assert!(renyi_entropy(0.5, 1.0).is_err());
        assert!(renyi_entropy(0.5, 0.0).is_err());
    }
}
