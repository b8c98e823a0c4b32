//! Online vector quantization of scalar error samples.
//!
//! The quantizer walks the error list in input order. Each sample is merged
//! into the nearest existing code word when that distance is within the
//! threshold γ; otherwise the sample founds a new code word. Counts record
//! how many samples each code word absorbed, so `Σ counts = L` always.

use crate::error::{Error, Result};
use crate::kernel::GgdKernel;

/// Codebook produced by threshold-γ online quantization.
#[derive(Debug, Clone, PartialEq)]
pub struct Codebook {
    centers: Vec<f64>,
    counts: Vec<usize>,
    gamma: f64,
}

impl Codebook {
    pub fn centers(&self) -> &[f64] {
        &self.centers
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Number of code words (`H`).
    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// Total number of quantized samples (`L = Σ counts`).
    pub fn total_count(&self) -> usize {
        self.counts.iter().sum()
    }
}

/// Quantize `errors` in input order with threshold `gamma`.
///
/// Ties between equidistant code words go to the earlier-created one.
pub fn quantize(errors: &[f64], gamma: f64) -> Result<Codebook> {
    if errors.is_empty() {
        return Err(Error::EmptyInput("quantize needs at least one error"));
    }
    if !(gamma >= 0.0) {
        return Err(Error::invalid("gamma", format!("must be ≥ 0, got {gamma}")));
    }
    let mut book = Codebook {
        centers: Vec::new(),
        counts: Vec::new(),
        gamma,
    };
    for &e in errors {
        quantize_into(&mut book, e);
    }
    Ok(book)
}

/// Merge one sample into an existing codebook (the online step).
pub(crate) fn quantize_into(book: &mut Codebook, e: f64) {
    let mut best: Option<(usize, f64)> = None;
    for (h, &c) in book.centers.iter().enumerate() {
        let d = (e - c).abs();
        // strict `<` keeps the earliest center on ties
        if best.is_none_or(|(_, bd)| d < bd) {
            best = Some((h, d));
        }
    }
    match best {
        Some((h, d)) if d <= book.gamma => book.counts[h] += 1,
        _ => {
            book.centers.push(e);
            book.counts.push(1);
        }
    }
}

/// Quantized IP `(1/L²) Σᵢ Σ_h H_h · G_{α,β}(eᵢ − c_h)`.
///
/// The codebook must come from the same error population: `Σ counts` has to
/// equal the error count.
pub fn quantized_ip(errors: &[f64], codebook: &Codebook, kernel: &GgdKernel) -> Result<f64> {
    if errors.is_empty() {
        return Err(Error::EmptyInput("quantized_ip needs at least one error"));
    }
    let total = codebook.total_count();
    if total != errors.len() {
        return Err(Error::CodebookMismatch {
            codebook_total: total,
            errors: errors.len(),
        });
    }
    let l = errors.len() as f64;
    let mut acc = 0.0;
    for &e in errors {
        for (&c, &h) in codebook.centers.iter().zip(&codebook.counts) {
            acc += h as f64 * kernel.eval(e - c);
        }
    }
    Ok(acc / (l * l))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::generalized_ip;

    #[test]
    fn zero_gamma_keeps_distinct_errors() {
        let errors = [0.3, -1.2, 0.7, 2.2];
        let book = quantize(&errors, 0.0).unwrap();
        assert_eq!(book.len(), errors.len());
        assert!(book.counts().iter().all(|&c| c == 1));
        assert_eq!(book.centers(), &errors);
    }

    #[test]
    fn hand_traced_merge() {
        let book = quantize(&[0.1, 0.15, 0.9], 0.1).unwrap();
        assert_eq!(book.centers(), &[0.1, 0.9]);
        assert_eq!(book.counts(), &[2, 1]);
    }

    #[test]
    fn huge_gamma_collapses_to_first_error() {
        let errors = [0.4, -0.9, 1.3, 0.0, 0.2];
        let book = quantize(&errors, 100.0).unwrap();
        assert_eq!(book.centers(), &[0.4]);
        assert_eq!(book.counts(), &[5]);
    }

    #[test]
    fn tie_goes_to_earlier_center() {
        // 0.5 is equidistant from 0.0 and 1.0; the earlier center wins.
        let book = quantize(&[0.0, 1.0, 0.5], 0.5).unwrap();
        assert_eq!(book.centers(), &[0.0, 1.0]);
        assert_eq!(book.counts(), &[2, 1]);
    }

    #[test]
    fn rejects_negative_gamma_and_empty_input() {
        assert!(quantize(&[1.0], -0.1).is_err());
        assert!(quantize(&[], 0.5).is_err());
    }

    #[test]
    fn centers_are_gamma_separated() {
        let errors: Vec<f64> = (0..50).map(|i| ((i * 37) % 17) as f64 * 0.13).collect();
        for &gamma in &[0.0, 0.05, 0.3, 1.0] {
            let book = quantize(&errors, gamma).unwrap();
            assert_eq!(book.total_count(), errors.len());
            for (i, &a) in book.centers().iter().enumerate() {
                for &b in &book.centers()[i + 1..] {
                    assert!((a - b).abs() > gamma, "γ={gamma}: centers {a} {b}");
                }
            }
        }
    }

    #[test]
    fn quantized_ip_zero_gamma_equals_generalized_ip() {
        let k = GgdKernel::new(3.0, 1.2).unwrap();
        let errors = [0.3, -0.8, 1.9, 0.05, -2.4, 0.31];
        let book = quantize(&errors, 0.0).unwrap();
        let a = quantized_ip(&errors, &book, &k).unwrap();
        let b = generalized_ip(&errors, &k).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn quantized_ip_single_center_all_equal() {
        let k = GgdKernel::new(2.0, 0.9).unwrap();
        let errors = [0.4, 0.4, 0.4];
        let book = quantize(&errors, 0.5).unwrap();
        assert_eq!(book.len(), 1);
        let v = quantized_ip(&errors, &book, &k).unwrap();
        assert!((v - k.eval(0.0)).abs() < 1e-15);
    }

    #[test]
    fn quantized_ip_brute_force_three_errors_two_centers() {
        let k = GgdKernel::new(2.5, 1.1).unwrap();
        let errors = [0.1, 0.15, 0.9];
        let book = quantize(&errors, 0.1).unwrap();
        assert_eq!(book.len(), 2);
        // six-term sum: every error against both centers, weighted by counts
        let mut want = 0.0;
        for &e in &errors {
            want += 2.0 * k.eval(e - 0.1) + 1.0 * k.eval(e - 0.9);
        }
        want /= 9.0;
        let got = quantized_ip(&errors, &book, &k).unwrap();
        assert!((got - want).abs() < 1e-15);
    }

    #[test]
    fn quantized_ip_detects_population_mismatch() {
        let k = GgdKernel::new(2.0, 1.0).unwrap();
        let book = quantize(&[0.1, 0.2], 0.0).unwrap();
        let res = quantized_ip(&[0.1, 0.2, 0.3], &book, &k);
        assert!(matches!(
            res,
            Err(crate::error::Error::CodebookMismatch { .. })
        ));
    }
}
