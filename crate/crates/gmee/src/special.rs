//! Gamma function via the Lanczos approximation.
//!
//! The generalized Gaussian kernel normalization needs `Γ(1/α)` to be
//! reproducible across platforms, so we carry our own implementation
//! instead of relying on a platform `tgamma`. Accuracy target: relative
//! error below 1e-10 on `[0.05, 20]`.

use std::f64::consts::PI;

/// Lanczos coefficients for g = 7, n = 9 (the set popularized by the
/// GNU Scientific Library; see Pugh's thesis for the derivation).
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for positive (or non-pole negative) real arguments.
///
/// Uses the reflection formula below 0.5 and the Lanczos series above.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        // Γ(x)Γ(1-x) = π / sin(πx)
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut acc = LANCZOS_COEF[0];
        for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
            acc += c / (x + i as f64);
        }
        let t = x + LANCZOS_G + 0.5;
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * acc
    }
}
