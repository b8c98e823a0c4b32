//! Baseline adaptive filters: LMS, LMF, GMCC, RLS.

use super::{check_dims, dot, AdaptiveFilter};
use crate::error::{Error, Result};

/// Least mean squares: `w ← w + η·e·u`.
#[derive(Debug, Clone)]
pub struct Lms {
    w: Vec<f64>,
    eta: f64,
}

impl Lms {
    pub fn new(m: usize, eta: f64) -> Result<Self> {
        check_filter_len(m)?;
        check_eta(eta)?;
        Ok(Lms { w: vec![0.0; m], eta })
    }
}

impl AdaptiveFilter for Lms {
    fn step(&mut self, input: &[f64], desired: f64) -> Result<f64> {
        check_dims(self.w.len(), input.len())?;
        let e = desired - dot(&self.w, input);
        for (w, &u) in self.w.iter_mut().zip(input) {
            *w += self.eta * e * u;
        }
        Ok(e)
    }

    fn weights(&self) -> &[f64] {
        &self.w
    }

    fn name(&self) -> &'static str {
        "lms"
    }
}

/// Least mean fourth: `w ← w + η·e³·u`.
#[derive(Debug, Clone)]
pub struct Lmf {
    w: Vec<f64>,
    eta: f64,
}

impl Lmf {
    pub fn new(m: usize, eta: f64) -> Result<Self> {
        check_filter_len(m)?;
        check_eta(eta)?;
        Ok(Lmf { w: vec![0.0; m], eta })
    }
}

impl AdaptiveFilter for Lmf {
    fn step(&mut self, input: &[f64], desired: f64) -> Result<f64> {
        check_dims(self.w.len(), input.len())?;
        let e = desired - dot(&self.w, input);
        let e3 = e * e * e;
        for (w, &u) in self.w.iter_mut().zip(input) {
            *w += self.eta * e3 * u;
        }
        Ok(e)
    }

    fn weights(&self) -> &[f64] {
        &self.w
    }

    fn name(&self) -> &'static str {
        "lmf"
    }
}

/// Generalized maximum correntropy:
/// `w ← w + η·λ·exp(−λ|e|^α)·|e|^{α−1}·sign(e)·u`.
#[derive(Debug, Clone)]
pub struct Gmcc {
    w: Vec<f64>,
    eta: f64,
    shape: f64,
    lambda: f64,
}

impl Gmcc {
    pub const DEFAULT_SHAPE: f64 = 4.0;
    pub const DEFAULT_LAMBDA: f64 = 1.0;

    pub fn new(m: usize, eta: f64, shape: f64, lambda: f64) -> Result<Self> {
        check_filter_len(m)?;
        check_eta(eta)?;
        if !(shape > 0.0) {
            return Err(Error::invalid("shape", format!("must be > 0, got {shape}")));
        }
        if !(lambda > 0.0) {
            return Err(Error::invalid("lambda", format!("must be > 0, got {lambda}")));
        }
        Ok(Gmcc { w: vec![0.0; m], eta, shape, lambda })
    }
}

impl AdaptiveFilter for Gmcc {
    fn step(&mut self, input: &[f64], desired: f64) -> Result<f64> {
        check_dims(self.w.len(), input.len())?;
        let e = desired - dot(&self.w, input);
        if e != 0.0 {
            let a = e.abs();
            let gain = self.eta
                * self.lambda
                * (-self.lambda * a.powf(self.shape)).exp()
                * a.powf(self.shape - 1.0)
                * e.signum();
            for (w, &u) in self.w.iter_mut().zip(input) {
                *w += gain * u;
            }
        }
        Ok(e)
    }

    fn weights(&self) -> &[f64] {
        &self.w
    }

    fn name(&self) -> &'static str {
        "gmcc"
    }
}

/// Exponentially-weighted recursive least squares.
///
/// The inverse-correlation matrix starts at `δ·I` and is updated with the
/// symmetric rank-1 form `P ← (P − (P·u)(P·u)ᵀ/denom)/ρ`, which keeps `P`
/// exactly symmetric in floating point.
#[derive(Debug, Clone)]
pub struct Rls {
    w: Vec<f64>,
    /// row-major M×M inverse correlation matrix
    p: Vec<f64>,
    forgetting: f64,
    pu: Vec<f64>,
}

impl Rls {
    pub const DEFAULT_FORGETTING: f64 = 0.999;
    pub const DEFAULT_DELTA: f64 = 1e4;

    pub fn new(m: usize, forgetting: f64, delta: f64) -> Result<Self> {
        check_filter_len(m)?;
        if !(forgetting > 0.0 && forgetting <= 1.0) {
            return Err(Error::invalid(
                "forgetting",
                format!("must be in (0, 1], got {forgetting}"),
            ));
        }
        if !(delta > 0.0) {
            return Err(Error::invalid("delta", format!("must be > 0, got {delta}")));
        }
        let mut p = vec![0.0; m * m];
        for i in 0..m {
            p[i * m + i] = delta;
        }
        Ok(Rls {
            w: vec![0.0; m],
            p,
            forgetting,
            pu: vec![0.0; m],
        })
    }

    #[cfg(debug_assertions)]
    fn assert_symmetric(&self) {
        let m = self.w.len();
        for i in 0..m {
            for j in (i + 1)..m {
                let skew = (self.p[i * m + j] - self.p[j * m + i]).abs();
                debug_assert!(skew <= 1e-9, "RLS P matrix asymmetry {skew} at ({i},{j})");
            }
        }
    }
}

impl AdaptiveFilter for Rls {
    fn step(&mut self, input: &[f64], desired: f64) -> Result<f64> {
        let m = self.w.len();
        check_dims(m, input.len())?;
        let e = desired - dot(&self.w, input);

        for i in 0..m {
            self.pu[i] = dot(&self.p[i * m..(i + 1) * m], input);
        }
        let denom = self.forgetting + dot(input, &self.pu);
        let inv_denom = 1.0 / denom;
        let inv_rho = 1.0 / self.forgetting;

        for i in 0..m {
            let gain = self.pu[i] * inv_denom;
            self.w[i] += gain * e;
        }
        for i in 0..m {
            for j in 0..m {
                let outer = self.pu[i] * self.pu[j];
                self.p[i * m + j] = (self.p[i * m + j] - outer * inv_denom) * inv_rho;
            }
        }
        #[cfg(debug_assertions)]
        self.assert_symmetric();
        Ok(e)
    }

    fn weights(&self) -> &[f64] {
        &self.w
    }

    fn name(&self) -> &'static str {
        "rls"
    }
}

fn check_filter_len(m: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::invalid("filter_len", "must be ≥ 1"));
    }
    Ok(())
}

fn check_eta(eta: f64) -> Result<()> {
    if !(eta > 0.0) {
        return Err(Error::invalid("eta", format!("must be > 0, got {eta}")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    #[test]
    fn lms_single_step_from_zero() {
        // w starts at 0, u = [1, 0, 0], d = 1, η = 0.5 → w = [0.5, 0, 0]
        let mut f = Lms::new(3, 0.5).unwrap();
        let e = f.step(&[1.0, 0.0, 0.0], 1.0).unwrap();
        assert_eq!(e, 1.0);
        assert_eq!(f.weights(), &[0.5, 0.0, 0.0]);
    }

    #[test]
    fn lmf_zero_error_is_a_fixed_point() {
        let mut f = Lmf::new(2, 0.1).unwrap();
        // push weights somewhere first
        f.step(&[1.0, 1.0], 1.0).unwrap();
        let w_before = f.weights().to_vec();
        // desired chosen so e = 0
        let d = dot(&w_before, &[2.0, -1.0]);
        f.step(&[2.0, -1.0], d).unwrap();
        assert_eq!(f.weights(), &w_before[..]);
    }

    #[test]
    fn gmcc_zero_error_is_a_fixed_point() {
        let mut f = Gmcc::new(2, 0.1, 4.0, 1.0).unwrap();
        let e = f.step(&[1.0, 2.0], 0.0).unwrap();
        assert_eq!(e, 0.0);
        assert_eq!(f.weights(), &[0.0, 0.0]);
    }

    #[test]
    fn zero_input_never_moves_weights() {
        let zero = [0.0, 0.0, 0.0];
        let mut filters: Vec<Box<dyn AdaptiveFilter>> = vec![
            Box::new(Lms::new(3, 0.5).unwrap()),
            Box::new(Lmf::new(3, 0.5).unwrap()),
            Box::new(Gmcc::new(3, 0.5, 4.0, 1.0).unwrap()),
            Box::new(Rls::new(3, 0.99, 100.0).unwrap()),
        ];
        for f in &mut filters {
            f.step(&zero, 1.0).unwrap();
            assert_eq!(f.weights(), &[0.0, 0.0, 0.0], "{}", f.name());
        }
    }

    #[test]
    fn rls_recovers_noiseless_system() {
        let m = 10;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let w_s: Vec<f64> = (0..m).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let mut f = Rls::new(m, 1.0, 1e8).unwrap();
        let mut u = vec![0.0; m];
        for _ in 0..(2 * m) {
            for slot in u.iter_mut() {
                *slot = rng.sample::<f64, _>(StandardNormal);
            }
            let d = dot(&w_s, &u);
            f.step(&u, d).unwrap();
        }
        for (got, want) in f.weights().iter().zip(&w_s) {
            assert!((got - want).abs() < 1e-6, "{got} vs {want}");
        }
    }

    #[test]
    fn rls_rejects_bad_parameters() {
        assert!(Rls::new(4, 0.0, 100.0).is_err());
        assert!(Rls::new(4, 1.1, 100.0).is_err());
        assert!(Rls::new(4, 0.99, 0.0).is_err());
        assert!(Rls::new(4, 0.99, -1.0).is_err());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let mut f = Lms::new(3, 0.1).unwrap();
        assert!(matches!(
            f.step(&[1.0, 2.0], 0.5),
            Err(Error::DimensionMismatch { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn rls_p_stays_symmetric_under_load() {
        let mut f = Rls::new(6, 0.98, 1e3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut u = vec![0.0; 6];
        for _ in 0..5000 {
            for slot in u.iter_mut() {
                *slot = rng.sample::<f64, _>(StandardNormal);
            }
            let d: f64 = rng.sample(StandardNormal);
            f.step(&u, d).unwrap();
        }
        // the debug assertion inside step() already checks every update;
        // spot-check the final matrix here for release builds too
        for i in 0..6 {
            for j in 0..6 {
                assert!((f.p[i * 6 + j] - f.p[j * 6 + i]).abs() <= 1e-9);
            }
        }
    }
}
