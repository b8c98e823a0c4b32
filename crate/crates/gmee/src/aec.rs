//! Acoustic echo cancellation on synthetic or recorded far-end audio.
//!
//! The microphone picks up `d(n) = p(n) + (path ⊛ x)(n) + v(n)`: near-end
//! speech, the far-end signal convolved with the echo path, and ambient
//! noise. An adaptive filter models the path from the last `M` far-end
//! samples and the processed output is `e(n) = d(n) − ŷ(n)`. Because the
//! simulation knows the true path, the residual echo `y(n) − ŷ(n)` is
//! available exactly and ERLE can be computed per power window.

use crate::error::{Error, Result};
use crate::filters::AlgorithmSpec;
use crate::noise::NoiseModel;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// FIR model of the loudspeaker-to-microphone reflection path.
#[derive(Debug, Clone, PartialEq)]
pub struct EchoPath {
    taps: Vec<f64>,
}

impl EchoPath {
    pub fn new(taps: Vec<f64>) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::invalid("taps", "echo path needs at least one tap"));
        }
        if taps.iter().any(|t| !t.is_finite()) {
            return Err(Error::invalid("taps", "echo path taps must be finite"));
        }
        Ok(EchoPath { taps })
    }

    pub fn taps(&self) -> &[f64] {
        &self.taps
    }

    pub fn len(&self) -> usize {
        self.taps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    /// Convolve a signal with the path (causal, zero initial state).
    pub fn apply(&self, signal: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; signal.len()];
        for (n, slot) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (k, &t) in self.taps.iter().enumerate() {
                if let Some(&x) = n.checked_sub(k).and_then(|i| signal.get(i)) {
                    acc += t * x;
                }
            }
            *slot = acc;
        }
        out
    }
}

/// Random exponentially-decaying unit-energy echo path.
pub fn synth_echo_path(length: usize, decay_rate: f64, seed: u64) -> Result<EchoPath> {
    if length == 0 {
        return Err(Error::invalid("length", "must be ≥ 1"));
    }
    if !(decay_rate > 0.0 && decay_rate <= 1.0) {
        return Err(Error::invalid(
            "decay_rate",
            format!("must be in (0, 1], got {decay_rate}"),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut taps: Vec<f64> = (0..length)
        .map(|k| {
            let g: f64 = rng.sample(StandardNormal);
            g * (-decay_rate * k as f64).exp()
        })
        .collect();
    let energy: f64 = taps.iter().map(|t| t * t).sum();
    let scale = energy.sqrt();
    for t in taps.iter_mut() {
        *t /= scale;
    }
    EchoPath::new(taps)
}

/// Seeded AR(1) far-end signal with unit stationary variance, a rough
/// speech-energy stand-in when no recording is supplied.
pub fn synth_far_end(len: usize, seed: u64) -> Vec<f64> {
    const COEFF: f64 = 0.9;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let innovation = (1.0 - COEFF * COEFF).sqrt();
    let mut out = Vec::with_capacity(len);
    let mut state = 0.0;
    for _ in 0..len {
        let w: f64 = rng.sample(StandardNormal);
        state = COEFF * state + innovation * w;
        out.push(state);
    }
    out
}

/// One echo-cancellation session.
#[derive(Debug, Clone)]
pub struct AecSession {
    pub far_end: Vec<f64>,
    /// near-end (desired) speech; empty means silence
    pub near_end: Vec<f64>,
    pub noise: NoiseModel,
    pub path: EchoPath,
    pub algorithm: AlgorithmSpec,
    /// adaptive filter length; usually matches the path length
    pub filter_len: usize,
    pub noise_seed: u64,
    /// ERLE power-window size and hop
    pub erle_window: usize,
    pub erle_hop: usize,
    /// cap applied when a window's residual power underflows to zero
    pub erle_cap_db: f64,
}

impl AecSession {
    /// Session over the default Gaussian-mixture ambient noise with
    /// conventional ERLE windowing (1024-sample windows, hop 512, 80 dB cap).
    pub fn new(
        far_end: Vec<f64>,
        path: EchoPath,
        algorithm: AlgorithmSpec,
        noise_seed: u64,
    ) -> Result<Self> {
        let filter_len = path.len();
        let session = AecSession {
            far_end,
            near_end: Vec::new(),
            noise: NoiseModel::mixed_gaussian(0.05, 0.001, 0.01)?,
            path,
            algorithm,
            filter_len,
            noise_seed,
            erle_window: 1024,
            erle_hop: 512,
            erle_cap_db: 80.0,
        };
        session.validate()?;
        Ok(session)
    }

    pub fn validate(&self) -> Result<()> {
        if self.far_end.is_empty() {
            return Err(Error::EmptyInput("far-end signal is empty"));
        }
        if !self.near_end.is_empty() && self.near_end.len() != self.far_end.len() {
            return Err(Error::SignalLength(format!(
                "near-end holds {} samples, far-end {}",
                self.near_end.len(),
                self.far_end.len()
            )));
        }
        if self.filter_len == 0 {
            return Err(Error::invalid("filter_len", "must be ≥ 1"));
        }
        if self.erle_window == 0 || self.erle_hop == 0 {
            return Err(Error::invalid("erle_window", "window and hop must be ≥ 1"));
        }
        self.noise.validate()
    }
}

/// Everything a session produces.
#[derive(Debug, Clone)]
pub struct AecOutput {
    /// processed (echo-cancelled) signal `e(n)`
    pub processed: Vec<f64>,
    /// weight deviation from the true path per iteration, dB
    pub msd_db: Vec<f64>,
    /// ERLE per power window, dB
    pub erle_db: Vec<f64>,
    /// mean MSD over the final tenth of the session, dB
    pub steady_msd_db: f64,
    /// ERLE of the final window, dB
    pub final_erle_db: f64,
    pub diverged: bool,
}

/// Run one echo-cancellation session.
pub fn run_aec(session: &AecSession) -> Result<AecOutput> {
    session.validate()?;
    let n = session.far_end.len();
    let m = session.filter_len;
    let mut filter = session.algorithm.build(m)?;
    let mut noise_rng = ChaCha8Rng::seed_from_u64(session.noise_seed);

    let echo = session.path.apply(&session.far_end);
    // path padded/truncated to the filter length for the MSD reference
    let mut path_ref = session.path.taps().to_vec();
    path_ref.resize(m, 0.0);

    let mut processed = Vec::with_capacity(n);
    let mut residual = Vec::with_capacity(n);
    let mut msd_db = Vec::with_capacity(n);
    let mut regressor = vec![0.0; m];
    let mut diverged = false;

    // the loop walks four parallel signals by time index
    #[allow(clippy::needless_range_loop)]
    for i in 0..n {
        // regressor = [x(n), x(n−1), …, x(n−M+1)], zero-padded at start
        for (k, slot) in regressor.iter_mut().enumerate() {
            *slot = i.checked_sub(k).map_or(0.0, |j| session.far_end[j]);
        }
        let near = session.near_end.get(i).copied().unwrap_or(0.0);
        let v = session.noise.sample(&mut noise_rng);
        let d = near + echo[i] + v;

        let dev: f64 = filter
            .weights()
            .iter()
            .zip(&path_ref)
            .map(|(w, t)| (t - w) * (t - w))
            .sum();
        msd_db.push(10.0 * dev.max(1e-300).log10());

        let e = if diverged { d } else { filter.step(&regressor, d)? };
        if !diverged && filter.weights().iter().any(|w| !w.is_finite()) {
            diverged = true;
        }
        processed.push(e);
        // ŷ = d − e, so the residual echo is y − ŷ = y − d + e
        residual.push(echo[i] - (d - e));
    }

    let erle_db = erle(
        &session.far_end,
        &residual,
        session.erle_window,
        session.erle_hop,
        session.erle_cap_db,
    )?;
    let tail = n - (n / 10).max(1);
    let steady_msd_db =
        msd_db[tail..].iter().sum::<f64>() / (msd_db.len() - tail) as f64;
    let final_erle_db = erle_db.last().copied().unwrap_or(0.0);

    Ok(AecOutput {
        processed,
        msd_db,
        erle_db,
        steady_msd_db,
        final_erle_db,
        diverged,
    })
}

/// Echo return loss enhancement over sliding power windows:
/// `10·log10(far-end power / residual power)` per window.
///
/// Windows with zero far-end power are skipped; zero residual power in an
/// active window is guarded to `cap_db`.
pub fn erle(
    far_end: &[f64],
    residual: &[f64],
    window: usize,
    hop: usize,
    cap_db: f64,
) -> Result<Vec<f64>> {
    if far_end.len() != residual.len() {
        return Err(Error::SignalLength(format!(
            "far-end holds {} samples, residual {}",
            far_end.len(),
            residual.len()
        )));
    }
    if window == 0 || hop == 0 {
        return Err(Error::invalid("window", "window and hop must be ≥ 1"));
    }
    let mut out = Vec::new();
    let mut start = 0;
    while start + window <= far_end.len() {
        let fp: f64 = far_end[start..start + window].iter().map(|x| x * x).sum();
        let rp: f64 = residual[start..start + window].iter().map(|x| x * x).sum();
        if fp > 0.0 {
            let erle_db = if rp > 0.0 {
                (10.0 * (fp / rp).log10()).min(cap_db)
            } else {
                cap_db
            };
            out.push(erle_db);
        }
        start += hop;
    }
    Ok(out)
}
