//! Monte-Carlo system-identification harness.
//!
//! One experiment drives a set of algorithms over shared seeded streams:
//! for run `r` the generator seed is `base_seed + r`, with separate ChaCha8
//! stream ids for inputs, noise, and the unknown system. Runs execute in
//! parallel but reduce in run-index order, so results are bit-identical
//! regardless of thread scheduling. A diverged run (any non-finite weight)
//! is excluded from the averages and counted.

use crate::error::{Error, Result};
use crate::filters::{AlgorithmSpec, OpCounters};
use crate::noise::{next_input, NoiseModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

/// ChaCha8 stream ids; one logical stream per random source.
const STREAM_INPUT: u64 = 0;
const STREAM_NOISE: u64 = 1;
const STREAM_SYSTEM: u64 = 2;

/// Fraction of the trace treated as steady state.
pub const STEADY_TAIL_FRACTION: f64 = 0.1;

/// The unknown system to identify.
#[derive(Debug, Clone, PartialEq)]
pub enum TrueWeights {
    Fixed(Vec<f64>),
    /// Unit-norm random vector drawn from the experiment's system stream
    /// (identical across runs).
    SeededUnitNorm,
}

/// A complete Monte-Carlo system-identification experiment.
#[derive(Debug, Clone)]
pub struct SysIdExperiment {
    /// filter length M
    pub filter_len: usize,
    pub true_weights: TrueWeights,
    pub noise: NoiseModel,
    pub algorithms: Vec<AlgorithmSpec>,
    /// samples per run
    pub iterations: usize,
    /// Monte-Carlo repetitions
    pub runs: usize,
    pub base_seed: u64,
}

impl SysIdExperiment {
    pub fn validate(&self) -> Result<()> {
        if self.filter_len == 0 {
            return Err(Error::invalid("filter_len", "must be ≥ 1"));
        }
        if self.iterations == 0 {
            return Err(Error::invalid("iterations", "must be ≥ 1"));
        }
        if self.runs == 0 {
            return Err(Error::invalid("runs", "must be ≥ 1"));
        }
        if self.algorithms.is_empty() {
            return Err(Error::invalid("algorithms", "need at least one algorithm"));
        }
        if let TrueWeights::Fixed(w) = &self.true_weights {
            if w.len() != self.filter_len {
                return Err(Error::DimensionMismatch {
                    expected: self.filter_len,
                    got: w.len(),
                });
            }
        }
        self.noise.validate()
    }

    /// Resolve the system weights this experiment identifies.
    pub fn system_weights(&self) -> Vec<f64> {
        match &self.true_weights {
            TrueWeights::Fixed(w) => w.clone(),
            TrueWeights::SeededUnitNorm => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.base_seed);
                rng.set_stream(STREAM_SYSTEM);
                let mut w: Vec<f64> =
                    (0..self.filter_len).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
                let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
                for x in w.iter_mut() {
                    *x /= norm;
                }
                w
            }
        }
    }
}

/// Per-algorithm result of a Monte-Carlo experiment.
#[derive(Debug, Clone)]
pub struct MetricTrace {
    pub algorithm: String,
    /// MSD in dB per iteration, averaged over converged runs. Entry `n`
    /// describes the weights entering iteration `n` (entry 0 is the
    /// initial state).
    pub msd_db: Vec<f64>,
    /// linear-scale mean MSD over the steady tail
    pub steady_msd: f64,
    pub steady_msd_db: f64,
    /// steady-state a priori error power over the tail (linear and dB)
    pub emse: f64,
    pub emse_db: f64,
    pub runs_used: usize,
    pub divergence_count: usize,
    /// FNV-1a digest of the shared (input, desired) stream; identical for
    /// every algorithm of the experiment
    pub stream_fingerprint: u64,
    /// cumulative arithmetic performed by the filter across all runs, when
    /// the algorithm reports it
    pub op_counters: Option<OpCounters>,
}

struct RunOutcome {
    /// linear MSD per iteration per algorithm, or None if diverged
    msd: Vec<Option<Vec<f64>>>,
    /// tail sum of squared a priori errors and tail count per algorithm
    emse_tail: Vec<(f64, usize)>,
    fingerprint: u64,
    counters: Vec<Option<OpCounters>>,
}

fn fnv1a(hash: &mut u64, bytes: &[u8]) {
    for &b in bytes {
        *hash ^= b as u64;
        *hash = hash.wrapping_mul(0x100000001b3);
    }
}

/// Detect a run that left the stable regime; treated as divergence.
fn diverged(w: &[f64]) -> bool {
    w.iter().any(|x| !x.is_finite() || x.abs() > 1e9)
}

fn single_run(exp: &SysIdExperiment, w_s: &[f64], run: u64, tail_start: usize) -> Result<RunOutcome> {
    let seed = exp.base_seed + run;
    let mut input_rng = ChaCha8Rng::seed_from_u64(seed);
    input_rng.set_stream(STREAM_INPUT);
    let mut noise_rng = ChaCha8Rng::seed_from_u64(seed);
    noise_rng.set_stream(STREAM_NOISE);

    let m = exp.filter_len;
    let n_algos = exp.algorithms.len();
    let mut filters = Vec::with_capacity(n_algos);
    for spec in &exp.algorithms {
        filters.push(Some(spec.build(m)?));
    }
    let mut msd: Vec<Option<Vec<f64>>> =
        vec![Some(Vec::with_capacity(exp.iterations)); n_algos];
    let mut emse_tail = vec![(0.0, 0usize); n_algos];
    let mut fingerprint = 0xcbf29ce484222325u64;
    let mut u = vec![0.0; m];

    for n in 0..exp.iterations {
        next_input(&mut input_rng, &mut u);
        let v = exp.noise.sample(&mut noise_rng);
        let d = u.iter().zip(w_s).map(|(ui, wi)| ui * wi).sum::<f64>() + v;
        for &x in &u {
            fnv1a(&mut fingerprint, &x.to_le_bytes());
        }
        fnv1a(&mut fingerprint, &d.to_le_bytes());

        for (a, filter_slot) in filters.iter_mut().enumerate() {
            let Some(filter) = filter_slot else { continue };
            // MSD of the weights entering this iteration
            let deviation: f64 =
                filter.weights().iter().zip(w_s).map(|(w, ws)| (ws - w) * (ws - w)).sum();
            if let Some(trace) = &mut msd[a] {
                trace.push(deviation);
            }
            let e = filter.step(&u, d)?;
            if n >= tail_start {
                let e_a = e - v;
                emse_tail[a].0 += e_a * e_a;
                emse_tail[a].1 += 1;
            }
            if diverged(filter.weights()) {
                msd[a] = None;
                *filter_slot = None;
            }
        }
    }

    let counters = filters
        .iter()
        .map(|f| f.as_ref().and_then(|f| f.op_counters()))
        .collect();
    Ok(RunOutcome { msd, emse_tail, fingerprint, counters })
}

/// Run the experiment, producing one [`MetricTrace`] per algorithm in
/// configuration order.
pub fn run_sysid(exp: &SysIdExperiment) -> Result<Vec<MetricTrace>> {
    run_sysid_with_tail(exp, STEADY_TAIL_FRACTION)
}

/// Like [`run_sysid`] with an explicit steady-state tail fraction for the
/// EMSE/steady-MSD estimates.
pub fn run_sysid_with_tail(exp: &SysIdExperiment, tail_fraction: f64) -> Result<Vec<MetricTrace>> {
    exp.validate()?;
    if !(0.0 < tail_fraction && tail_fraction <= 1.0) {
        return Err(Error::invalid("tail_fraction", "must be in (0, 1]"));
    }
    let w_s = exp.system_weights();
    let tail_start = exp.iterations - ((exp.iterations as f64 * tail_fraction) as usize).max(1);

    let outcomes: Vec<Result<RunOutcome>> = (0..exp.runs as u64)
        .into_par_iter()
        .map(|run| single_run(exp, &w_s, run, tail_start))
        .collect();

    // reduce in run-index order
    let n_algos = exp.algorithms.len();
    let mut msd_sum = vec![vec![0.0; exp.iterations]; n_algos];
    let mut used = vec![0usize; n_algos];
    let mut diverged_runs = vec![0usize; n_algos];
    let mut emse_sum = vec![(0.0, 0usize); n_algos];
    let mut fingerprint = 0xcbf29ce484222325u64;
    let mut counters: Vec<Option<OpCounters>> = vec![None; n_algos];

    for outcome in outcomes {
        let outcome = outcome?;
        fnv1a(&mut fingerprint, &outcome.fingerprint.to_le_bytes());
        for a in 0..n_algos {
            match &outcome.msd[a] {
                Some(trace) => {
                    for (acc, &v) in msd_sum[a].iter_mut().zip(trace) {
                        *acc += v;
                    }
                    used[a] += 1;
                    emse_sum[a].0 += outcome.emse_tail[a].0;
                    emse_sum[a].1 += outcome.emse_tail[a].1;
                    if let Some(c) = outcome.counters[a] {
                        let entry = counters[a].get_or_insert(OpCounters::default());
                        entry.mults += c.mults;
                        entry.adds += c.adds;
                        entry.exps += c.exps;
                    }
                }
                None => diverged_runs[a] += 1,
            }
        }
    }

    let mut traces = Vec::with_capacity(n_algos);
    for (a, spec) in exp.algorithms.iter().enumerate() {
        let runs_used = used[a];
        let msd_db: Vec<f64> = if runs_used > 0 {
            msd_sum[a]
                .iter()
                .map(|s| 10.0 * (s / runs_used as f64).max(1e-300).log10())
                .collect()
        } else {
            vec![f64::INFINITY; exp.iterations]
        };
        let steady_msd = if runs_used > 0 {
            msd_sum[a][tail_start..].iter().sum::<f64>()
                / ((exp.iterations - tail_start) * runs_used) as f64
        } else {
            f64::INFINITY
        };
        let emse = if emse_sum[a].1 > 0 {
            emse_sum[a].0 / emse_sum[a].1 as f64
        } else {
            f64::INFINITY
        };
        traces.push(MetricTrace {
            algorithm: spec.name().to_string(),
            msd_db,
            steady_msd,
            steady_msd_db: 10.0 * steady_msd.max(1e-300).log10(),
            emse,
            emse_db: 10.0 * emse.max(1e-300).log10(),
            runs_used,
            divergence_count: diverged_runs[a],
            stream_fingerprint: fingerprint,
            op_counters: counters[a],
        });
    }
    Ok(traces)
}

/// Steady-state EMSE per algorithm over the final `tail_fraction` of
/// iterations (divergent runs excluded).
pub fn measure_emse(exp: &SysIdExperiment, tail_fraction: f64) -> Result<Vec<(String, f64)>> {
    let traces = run_sysid_with_tail(exp, tail_fraction)?;
    Ok(traces.into_iter().map(|t| (t.algorithm, t.emse)).collect())
}

/// Parameter axis of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    Alpha,
    Beta,
    Gamma,
    WindowLen,
}

impl SweepParameter {
    pub fn label(&self) -> &'static str {
        match self {
            SweepParameter::Alpha => "alpha",
            SweepParameter::Beta => "beta",
            SweepParameter::Gamma => "gamma",
            SweepParameter::WindowLen => "window",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "alpha" => Ok(SweepParameter::Alpha),
            "beta" => Ok(SweepParameter::Beta),
            "gamma" => Ok(SweepParameter::Gamma),
            "window" => Ok(SweepParameter::WindowLen),
            other => Err(Error::invalid(
                "parameter",
                format!("unknown sweep parameter `{other}` (alpha|beta|gamma|window)"),
            )),
        }
    }

    /// Rewrite one algorithm description with this parameter set to `value`.
    pub fn apply(&self, spec: &AlgorithmSpec, value: f64) -> Result<AlgorithmSpec> {
        let mut out = spec.clone();
        match (&mut out, self) {
            (AlgorithmSpec::Mee { beta, .. }, SweepParameter::Beta) => *beta = value,
            (AlgorithmSpec::Mee { window, .. }, SweepParameter::WindowLen) => {
                *window = value as usize
            }
            (AlgorithmSpec::Gmee { alpha, .. }, SweepParameter::Alpha) => *alpha = value,
            (AlgorithmSpec::Gmee { beta, .. }, SweepParameter::Beta) => *beta = value,
            (AlgorithmSpec::Gmee { window, .. }, SweepParameter::WindowLen) => {
                *window = value as usize
            }
            (AlgorithmSpec::Qgmee { alpha, .. }, SweepParameter::Alpha) => *alpha = value,
            (AlgorithmSpec::Qgmee { beta, .. }, SweepParameter::Beta) => *beta = value,
            (AlgorithmSpec::Qgmee { gamma, .. }, SweepParameter::Gamma) => *gamma = value,
            (AlgorithmSpec::Qgmee { window, .. }, SweepParameter::WindowLen) => {
                *window = value as usize
            }
            _ => {
                return Err(Error::invalid(
                    "parameter",
                    format!("{} does not apply to {}", self.label(), spec.name()),
                ))
            }
        }
        Ok(out)
    }
}

/// One sweep cell.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub param_value: f64,
    pub noise: &'static str,
    pub algorithm: String,
    pub steady_msd_db: f64,
    pub divergence_count: usize,
    /// step size actually used (calibrated when requested)
    pub eta: Option<f64>,
}

#[derive(Debug, Clone, Default)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

/// Step-size calibration target: make the averaged MSD trace first cross
/// `threshold_db` at roughly `target_iterations`.
#[derive(Debug, Clone)]
pub struct CalibrationTarget {
    pub target_iterations: usize,
    pub threshold_db: f64,
    pub probe_runs: usize,
    pub probe_iterations: usize,
}

impl CalibrationTarget {
    pub fn new(target_iterations: usize) -> Self {
        CalibrationTarget {
            target_iterations,
            threshold_db: -10.0,
            probe_runs: 5,
            probe_iterations: target_iterations * 4,
        }
    }
}

fn first_crossing(trace: &[f64], threshold_db: f64) -> Option<usize> {
    trace.iter().position(|&v| v <= threshold_db)
}

/// Probe one step size under the calibration reference (Gaussian noise of
/// the experiment's variance); returns the first threshold crossing and
/// the mean dB level over the probe horizon.
fn probe_eta(
    exp: &SysIdExperiment,
    spec: &AlgorithmSpec,
    eta: f64,
    target: &CalibrationTarget,
) -> Result<(Option<usize>, f64, usize)> {
    let probe = SysIdExperiment {
        algorithms: vec![spec.with_eta(eta)],
        noise: NoiseModel::gaussian(0.0, exp.noise.variance())?,
        iterations: target.probe_iterations,
        runs: target.probe_runs,
        // decorrelate calibration from evaluation streams
        base_seed: exp.base_seed ^ 0x9e3779b97f4a7c15,
        ..exp.clone()
    };
    let trace = &run_sysid(&probe)?[0];
    if trace.runs_used == 0 {
        return Ok((None, f64::INFINITY, trace.divergence_count));
    }
    let mean_db = trace.msd_db.iter().sum::<f64>() / trace.msd_db.len() as f64;
    Ok((first_crossing(&trace.msd_db, target.threshold_db), mean_db, trace.divergence_count))
}

/// Bisect the step size so the probe trace first crosses the target
/// threshold near `target_iterations`.
///
/// The reference stream is Gaussian noise with the experiment's noise
/// variance. When no stable step size reaches the threshold at all (the
/// steady-state floor sits above it), the stable probe with the best mean
/// descent is returned instead.
pub fn calibrate_eta(
    exp: &SysIdExperiment,
    spec: &AlgorithmSpec,
    target: &CalibrationTarget,
) -> Result<f64> {
    // `exp` is a template: its algorithm list is replaced by the probe, so
    // validation happens on the probe experiments themselves
    if spec.eta().is_none() {
        // RLS has no step size to calibrate
        return Err(Error::invalid("algorithm", "has no step size to calibrate"));
    }

    // geometric bracket over a wide range
    let mut best_fallback: Option<(f64, f64)> = None; // (mean_db, eta)
    let mut crossing: Vec<(f64, usize)> = Vec::new(); // (eta, first crossing)
    let mut eta = 1e-5;
    while eta <= 1024.0 {
        let (cross, mean_db, diverged) = probe_eta(exp, spec, eta, target)?;
        if diverged == 0 {
            if best_fallback.is_none_or(|(m, _)| mean_db < m) {
                best_fallback = Some((mean_db, eta));
            }
            if let Some(c) = cross {
                crossing.push((eta, c));
            }
        }
        eta *= 2.0;
    }

    if crossing.is_empty() {
        // nothing reached the threshold; fall back to the best descender
        return best_fallback
            .map(|(_, eta)| eta)
            .ok_or_else(|| Error::invalid("eta", "no stable step size found in (1e-5, 1024)"));
    }

    // crossings shrink as η grows: `slow` is the largest η still slower
    // than the target, `fast` the smallest η at or beyond target speed
    let slow = crossing.iter().rfind(|(_, c)| *c > target.target_iterations);
    let fast = crossing.iter().find(|(_, c)| *c <= target.target_iterations);
    let (mut lo, mut hi) = match (slow, fast) {
        (None, Some(&(eta, _))) => return Ok(eta), // every probe is already fast
        (Some(&(eta, _)), None) => return Ok(eta), // target speed unreachable
        (Some(&(lo, _)), Some(&(hi, _))) => (lo, hi),
        (None, None) => unreachable!("crossing is nonempty"),
    };
    for _ in 0..12 {
        let mid = (lo * hi).sqrt();
        let (cross, _, diverged) = probe_eta(exp, spec, mid, target)?;
        match cross {
            Some(c) if diverged == 0 => {
                let ratio = c as f64 / target.target_iterations as f64;
                if (0.9..=1.1).contains(&ratio) {
                    return Ok(mid);
                }
                if c > target.target_iterations {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            _ => hi = mid,
        }
    }
    Ok((lo * hi).sqrt())
}

/// Sweep one parameter of the last algorithm spec over `values`.
///
/// With a calibration target every cell gets its own bisected step size
/// (recorded in the row); otherwise the algorithm's configured η is used as-is.
pub fn sweep(
    exp: &SysIdExperiment,
    parameter: SweepParameter,
    values: &[f64],
    calibration: Option<&CalibrationTarget>,
) -> Result<SweepTable> {
    exp.validate()?;
    if values.is_empty() {
        return Err(Error::EmptyInput("sweep needs at least one grid value"));
    }
    let mut table = SweepTable::default();
    for &value in values {
        for spec in &exp.algorithms {
            let cell_spec = parameter.apply(spec, value)?;
            let cell_spec = match calibration {
                Some(target) => {
                    let eta = calibrate_eta(exp, &cell_spec, target)?;
                    cell_spec.with_eta(eta)
                }
                None => cell_spec,
            };
            let cell = SysIdExperiment {
                algorithms: vec![cell_spec.clone()],
                ..exp.clone()
            };
            let trace = run_sysid(&cell)?.remove(0);
            table.rows.push(SweepRow {
                param_value: value,
                noise: exp.noise.label(),
                algorithm: cell_spec.name().to_string(),
                steady_msd_db: trace.steady_msd_db,
                divergence_count: trace.divergence_count,
                eta: cell_spec.eta(),
            });
        }
    }
    Ok(table)
}
