//! Declarative experiment configuration.
//!
//! One TOML document describes one experiment. Parsing is strict (unknown
//! keys are rejected with the TOML position) and semantic validation
//! reports *every* violation with its field path, not just the first.

use crate::error::Result as LibResult;
use crate::filters::{AlgorithmSpec, Gmcc, Rls};
use crate::noise::NoiseModel;
use crate::simkit::SweepParameter;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Experiment kinds the runner understands.
pub const KINDS: [&str; 6] = ["sysid", "emse", "sweep", "aec", "theory", "complexity"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// sysid | emse | sweep | aec | theory | complexity
    pub kind: String,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: String,
    #[serde(default)]
    pub dimensions: Dimensions,
    #[serde(default)]
    pub run: RunBlock,
    #[serde(default)]
    pub noise: Option<NoiseConfig>,
    #[serde(default)]
    pub algorithms: Vec<AlgorithmConfig>,
    #[serde(default)]
    pub sweep: Option<SweepBlock>,
    #[serde(default)]
    pub emse: Option<EmseBlock>,
    #[serde(default)]
    pub theory: Option<TheoryBlock>,
    #[serde(default)]
    pub aec: Option<AecBlock>,
    #[serde(default)]
    pub complexity: Option<ComplexityBlock>,
}

fn default_output_dir() -> String {
    "out".to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Dimensions {
    /// filter length M
    #[serde(default = "default_filter_len")]
    pub filter_len: usize,
}

fn default_filter_len() -> usize {
    10
}

impl Default for Dimensions {
    fn default() -> Self {
        Dimensions { filter_len: default_filter_len() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunBlock {
    #[serde(default = "default_iterations")]
    pub iterations: usize,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default = "default_tail_fraction")]
    pub tail_fraction: f64,
}

fn default_iterations() -> usize {
    4000
}
fn default_runs() -> usize {
    20
}
fn default_tail_fraction() -> f64 {
    0.1
}

impl Default for RunBlock {
    fn default() -> Self {
        RunBlock {
            iterations: default_iterations(),
            runs: default_runs(),
            tail_fraction: default_tail_fraction(),
        }
    }
}

/// Noise block: `kind` plus the fields of that variant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseConfig {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outlier_prob: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variance_small: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variance_large: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spike_prob: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rayleigh_scale: Option<f64>,
}

/// Algorithm block: `kind` plus that algorithm's parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmConfig {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forgetting: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    /// alpha | beta | gamma | window
    pub parameter: String,
    pub values: Vec<f64>,
    #[serde(default)]
    pub calibrate: bool,
    #[serde(default = "default_target_iterations")]
    pub target_iterations: usize,
}

fn default_target_iterations() -> usize {
    500
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmseBlock {
    pub etas: Vec<f64>,
    #[serde(default = "default_pq_samples")]
    pub pq_samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TheoryBlock {
    pub eta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub window: usize,
    #[serde(default = "default_pq_samples")]
    pub pq_samples: usize,
    #[serde(default = "default_input_variance")]
    pub input_variance: f64,
}

fn default_pq_samples() -> usize {
    crate::analysis::DEFAULT_PQ_SAMPLES
}
fn default_input_variance() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AecBlock {
    #[serde(default = "default_path_taps")]
    pub path_taps: usize,
    #[serde(default = "default_decay_rate")]
    pub decay_rate: f64,
    #[serde(default = "default_aec_samples")]
    pub samples: usize,
    #[serde(default = "default_sessions")]
    pub sessions: usize,
    #[serde(default = "default_sample_rate")]
    pub sample_rate: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub far_end_wav: Option<String>,
    #[serde(default = "default_write_wav")]
    pub write_wav: bool,
}

fn default_path_taps() -> usize {
    64
}
fn default_decay_rate() -> f64 {
    0.1
}
fn default_aec_samples() -> usize {
    20_000
}
fn default_sessions() -> usize {
    1
}
fn default_sample_rate() -> u32 {
    16_000
}
fn default_write_wav() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexityBlock {
    /// filter length M
    pub filter_len: usize,
    /// window length L
    pub window_len: usize,
    /// codebook size H
    pub codebook_len: usize,
}

/// A single semantic violation, addressed by field path.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigViolation {
    pub path: String,
    pub message: String,
}

impl fmt::Display for ConfigViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

/// Parse or validation failure.
#[derive(Debug)]
pub enum ConfigError {
    /// TOML syntax or unknown-key error, with the parser's position info.
    Syntax(String),
    /// Every semantic violation found, not just the first.
    Invalid(Vec<ConfigViolation>),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Syntax(msg) => write!(f, "config syntax error: {msg}"),
            ConfigError::Invalid(violations) => {
                writeln!(f, "invalid config ({} violation(s)):", violations.len())?;
                for v in violations {
                    writeln!(f, "  - {v}")?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for ConfigError {}

/// Parse and fully validate one experiment document.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let config: ExperimentConfig =
        toml::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))?;
    let violations = config.validate();
    if violations.is_empty() {
        Ok(config)
    } else {
        Err(ConfigError::Invalid(violations))
    }
}

/// Render a config back to TOML (defaults included explicitly).
pub fn render_config(config: &ExperimentConfig) -> String {
    toml::to_string_pretty(config).expect("config serializes")
}

struct Checker {
    violations: Vec<ConfigViolation>,
}

impl Checker {
    fn push(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.violations.push(ConfigViolation { path: path.into(), message: message.into() });
    }

    fn require<T>(&mut self, value: Option<T>, path: &str) -> Option<T> {
        if value.is_none() {
            self.push(path, "required field is missing");
        }
        value
    }

    fn forbid<T>(&mut self, value: &Option<T>, path: &str, kind: &str) {
        if value.is_some() {
            self.push(path, format!("not applicable to kind `{kind}`"));
        }
    }
}

impl ExperimentConfig {
    /// Collect every semantic violation in the document.
    pub fn validate(&self) -> Vec<ConfigViolation> {
        let mut c = Checker { violations: Vec::new() };
        if !KINDS.contains(&self.kind.as_str()) {
            c.push("kind", format!("unknown experiment kind `{}`", self.kind));
            return c.violations;
        }
        if self.dimensions.filter_len == 0 {
            c.push("dimensions.filter_len", "must be ≥ 1");
        }
        if self.run.iterations == 0 {
            c.push("run.iterations", "must be ≥ 1");
        }
        if self.run.runs == 0 {
            c.push("run.runs", "must be ≥ 1");
        }
        if !(self.run.tail_fraction > 0.0 && self.run.tail_fraction <= 1.0) {
            c.push("run.tail_fraction", "must be in (0, 1]");
        }

        let needs_noise = matches!(self.kind.as_str(), "sysid" | "emse" | "sweep" | "theory");
        if needs_noise {
            match &self.noise {
                Some(n) => n.check(&mut c),
                None => c.push("noise", "required for this experiment kind"),
            }
        } else if let Some(n) = &self.noise {
            // optional override for aec; still has to be coherent
            n.check(&mut c);
        }

        let needs_algorithms = matches!(self.kind.as_str(), "sysid" | "emse" | "sweep" | "aec");
        if needs_algorithms && self.algorithms.is_empty() {
            c.push("algorithms", "need at least one algorithm");
        }
        for (i, a) in self.algorithms.iter().enumerate() {
            a.check(&mut c, i);
        }

        match self.kind.as_str() {
            "sweep" => match &self.sweep {
                Some(s) => s.check(&mut c, &self.algorithms),
                None => c.push("sweep", "required for kind `sweep`"),
            },
            "emse" => {
                match &self.emse {
                    Some(e) => e.check(&mut c),
                    None => c.push("emse", "required for kind `emse`"),
                }
                if let Some(first) = self.algorithms.first() {
                    if first.kind != "gmee" {
                        c.push("algorithms[0].kind", "emse experiments drive a gmee filter");
                    }
                }
            }
            "theory" => match &self.theory {
                Some(t) => t.check(&mut c),
                None => c.push("theory", "required for kind `theory`"),
            },
            "aec" => match &self.aec {
                Some(a) => a.check(&mut c),
                None => c.push("aec", "required for kind `aec`"),
            },
            "complexity" => match &self.complexity {
                Some(b) => b.check(&mut c),
                None => c.push("complexity", "required for kind `complexity`"),
            },
            _ => {}
        }
        c.violations
    }

    /// Build the typed noise model (after successful validation).
    pub fn noise_model(&self) -> LibResult<NoiseModel> {
        self.noise
            .as_ref()
            .expect("validated config has a noise block")
            .build()
    }

    /// Build all algorithm descriptions (after successful validation).
    pub fn algorithm_specs(&self) -> LibResult<Vec<AlgorithmSpec>> {
        self.algorithms.iter().map(|a| a.build()).collect()
    }
}

impl NoiseConfig {
    fn check(&self, c: &mut Checker) {
        match self.kind.as_str() {
            "gaussian" => {
                if let Some(v) = self.require_f64(c, self.variance, "noise.variance") {
                    if !(v > 0.0) {
                        c.push("noise.variance", "must be > 0");
                    }
                }
                self.forbid_mixture_fields(c, "gaussian");
            }
            "uniform" => {
                if let Some(v) = self.require_f64(c, self.variance, "noise.variance") {
                    if !(v > 0.0) {
                        c.push("noise.variance", "must be > 0");
                    }
                }
                c.forbid(&self.mean, "noise.mean", "uniform");
                self.forbid_mixture_fields(c, "uniform");
            }
            "mixed_gaussian" => {
                if let Some(p) = self.require_f64(c, self.outlier_prob, "noise.outlier_prob") {
                    if !(0.0..=1.0).contains(&p) {
                        c.push("noise.outlier_prob", "must be in [0, 1]");
                    }
                }
                for (v, path) in [
                    (self.variance_small, "noise.variance_small"),
                    (self.variance_large, "noise.variance_large"),
                ] {
                    if let Some(v) = self.require_f64(c, v, path) {
                        if !(v > 0.0) {
                            c.push(path, "must be > 0");
                        }
                    }
                }
                c.forbid(&self.mean, "noise.mean", "mixed_gaussian");
                c.forbid(&self.variance, "noise.variance", "mixed_gaussian");
                c.forbid(&self.spike_prob, "noise.spike_prob", "mixed_gaussian");
                c.forbid(&self.rayleigh_scale, "noise.rayleigh_scale", "mixed_gaussian");
            }
            "bernoulli_rayleigh" => {
                if let Some(p) = self.require_f64(c, self.spike_prob, "noise.spike_prob") {
                    if !(0.0..=1.0).contains(&p) {
                        c.push("noise.spike_prob", "must be in [0, 1]");
                    }
                }
                if let Some(s) = self.require_f64(c, self.rayleigh_scale, "noise.rayleigh_scale") {
                    if !(s > 0.0) {
                        c.push("noise.rayleigh_scale", "must be > 0");
                    }
                }
                c.forbid(&self.mean, "noise.mean", "bernoulli_rayleigh");
                c.forbid(&self.variance, "noise.variance", "bernoulli_rayleigh");
                c.forbid(&self.outlier_prob, "noise.outlier_prob", "bernoulli_rayleigh");
                c.forbid(&self.variance_small, "noise.variance_small", "bernoulli_rayleigh");
                c.forbid(&self.variance_large, "noise.variance_large", "bernoulli_rayleigh");
            }
            other => c.push("noise.kind", format!("unknown noise kind `{other}`")),
        }
    }

    fn require_f64(&self, c: &mut Checker, v: Option<f64>, path: &str) -> Option<f64> {
        c.require(v, path)
    }

    fn forbid_mixture_fields(&self, c: &mut Checker, kind: &str) {
        c.forbid(&self.outlier_prob, "noise.outlier_prob", kind);
        c.forbid(&self.variance_small, "noise.variance_small", kind);
        c.forbid(&self.variance_large, "noise.variance_large", kind);
        c.forbid(&self.spike_prob, "noise.spike_prob", kind);
        c.forbid(&self.rayleigh_scale, "noise.rayleigh_scale", kind);
    }

    pub fn build(&self) -> LibResult<NoiseModel> {
        match self.kind.as_str() {
            "gaussian" => NoiseModel::gaussian(self.mean.unwrap_or(0.0), self.variance.unwrap()),
            "uniform" => NoiseModel::uniform(self.variance.unwrap()),
            "mixed_gaussian" => NoiseModel::mixed_gaussian(
                self.outlier_prob.unwrap(),
                self.variance_small.unwrap(),
                self.variance_large.unwrap(),
            ),
            "bernoulli_rayleigh" => NoiseModel::bernoulli_rayleigh(
                self.spike_prob.unwrap(),
                self.rayleigh_scale.unwrap(),
            ),
            other => Err(crate::Error::invalid("noise.kind", format!("unknown `{other}`"))),
        }
    }
}

impl AlgorithmConfig {
    fn check(&self, c: &mut Checker, index: usize) {
        let at = |field: &str| format!("algorithms[{index}].{field}");
        let require_positive = |c: &mut Checker, v: Option<f64>, field: &str| {
            match v {
                Some(x) if x > 0.0 => {}
                Some(x) => c.push(at(field), format!("must be > 0, got {x}")),
                None => c.push(at(field), "required field is missing"),
            }
        };
        match self.kind.as_str() {
            "lms" | "lmf" => {
                require_positive(&mut *c, self.eta, "eta");
            }
            "gmcc" => {
                require_positive(&mut *c, self.eta, "eta");
                if let Some(s) = self.shape {
                    if !(s > 0.0) {
                        c.push(at("shape"), "must be > 0");
                    }
                }
                if let Some(l) = self.lambda {
                    if !(l > 0.0) {
                        c.push(at("lambda"), "must be > 0");
                    }
                }
            }
            "rls" => {
                if let Some(f) = self.forgetting {
                    if !(f > 0.0 && f <= 1.0) {
                        c.push(at("forgetting"), "must be in (0, 1]");
                    }
                }
                if let Some(d) = self.delta {
                    if !(d > 0.0) {
                        c.push(at("delta"), "must be > 0");
                    }
                }
                c.forbid(&self.eta, &at("eta"), "rls");
            }
            "mee" => {
                require_positive(&mut *c, self.eta, "eta");
                require_positive(&mut *c, self.beta, "beta");
                self.check_window(c, &at("window"));
            }
            "gmee" | "qgmee" => {
                require_positive(&mut *c, self.eta, "eta");
                require_positive(&mut *c, self.beta, "beta");
                match self.alpha {
                    Some(a) if a >= 1.0 => {}
                    Some(a) => c.push(at("alpha"), format!("must be ≥ 1, got {a}")),
                    None => c.push(at("alpha"), "required field is missing"),
                }
                self.check_window(c, &at("window"));
                if self.kind == "qgmee" {
                    match self.gamma {
                        Some(g) if g >= 0.0 => {}
                        Some(g) => c.push(at("gamma"), format!("must be ≥ 0, got {g}")),
                        None => c.push(at("gamma"), "required field is missing"),
                    }
                } else {
                    c.forbid(&self.gamma, &at("gamma"), "gmee");
                }
            }
            other => c.push(at("kind"), format!("unknown algorithm `{other}`")),
        }
    }

    fn check_window(&self, c: &mut Checker, path: &str) {
        match self.window {
            Some(w) if w >= 2 => {}
            Some(w) => c.push(path, format!("must be ≥ 2, got {w}")),
            None => c.push(path, "required field is missing"),
        }
    }

    pub fn build(&self) -> LibResult<AlgorithmSpec> {
        Ok(match self.kind.as_str() {
            "lms" => AlgorithmSpec::Lms { eta: self.eta.unwrap() },
            "lmf" => AlgorithmSpec::Lmf { eta: self.eta.unwrap() },
            "gmcc" => AlgorithmSpec::Gmcc {
                eta: self.eta.unwrap(),
                shape: self.shape.unwrap_or(Gmcc::DEFAULT_SHAPE),
                lambda: self.lambda.unwrap_or(Gmcc::DEFAULT_LAMBDA),
            },
            "rls" => AlgorithmSpec::Rls {
                forgetting: self.forgetting.unwrap_or(Rls::DEFAULT_FORGETTING),
                delta: self.delta.unwrap_or(Rls::DEFAULT_DELTA),
            },
            "mee" => AlgorithmSpec::Mee {
                eta: self.eta.unwrap(),
                beta: self.beta.unwrap(),
                window: self.window.unwrap(),
            },
            "gmee" => AlgorithmSpec::Gmee {
                eta: self.eta.unwrap(),
                alpha: self.alpha.unwrap(),
                beta: self.beta.unwrap(),
                window: self.window.unwrap(),
            },
            "qgmee" => AlgorithmSpec::Qgmee {
                eta: self.eta.unwrap(),
                alpha: self.alpha.unwrap(),
                beta: self.beta.unwrap(),
                window: self.window.unwrap(),
                gamma: self.gamma.unwrap(),
            },
            other => return Err(crate::Error::UnknownAlgorithm(other.to_string())),
        })
    }
}

impl SweepBlock {
    fn check(&self, c: &mut Checker, algorithms: &[AlgorithmConfig]) {
        match SweepParameter::parse(&self.parameter) {
            Ok(param) => {
                // the parameter must apply to every configured algorithm
                for (i, a) in algorithms.iter().enumerate() {
                    if let Ok(spec) = a.build() {
                        if param.apply(&spec, 1.0).is_err() {
                            c.push(
                                "sweep.parameter".to_string(),
                                format!("`{}` does not apply to algorithms[{i}] ({})", self.parameter, a.kind),
                            );
                        }
                    }
                }
            }
            Err(_) => c.push("sweep.parameter", "must be one of alpha|beta|gamma|window"),
        }
        if self.values.is_empty() {
            c.push("sweep.values", "need at least one grid value");
        }
        if self.calibrate && self.target_iterations == 0 {
            c.push("sweep.target_iterations", "must be ≥ 1 when calibrate = true");
        }
    }
}

impl EmseBlock {
    fn check(&self, c: &mut Checker) {
        if self.etas.is_empty() {
            c.push("emse.etas", "need at least one step size");
        }
        for (i, &eta) in self.etas.iter().enumerate() {
            if !(eta > 0.0) {
                c.push(format!("emse.etas[{i}]"), "must be > 0");
            }
        }
        if self.pq_samples < crate::analysis::MIN_PQ_SAMPLES {
            c.push("emse.pq_samples", format!("must be ≥ {}", crate::analysis::MIN_PQ_SAMPLES));
        }
    }
}

impl TheoryBlock {
    fn check(&self, c: &mut Checker) {
        if !(self.eta > 0.0) {
            c.push("theory.eta", "must be > 0");
        }
        if !(self.alpha >= 1.0) {
            c.push("theory.alpha", "must be ≥ 1");
        }
        if !(self.beta > 0.0) {
            c.push("theory.beta", "must be > 0");
        }
        if self.window < 2 {
            c.push("theory.window", "must be ≥ 2");
        }
        if self.pq_samples < crate::analysis::MIN_PQ_SAMPLES {
            c.push("theory.pq_samples", format!("must be ≥ {}", crate::analysis::MIN_PQ_SAMPLES));
        }
        if !(self.input_variance > 0.0) {
            c.push("theory.input_variance", "must be > 0");
        }
    }
}

impl AecBlock {
    fn check(&self, c: &mut Checker) {
        if self.path_taps == 0 {
            c.push("aec.path_taps", "must be ≥ 1");
        }
        if !(self.decay_rate > 0.0 && self.decay_rate <= 1.0) {
            c.push("aec.decay_rate", "must be in (0, 1]");
        }
        if self.samples == 0 {
            c.push("aec.samples", "must be ≥ 1");
        }
        if self.sessions == 0 {
            c.push("aec.sessions", "must be ≥ 1");
        }
        if self.sample_rate == 0 {
            c.push("aec.sample_rate", "must be ≥ 1");
        }
    }
}

impl ComplexityBlock {
    fn check(&self, c: &mut Checker) {
        if self.filter_len == 0 {
            c.push("complexity.filter_len", "must be ≥ 1");
        }
        if self.window_len == 0 {
            c.push("complexity.window_len", "must be ≥ 1");
        }
        if self.codebook_len == 0 {
            c.push("complexity.codebook_len", "must be ≥ 1");
        } else if self.codebook_len > self.window_len {
            c.push("complexity.codebook_len", "cannot exceed window_len");
        }
    }
}
