//! Experiment execution: turns a validated config into CSV artifacts.
//!
//! Output discipline: every file is written to a `.tmp` sibling and
//! renamed into place, so a failed run leaves no partial artifacts. A
//! `metadata.json` records the config fingerprint, seeds, calibrated step
//! sizes, and library version next to every experiment.

use crate::aec::{run_aec, synth_echo_path, synth_far_end, AecSession};
use crate::analysis::{
    complexity_counts, emse_theory, estimate_steady_pq, gmee_step_bound, StepBound, TheoryInputs,
};
use crate::config::{render_config, ExperimentConfig};
use crate::error::{Error, Result};
use crate::filters::AlgorithmSpec;
use crate::kernel::GgdKernel;
use crate::simkit::{
    run_sysid_with_tail, sweep, CalibrationTarget, SweepParameter, SysIdExperiment, TrueWeights,
};
use crate::wav::{wav_read, WavSignal};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

/// Stream id for theory-side Monte-Carlo draws (the harness uses 0–2).
const STREAM_THEORY: u64 = 3;

/// What an execution produced.
#[derive(Debug, Clone)]
pub struct ExecutionReport {
    pub artifacts: Vec<PathBuf>,
    pub config_fingerprint: String,
}

/// SHA-256 of the canonical (re-rendered) config document.
pub fn config_fingerprint(config: &ExperimentConfig) -> String {
    let canonical = render_config(config);
    let digest = Sha256::digest(canonical.as_bytes());
    let mut hex = String::with_capacity(64);
    for b in digest {
        write!(hex, "{b:02x}").expect("hex formatting");
    }
    hex
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("out")
    ));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

struct Artifacts {
    dir: PathBuf,
    files: Vec<PathBuf>,
    calibrated: Vec<serde_json::Value>,
}

impl Artifacts {
    fn new(dir: &str) -> Result<Self> {
        let dir = PathBuf::from(dir);
        fs::create_dir_all(&dir)?;
        Ok(Artifacts { dir, files: Vec::new(), calibrated: Vec::new() })
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(name);
        write_atomic(&path, contents.as_bytes())?;
        self.files.push(path);
        Ok(())
    }

    fn write_wav(&mut self, name: &str, signal: &WavSignal) -> Result<()> {
        let path = self.dir.join(name);
        write_atomic(&path, &crate::wav::wav_encode(signal))?;
        self.files.push(path);
        Ok(())
    }
}

/// Execute one experiment, writing artifacts into `config.output_dir`.
pub fn execute(config: &ExperimentConfig) -> Result<ExecutionReport> {
    let violations = config.validate();
    if !violations.is_empty() {
        let mut msg = String::from("config failed validation:");
        for v in &violations {
            write!(msg, " [{v}]").expect("string write");
        }
        return Err(Error::invalid("config", msg));
    }

    let mut artifacts = Artifacts::new(&config.output_dir)?;
    match config.kind.as_str() {
        "sysid" => run_sysid_kind(config, &mut artifacts)?,
        "emse" => run_emse_kind(config, &mut artifacts)?,
        "sweep" => run_sweep_kind(config, &mut artifacts)?,
        "aec" => run_aec_kind(config, &mut artifacts)?,
        "theory" => run_theory_kind(config, &mut artifacts)?,
        "complexity" => run_complexity_kind(config, &mut artifacts)?,
        other => return Err(Error::invalid("kind", format!("unknown `{other}`"))),
    }

    let fingerprint = config_fingerprint(config);
    let metadata = serde_json::json!({
        "config_fingerprint": fingerprint,
        "base_seed": config.base_seed,
        "library_version": env!("CARGO_PKG_VERSION"),
        "kind": config.kind,
        "calibrated_step_sizes": artifacts.calibrated,
        "artifacts": artifacts
            .files
            .iter()
            .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
            .collect::<Vec<_>>(),
    });
    let mut body = serde_json::to_string_pretty(&metadata).expect("metadata serializes");
    body.push('\n');
    artifacts.write("metadata.json", &body)?;

    Ok(ExecutionReport { artifacts: artifacts.files, config_fingerprint: fingerprint })
}

fn to_sysid(config: &ExperimentConfig) -> Result<SysIdExperiment> {
    Ok(SysIdExperiment {
        filter_len: config.dimensions.filter_len,
        true_weights: TrueWeights::SeededUnitNorm,
        noise: config.noise_model()?,
        algorithms: config.algorithm_specs()?,
        iterations: config.run.iterations,
        runs: config.run.runs,
        base_seed: config.base_seed,
    })
}

fn run_sysid_kind(config: &ExperimentConfig, artifacts: &mut Artifacts) -> Result<()> {
    let exp = to_sysid(config)?;
    let traces = run_sysid_with_tail(&exp, config.run.tail_fraction)?;

    let mut csv = String::from("iteration,algorithm,msd_db\n");
    for trace in &traces {
        for (i, v) in trace.msd_db.iter().enumerate() {
            writeln!(csv, "{i},{},{v:.4}", trace.algorithm).expect("string write");
        }
    }
    artifacts.write("traces.csv", &csv)?;

    let mut summary =
        String::from("algorithm,steady_msd_db,emse,emse_db,runs_used,divergence_count\n");
    for t in &traces {
        writeln!(
            summary,
            "{},{:.4},{},{:.4},{},{}",
            t.algorithm, t.steady_msd_db, t.emse, t.emse_db, t.runs_used, t.divergence_count
        )
        .expect("string write");
    }
    artifacts.write("summary.csv", &summary)?;
    Ok(())
}

fn gmee_theory_inputs(config: &ExperimentConfig, eta: f64) -> Result<TheoryInputs> {
    let specs = config.algorithm_specs()?;
    let Some(AlgorithmSpec::Gmee { alpha, beta, window, .. }) = specs.first().cloned() else {
        return Err(Error::invalid("algorithms", "emse experiments drive a gmee filter"));
    };
    Ok(TheoryInputs {
        kernel: GgdKernel::new(alpha, beta)?,
        window_len: window,
        filter_len: config.dimensions.filter_len,
        input_variance: 1.0,
        noise: config.noise_model()?,
        eta,
    })
}

fn run_emse_kind(config: &ExperimentConfig, artifacts: &mut Artifacts) -> Result<()> {
    let block = config.emse.as_ref().expect("validated emse block");
    let base = to_sysid(config)?;
    let mut inputs = gmee_theory_inputs(config, block.etas[0])?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.base_seed);
    rng.set_stream(STREAM_THEORY);
    let pq = estimate_steady_pq(&inputs, block.pq_samples, &mut rng)?;

    let mut csv = String::from(
        "eta,simulated_emse,simulated_emse_db,theory_emse,theory_emse_db,runs_used,divergence_count\n",
    );
    for &eta in &block.etas {
        let exp = SysIdExperiment {
            algorithms: vec![base.algorithms[0].with_eta(eta)],
            ..base.clone()
        };
        let trace = run_sysid_with_tail(&exp, config.run.tail_fraction)?.remove(0);
        inputs.eta = eta;
        let theory = emse_theory(&inputs, &pq)?;
        writeln!(
            csv,
            "{eta},{},{:.4},{theory},{:.4},{},{}",
            trace.emse,
            trace.emse_db,
            10.0 * theory.max(1e-300).log10(),
            trace.runs_used,
            trace.divergence_count
        )
        .expect("string write");
    }
    artifacts.write("emse.csv", &csv)?;
    Ok(())
}

fn run_sweep_kind(config: &ExperimentConfig, artifacts: &mut Artifacts) -> Result<()> {
    let block = config.sweep.as_ref().expect("validated sweep block");
    let exp = to_sysid(config)?;
    let parameter = SweepParameter::parse(&block.parameter)?;
    let calibration = block.calibrate.then(|| CalibrationTarget::new(block.target_iterations));
    let table = sweep(&exp, parameter, &block.values, calibration.as_ref())?;

    let mut csv = String::from("param_value,noise,algorithm,steady_msd_db,divergence_count\n");
    for row in &table.rows {
        writeln!(
            csv,
            "{},{},{},{:.4},{}",
            row.param_value, row.noise, row.algorithm, row.steady_msd_db, row.divergence_count
        )
        .expect("string write");
        if let Some(eta) = row.eta {
            artifacts.calibrated.push(serde_json::json!({
                "algorithm": row.algorithm,
                "parameter": parameter.label(),
                "value": row.param_value,
                "eta": eta,
            }));
        }
    }
    artifacts.write("sweep.csv", &csv)?;
    Ok(())
}

fn run_aec_kind(config: &ExperimentConfig, artifacts: &mut Artifacts) -> Result<()> {
    let block = config.aec.as_ref().expect("validated aec block");
    let specs = config.algorithm_specs()?;
    let far_end_base = match &block.far_end_wav {
        Some(path) => Some(wav_read(path)?.samples),
        None => None,
    };

    let mut sessions_csv =
        String::from("session,algorithm,final_erle_db,steady_msd_db,diverged\n");
    let mut first_session_outputs = Vec::new();

    for session_idx in 0..block.sessions {
        let seed = config.base_seed + session_idx as u64;
        let far_end = match &far_end_base {
            Some(samples) => samples.clone(),
            None => synth_far_end(block.samples, seed ^ 0x5851f42d4c957f2d),
        };
        let path = synth_echo_path(block.path_taps, block.decay_rate, seed ^ 0x14057b7ef767814f)?;
        for spec in &specs {
            let mut session = AecSession::new(far_end.clone(), path.clone(), spec.clone(), seed)?;
            if let Some(noise) = &config.noise {
                session.noise = noise.build()?;
            }
            let out = run_aec(&session)?;
            writeln!(
                sessions_csv,
                "{session_idx},{},{:.4},{:.4},{}",
                spec.name(),
                out.final_erle_db,
                out.steady_msd_db,
                out.diverged,
            )
            .expect("string write");
            if session_idx == 0 {
                first_session_outputs.push((spec.name(), out));
            }
        }
    }
    artifacts.write("sessions.csv", &sessions_csv)?;

    for (name, out) in &first_session_outputs {
        let mut erle_csv = String::from("window_index,erle_db\n");
        for (i, v) in out.erle_db.iter().enumerate() {
            writeln!(erle_csv, "{i},{v:.4}").expect("string write");
        }
        artifacts.write(&format!("erle_{name}.csv"), &erle_csv)?;

        let mut msd_csv = String::from("iteration,msd_db\n");
        for (i, v) in out.msd_db.iter().enumerate() {
            writeln!(msd_csv, "{i},{v:.4}").expect("string write");
        }
        artifacts.write(&format!("msd_{name}.csv"), &msd_csv)?;

        if block.write_wav {
            artifacts.write_wav(
                &format!("processed_{name}.wav"),
                &WavSignal { sample_rate: block.sample_rate, samples: out.processed.clone() },
            )?;
        }
    }
    Ok(())
}

fn run_theory_kind(config: &ExperimentConfig, artifacts: &mut Artifacts) -> Result<()> {
    let block = config.theory.as_ref().expect("validated theory block");
    let noise = config.noise_model()?;
    let inputs = TheoryInputs {
        kernel: GgdKernel::new(block.alpha, block.beta)?,
        window_len: block.window,
        filter_len: config.dimensions.filter_len,
        input_variance: block.input_variance,
        noise: noise.clone(),
        eta: block.eta,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.base_seed);
    rng.set_stream(STREAM_THEORY);
    let pq = estimate_steady_pq(&inputs, block.pq_samples, &mut rng)?;
    let emse = emse_theory(&inputs, &pq)?;
    // a priori errors at the stability edge approximated by the noise scale
    let eps = vec![noise.std_dev(); block.window];
    let bound = gmee_step_bound(&inputs, &eps, &pq)?;
    let bound_text = match bound {
        StepBound::Bounded(b) => format!("{b}"),
        StepBound::Unbounded => "unbounded".to_string(),
    };

    let mut csv = String::from(
        "alpha,beta,window,filter_len,eta,noise,emse_theory,emse_theory_db,step_bound\n",
    );
    writeln!(
        csv,
        "{},{},{},{},{},{},{emse},{:.4},{bound_text}",
        block.alpha,
        block.beta,
        block.window,
        config.dimensions.filter_len,
        block.eta,
        noise.label(),
        10.0 * emse.max(1e-300).log10(),
    )
    .expect("string write");
    artifacts.write("theory.csv", &csv)?;
    Ok(())
}

fn run_complexity_kind(config: &ExperimentConfig, artifacts: &mut Artifacts) -> Result<()> {
    let block = config.complexity.as_ref().expect("validated complexity block");
    let mut csv = String::from("algorithm,multiplications,additions,exponentiations\n");
    for algo in ["lms", "lmf", "gmcc", "gmee", "qgmee"] {
        let counts =
            complexity_counts(algo, block.filter_len, block.window_len, block.codebook_len)?;
        writeln!(csv, "{algo},{},{},{}", counts.mults, counts.adds, counts.exps)
            .expect("string write");
    }
    artifacts.write("complexity.csv", &csv)?;
    Ok(())
}
