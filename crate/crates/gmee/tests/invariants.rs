//! Cross-module behavioral invariants: robustness orderings, quantization
//! degradation, and echo-cancellation trend checks.

use gmee::aec::{run_aec, synth_echo_path, synth_far_end, AecSession};
use gmee::filters::AlgorithmSpec;
use gmee::noise::NoiseModel;
use gmee::simkit::{
    calibrate_eta, run_sysid, sweep, CalibrationTarget, SweepParameter, SysIdExperiment,
    TrueWeights,
};

fn mixed_gaussian() -> NoiseModel {
    NoiseModel::mixed_gaussian(0.05, 0.01, 100.0).unwrap()
}

/// Under impulsive mixture noise, the entropy filter beats LMS which beats
/// LMF, with every step size calibrated to the same reference speed.
#[test]
fn robustness_ordering_under_impulsive_noise() {
    let noise = mixed_gaussian();
    let base = SysIdExperiment {
        filter_len: 10,
        true_weights: TrueWeights::SeededUnitNorm,
        noise,
        algorithms: Vec::new(),
        iterations: 4000,
        runs: 10,
        base_seed: 11,
    };
    let target = CalibrationTarget::new(500);
    let steady = |spec: AlgorithmSpec| -> f64 {
        let eta = calibrate_eta(&base, &spec, &target).unwrap();
        let exp = SysIdExperiment { algorithms: vec![spec.with_eta(eta)], ..base.clone() };
        run_sysid(&exp).unwrap().remove(0).steady_msd_db
    };
    let gmee = steady(AlgorithmSpec::Gmee { eta: 0.01, alpha: 1.0, beta: 6.0, window: 10 });
    let lms = steady(AlgorithmSpec::Lms { eta: 0.01 });
    let lmf = steady(AlgorithmSpec::Lmf { eta: 0.01 });
    assert!(gmee < lms, "gmee {gmee:.2} dB !< lms {lms:.2} dB");
    assert!(lms < lmf, "lms {lms:.2} dB !< lmf {lmf:.2} dB");
}

/// Small quantization thresholds are free; large ones cost accuracy.
#[test]
fn quantization_threshold_degrades_gracefully() {
    let exp = SysIdExperiment {
        filter_len: 10,
        true_weights: TrueWeights::SeededUnitNorm,
        noise: mixed_gaussian(),
        algorithms: vec![AlgorithmSpec::Qgmee {
            eta: 0.3,
            alpha: 2.0,
            beta: 1.0,
            window: 10,
            gamma: 0.0,
        }],
        iterations: 4000,
        runs: 10,
        base_seed: 29,
    };
    let table = sweep(&exp, SweepParameter::Gamma, &[0.0, 0.05, 2.0], None).unwrap();
    let at_zero = table.rows[0].steady_msd_db;
    let small = table.rows[1].steady_msd_db;
    let large = table.rows[2].steady_msd_db;
    assert!(
        (small - at_zero).abs() <= 1.0,
        "γ=0.05 moved steady MSD from {at_zero:.2} to {small:.2} dB"
    );
    assert!(
        large > at_zero + 1.0,
        "γ=2 should degrade: {large:.2} dB vs {at_zero:.2} dB at γ=0"
    );
}

/// With no noise and no near end, ERLE keeps climbing once adaptation has
/// taken hold (trend over window-median thirds).
#[test]
fn erle_trend_is_nondecreasing_after_onset() {
    let path = synth_echo_path(16, 0.15, 3).unwrap();
    let mut session = AecSession::new(
        synth_far_end(30_000, 5),
        path,
        AlgorithmSpec::Gmee { eta: 3e-4, alpha: 2.0, beta: 0.2, window: 6 },
        9,
    )
    .unwrap();
    session.noise = NoiseModel::gaussian(0.0, 1e-30).unwrap();
    let out = run_aec(&session).unwrap();
    assert!(!out.diverged);
    // onset: first window clearly into cancellation territory
    let onset = out
        .erle_db
        .iter()
        .position(|&v| v > 10.0)
        .expect("cancellation never took hold");
    let tail = &out.erle_db[onset..];
    assert!(tail.len() >= 9, "too few windows after onset: {}", tail.len());
    let third = tail.len() / 3;
    let median = |s: &[f64]| {
        let mut v = s.to_vec();
        v.sort_by(f64::total_cmp);
        v[v.len() / 2]
    };
    let early = median(&tail[..third]);
    let mid = median(&tail[third..2 * third]);
    let late = median(&tail[2 * third..]);
    assert!(
        early <= mid && mid <= late,
        "ERLE medians not nondecreasing: {early:.1}, {mid:.1}, {late:.1} dB"
    );
}

/// Path-weight accuracy and echo suppression move together.
#[test]
fn msd_and_erle_co_move() {
    let path = synth_echo_path(32, 0.1, 17).unwrap();
    let session = AecSession::new(
        synth_far_end(40_000, 19),
        path,
        AlgorithmSpec::Lms { eta: 0.002 },
        23,
    )
    .unwrap();
    let out = run_aec(&session).unwrap();
    assert!(!out.diverged);

    // MSD sampled at each ERLE window center
    let window = session.erle_window;
    let hop = session.erle_hop;
    let msd_at: Vec<f64> = (0..out.erle_db.len())
        .map(|w| out.msd_db[w * hop + window / 2])
        .collect();

    // Spearman rank correlation between −MSD and ERLE
    let rank = |values: &[f64]| -> Vec<f64> {
        let mut idx: Vec<usize> = (0..values.len()).collect();
        idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let mut r = vec![0.0; values.len()];
        for (pos, &i) in idx.iter().enumerate() {
            r[i] = pos as f64;
        }
        r
    };
    let ra = rank(&msd_at.iter().map(|v| -v).collect::<Vec<_>>());
    let rb = rank(&out.erle_db);
    let n = ra.len() as f64;
    let mean = (n - 1.0) / 2.0;
    let mut num = 0.0;
    let mut da = 0.0;
    let mut db = 0.0;
    for (a, b) in ra.iter().zip(&rb) {
        num += (a - mean) * (b - mean);
        da += (a - mean) * (a - mean);
        db += (b - mean) * (b - mean);
    }
    let rho = num / (da * db).sqrt();
    assert!(rho > 0.9, "rank correlation {rho:.3} ≤ 0.9");
}

/// Pushing the step size far beyond the stability bound trips the
/// divergence accounting on most runs.
#[test]
fn excessive_step_size_is_flagged() {
    let exp = SysIdExperiment {
        filter_len: 10,
        true_weights: TrueWeights::SeededUnitNorm,
        noise: NoiseModel::gaussian(0.0, 1.0).unwrap(),
        algorithms: vec![AlgorithmSpec::Lms { eta: 3.0 }],
        iterations: 2000,
        runs: 6,
        base_seed: 3,
    };
    let trace = run_sysid(&exp).unwrap().remove(0);
    assert!(trace.divergence_count >= 5, "only {} runs flagged", trace.divergence_count);
}
