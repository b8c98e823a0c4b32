//! Steady-state excess error: simulation against the closed-form predictor.
//!
//! Estimates the steady-state force statistics from noise draws, then
//! compares the predicted EMSE with long simulations across a step-size
//! grid.
//!
//! ```bash
//! cargo run --release --example steady_state_emse
//! ```

use gmee::analysis::{emse_theory, estimate_steady_pq, TheoryInputs};
use gmee::filters::AlgorithmSpec;
use gmee::kernel::GgdKernel;
use gmee::noise::NoiseModel;
use gmee::simkit::{run_sysid_with_tail, SysIdExperiment, TrueWeights};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let noise = NoiseModel::mixed_gaussian(0.05, 0.01, 100.0).unwrap();
    let mut inputs = TheoryInputs {
        kernel: GgdKernel::new(2.0, 1.0).unwrap(),
        window_len: 10,
        filter_len: 10,
        input_variance: 1.0,
        noise: noise.clone(),
        eta: 0.01,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    rng.set_stream(3);
    let pq = estimate_steady_pq(&inputs, 100_000, &mut rng).unwrap();
    println!("force statistics over 100000 noise windows:");
    println!("  E||P-Q||^2          = {:.4}", pq.force_sq_norm_mean);
    println!("  E[tr K] (curvature) = {:.4}", pq.restoring_trace_mean);
    println!("  cross-window cov    = {:.4}\n", pq.force_cross_cov);

    println!("{:>8} {:>12} {:>12} {:>8}", "eta", "sim (dB)", "theory (dB)", "gap");
    for eta in [0.005, 0.01, 0.02, 0.04, 0.06] {
        let exp = SysIdExperiment {
            filter_len: 10,
            true_weights: TrueWeights::SeededUnitNorm,
            noise: noise.clone(),
            algorithms: vec![AlgorithmSpec::Gmee { eta, alpha: 2.0, beta: 1.0, window: 10 }],
            iterations: 100_000,
            runs: 10,
            base_seed: 42,
        };
        let trace = run_sysid_with_tail(&exp, 0.1).unwrap().remove(0);
        inputs.eta = eta;
        let theory_db = 10.0 * emse_theory(&inputs, &pq).unwrap().log10();
        println!(
            "{eta:>8} {:>12.2} {theory_db:>12.2} {:>8.2}",
            trace.emse_db,
            (trace.emse_db - theory_db).abs()
        );
    }
    println!("\n10 runs x 100000 iterations per point; EMSE over the final 10%");
}
