//! Step-size stability: predicted bound vs simulated failure onset.
//!
//! The predictor estimates the restoring curvature of the update from
//! noise draws alone. The empirical onset is found by bisection: a step
//! size fails when any run diverges or the steady MSD no longer improves
//! on doing nothing.
//!
//! ```bash
//! cargo run --release --example stability_bound
//! ```

use gmee::analysis::{estimate_steady_pq, gmee_step_bound, StepBound, TheoryInputs};
use gmee::filters::AlgorithmSpec;
use gmee::kernel::GgdKernel;
use gmee::noise::NoiseModel;
use gmee::simkit::{run_sysid, SysIdExperiment, TrueWeights};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let noise = NoiseModel::mixed_gaussian(0.05, 0.01, 100.0).unwrap();
    let inputs = TheoryInputs {
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
    let eps = vec![noise.std_dev(); inputs.window_len];
    let bound = match gmee_step_bound(&inputs, &eps, &pq).unwrap() {
        StepBound::Bounded(b) => b,
        StepBound::Unbounded => {
            println!("degenerate noise: no finite bound");
            return;
        }
    };
    println!("predicted stable step-size bound: {bound:.4}");

    let fails = |eta: f64| {
        let exp = SysIdExperiment {
            filter_len: 10,
            true_weights: TrueWeights::SeededUnitNorm,
            noise: noise.clone(),
            algorithms: vec![AlgorithmSpec::Gmee { eta, alpha: 2.0, beta: 1.0, window: 10 }],
            iterations: 20_000,
            runs: 5,
            base_seed: 123,
        };
        let t = run_sysid(&exp).unwrap().remove(0);
        t.divergence_count > 0 || t.steady_msd_db >= 0.0
    };

    println!("\nprobing around the bound (5 runs each):");
    for factor in [0.25, 0.5, 1.0, 2.0, 4.0, 8.0] {
        let eta = bound * factor;
        println!("  eta = {eta:8.3} ({factor:>4}x bound): {}", if fails(eta) { "FAILS" } else { "stable" });
    }

    let mut lo = bound / 8.0;
    let mut hi = lo;
    while !fails(hi) && hi < 4000.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..10 {
        let mid = (lo * hi).sqrt();
        if fails(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let onset = (lo * hi).sqrt();
    println!("\nbisected onset: {onset:.4}  (onset/bound = {:.2})", onset / bound);
}
