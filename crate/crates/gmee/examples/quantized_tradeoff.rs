//! The quantization tradeoff: per-iteration cost against steady-state
//! accuracy as the threshold γ grows.
//!
//! Cost is reported two ways: the closed-form operation counts for the
//! observed codebook size, and multiplication counters measured inside the
//! running filters.
//!
//! ```bash
//! cargo run --release --example quantized_tradeoff
//! ```

use gmee::analysis::complexity_counts;
use gmee::filters::{AdaptiveFilter, AlgorithmSpec, Gmee, GmeeConfig, Qgmee};
use gmee::kernel::GgdKernel;
use gmee::noise::{next_input, NoiseModel};
use gmee::simkit::{sweep, SweepParameter, SysIdExperiment, TrueWeights};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let exp = SysIdExperiment {
        filter_len: 10,
        true_weights: TrueWeights::SeededUnitNorm,
        noise: NoiseModel::mixed_gaussian(0.05, 0.01, 100.0).unwrap(),
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
    let gammas = [0.0, 0.05, 0.2, 0.5, 2.0];
    let table = sweep(&exp, SweepParameter::Gamma, &gammas, None).unwrap();
    println!("=== steady MSD vs quantization threshold (alpha=2, beta=1, L=10) ===");
    println!("{:>7} {:>14}", "gamma", "steady (dB)");
    for row in &table.rows {
        println!("{:>7} {:>14.2}", row.param_value, row.steady_msd_db);
    }

    // measure the per-iteration multiplication cost at each threshold
    println!("\n=== measured per-iteration cost (1000-step average) ===");
    println!("{:>7} {:>6} {:>12} {:>12} {:>14}", "gamma", "avg H", "mults/iter", "exps/iter", "table mults");
    let m = 10;
    let l = 10;
    let kernel = GgdKernel::new(2.0, 1.0).unwrap();
    let noise = NoiseModel::mixed_gaussian(0.05, 0.01, 100.0).unwrap();
    for &gamma in &gammas {
        let cfg = GmeeConfig::new(kernel.clone(), 0.3, l).unwrap().with_gamma(gamma).unwrap();
        let mut filter = Qgmee::new(m, cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut u = vec![0.0; m];
        let mut h_sum = 0usize;
        let steps = 1000;
        for _ in 0..steps {
            next_input(&mut rng, &mut u);
            let d = noise.sample(&mut rng);
            filter.step(&u, d).unwrap();
            h_sum += filter.last_codebook_len();
        }
        let counts = filter.op_counters().unwrap();
        let avg_h = h_sum as f64 / steps as f64;
        let table_mults = complexity_counts("qgmee", m, l, avg_h.round() as usize).unwrap().mults;
        println!(
            "{gamma:>7} {avg_h:>6.1} {:>12.0} {:>12.0} {:>14}",
            counts.mults as f64 / steps as f64,
            counts.exps as f64 / steps as f64,
            table_mults
        );
    }

    // the unquantized filter for reference
    let cfg = GmeeConfig::new(kernel, 0.3, l).unwrap();
    let mut filter = Gmee::new(m, cfg).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut u = vec![0.0; m];
    for _ in 0..1000 {
        next_input(&mut rng, &mut u);
        let d = noise.sample(&mut rng);
        filter.step(&u, d).unwrap();
    }
    let counts = filter.op_counters().unwrap();
    println!(
        "{:>7} {:>6} {:>12.0} {:>12.0} {:>14}",
        "plain",
        l,
        counts.mults as f64 / 1000.0,
        counts.exps as f64 / 1000.0,
        complexity_counts("gmee", m, l, l).unwrap().mults
    );
}
