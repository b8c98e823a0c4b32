//! Generalized Gaussian kernels and information-potential estimators.
//!
//! Prints the kernel family at a few shape exponents, evaluates the plain,
//! generalized, and quantized information potentials of one error sample,
//! and shows the Renyi entropy they induce.
//!
//! ```bash
//! cargo run --release --example kernel_shapes
//! ```

use gmee::entropy::{generalized_ip, quadratic_ip, renyi_entropy};
use gmee::kernel::GgdKernel;
use gmee::quantizer::{quantize, quantized_ip};

fn main() {
    println!("=== GGD kernel family (beta = 1) ===");
    println!("{:>6} {:>10} {:>10} {:>10} {:>10}", "alpha", "G(0)", "G(0.5)", "G(1)", "G(2)");
    for alpha in [1.0, 2.0, 4.0, 8.0] {
        let k = GgdKernel::new(alpha, 1.0).unwrap();
        println!(
            "{alpha:>6} {:>10.5} {:>10.5} {:>10.5} {:>10.5}",
            k.eval(0.0),
            k.eval(0.5),
            k.eval(1.0),
            k.eval(2.0)
        );
    }

    let errors = [0.3, -0.1, 0.25, 1.8, -0.4, 0.05, 0.33, -2.1];
    println!("\n=== information potentials of {errors:?} ===");
    let sigma = 1.0 / 2.0_f64.sqrt();
    println!("quadratic IP (Gaussian kernel, sigma = {sigma:.4}): {:.6}", quadratic_ip(&errors, sigma).unwrap());
    for alpha in [1.0, 2.0, 4.0] {
        let k = GgdKernel::new(alpha, 1.0).unwrap();
        let v = generalized_ip(&errors, &k).unwrap();
        let h = renyi_entropy(v, 2.0).unwrap();
        println!("generalized IP (alpha = {alpha}): {v:.6}   quadratic Renyi entropy: {h:.6}");
    }

    println!("\n=== quantized IP vs threshold ===");
    let k = GgdKernel::new(2.0, 1.0).unwrap();
    let exact = generalized_ip(&errors, &k).unwrap();
    println!("{:>7} {:>4} {:>12} {:>12}", "gamma", "H", "IP", "|error|");
    for gamma in [0.0, 0.1, 0.3, 1.0, 5.0] {
        let book = quantize(&errors, gamma).unwrap();
        let v = quantized_ip(&errors, &book, &k).unwrap();
        println!("{gamma:>7} {:>4} {v:>12.6} {:>12.2e}", book.len(), (v - exact).abs());
    }
    println!("(gamma = 0 keeps every error as its own code word and is exact)");
}
