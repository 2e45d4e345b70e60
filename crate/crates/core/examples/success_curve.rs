//! Success probability of the ψ and φ confidence sets as K grows, with 95%
//! Wilson intervals. Every K is scored on the same trees.
//!
//!     cargo run --release --example success_curve

use rootfinder::experiments::{run_trials_for_ks, ExperimentConfig};
use rootfinder::{Estimator, ModelSpec};

fn main() {
    let ks = [1, 2, 5, 10, 20, 50];
    let jobs = std::thread::available_parallelism().map_or(1, |p| p.get());
    for model in [ModelSpec::UniformAttachment, ModelSpec::PreferentialAttachment] {
        for estimator in [Estimator::Psi, Estimator::Phi] {
            let config = ExperimentConfig::new(model, estimator, 2000, 1, 400, 11);
            let results = run_trials_for_ks(&config, &ks, jobs).unwrap();
            println!("{model} {estimator}");
            for (k, r) in ks.iter().zip(&results) {
                println!("  K={k:>3}  {:.3}  [{:.3}, {:.3}]", r.rate, r.lo95, r.hi95);
            }
        }
    }
}
