//! Monte Carlo and exact checks of the partition, gamma-tail and
//! exponential-product bounds.
//!
//!     cargo run --release --example lemma_checks

use rootfinder::oracle::{run_suite, Suite, SuiteOptions};

fn main() {
    let opts = SuiteOptions {
        n_max: None,
        seed: 9,
        trials: 50_000,
    };
    for suite in [Suite::Partitions, Suite::Gamma, Suite::ProductTail] {
        println!("[{}]", suite.name());
        for check in run_suite(suite, opts).unwrap() {
            println!("  {check}");
        }
    }
}
