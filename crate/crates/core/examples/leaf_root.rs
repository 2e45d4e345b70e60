//! How often the first vertex ends up a leaf: about 1/(n-1) under uniform
//! attachment and of order 1/√n under preferential attachment.
//!
//!     cargo run --release --example leaf_root

use rootfinder::experiments::root_leaf_frequency;
use rootfinder::ModelSpec;

fn main() {
    for model in [ModelSpec::UniformAttachment, ModelSpec::PreferentialAttachment] {
        for n in [25, 100, 400] {
            let r = root_leaf_frequency(model, n, 20_000, 5, 1).unwrap();
            println!("{model} n={n:>4}: {:.5} ± {:.5}", r.rate, r.half_width());
        }
    }
}
