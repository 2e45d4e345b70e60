//! Posterior over the first vertex given only the shape, in floating point
//! and as exact fractions from brute-force enumeration.
//!
//!     cargo run --example root_posterior

use rootfinder::oracle::exact_posterior;
use rootfinder::tree::ShapeTree;
use rootfinder::{root_posterior, ModelSpec};

fn main() {
    // a spider: center 1 with legs of length 1, 2 and 3
    let shape = ShapeTree::from_edges(&[(1, 2), (1, 3), (3, 4), (1, 5), (5, 6), (6, 7)]).unwrap();
    for model in [ModelSpec::UniformAttachment, ModelSpec::PreferentialAttachment] {
        let float = root_posterior(&shape, model).unwrap();
        let exact = exact_posterior(&shape, model).unwrap();
        println!("{model}");
        for v in shape.vertices() {
            println!("  vertex {v}: {:.6}  = {}", float[v], exact[v]);
        }
    }
}
