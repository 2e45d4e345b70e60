//! Hide the labels of a grown tree and ask each estimator for a small set of
//! candidate first vertices.
//!
//!     cargo run --example score_shape

use rootfinder::tree::forget_labels;
use rootfinder::{select_smallest, Estimator, ModelSpec, RngStream};

fn main() {
    let n = 500;
    let k = 5;
    for model in [ModelSpec::UniformAttachment, ModelSpec::PreferentialAttachment] {
        let mut rng = RngStream::new(2024, 0);
        let tree = model.sample(n, &mut rng).unwrap();
        let (shape, root) = forget_labels(&tree, &mut rng);
        println!("{model}: hidden first vertex is {root}");
        for estimator in Estimator::ALL {
            let scores = estimator.scores(&shape);
            let set = select_smallest(&shape, &scores, k);
            let hit = if set.contains(root) { "hit" } else { "miss" };
            println!("  {estimator:>4}  top {k}: {:?}  {hit}", set.vertices);
        }
    }
}
