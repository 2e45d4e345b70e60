//! Enumerate every recursive and plane-oriented recursive tree of a small
//! size and check that the per-shape counting formulas add up.
//!
//!     cargo run --example counting_identities -- 6

use num_traits::ToPrimitive;
use rootfinder::oracle::{self, ClassCensus};

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(6);

    let census = ClassCensus::recursive(n).unwrap();
    let mut sum = 0u64;
    for (count, tree) in census.classes() {
        let shape = tree.to_shape();
        let formula = oracle::embedding_count(&shape, 1).unwrap().to_u64().unwrap();
        assert_eq!(formula, count);
        sum += formula;
    }
    println!(
        "recursive n={n}: {} rooted shapes, {sum} trees, (n-1)! = {}",
        census.class_count(),
        oracle::factorial(n - 1)
    );

    let census = ClassCensus::plane(n).unwrap();
    let mut sum = 0u64;
    for (count, tree) in census.classes() {
        let shape = tree.to_shape();
        let formula = oracle::embedding_count_plane(&shape, 1).unwrap().to_u64().unwrap();
        assert_eq!(formula, count);
        sum += formula;
    }
    println!(
        "plane n={n}: {} rooted shapes, {sum} trees, (2n-3)!! = {}",
        census.class_count(),
        oracle::double_factorial(2 * n - 3)
    );
}
