//! Canonical codes, automorphism factors and orbit sizes of rooted views.
//!
//!     cargo run --example isomorphism

use rootfinder::isomorphism::AllRootClasses;
use rootfinder::tree::ShapeTree;
use rootfinder::{aut_log, canonical_code, orbit_count};

fn main() {
    // two cherries joined through vertex 1
    let shape = ShapeTree::from_edges(&[(1, 2), (1, 3), (2, 4), (2, 5), (3, 6), (3, 7)]).unwrap();
    let classes = AllRootClasses::compute(&shape);
    for u in shape.vertices() {
        let aut: f64 = aut_log(&shape, u).iter().sum();
        println!(
            "root {u}: code {}  orbit {}  Aut {:.0}  rank {}",
            canonical_code(&shape, u),
            orbit_count(&shape, u),
            aut.exp(),
            classes.code_rank(u)
        );
    }
    println!("{} distinct rooted views", classes.orbit_representatives());
}
