//! Sample growth trees under each attachment model and look at the degree of
//! the first vertex.
//!
//!     cargo run --example generate_trees -- 1000

use rootfinder::{ModelSpec, RngStream};

fn main() {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1000);
    let models = [
        ModelSpec::UniformAttachment,
        ModelSpec::PreferentialAttachment,
        ModelSpec::AlphaAttachment(0.5),
        ModelSpec::AlphaAttachment(2.0),
    ];
    for model in models {
        let mut rng = RngStream::new(42, 0);
        let tree = model.sample(n, &mut rng).expect("valid model");
        let degrees = tree.degrees();
        let max = (1..=n).max_by_key(|&v| degrees[v]).unwrap();
        println!(
            "{model:>10}  d(1) = {:>4}  max degree {:>4} at vertex {max}",
            degrees[1], degrees[max]
        );
    }

    // The text format: n on the first line, then `child parent` pairs.
    let small = ModelSpec::UniformAttachment.sample(6, &mut RngStream::new(7, 0)).unwrap();
    let mut buf = Vec::new();
    small.write_to(&mut buf).unwrap();
    print!("\n{}", String::from_utf8(buf).unwrap());
}
