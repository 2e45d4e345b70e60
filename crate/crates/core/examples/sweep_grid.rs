//! Run a small grid of experiments and print it as CSV.
//!
//!     cargo run --release --example sweep_grid

use rootfinder::experiments::{sweep, write_csv, SweepGrid};

const GRID: &str = "
model = ua, pa, alpha:2
estimator = psi, phi
n = 200, 1000
k = 1, 5
trials = 200
seed = 3
";

fn main() {
    let grid = SweepGrid::parse(GRID).unwrap();
    let rows = sweep(&grid, 1).unwrap();
    write_csv(&rows, std::io::stdout().lock()).unwrap();
}
