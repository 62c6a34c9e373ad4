//! Logarithmic growth for q > 1 and a bounded deficit for q < 1.
//!
//! cargo run --release --example bounds

use hopfchain::montecarlo::{bound_experiment, LogBound};
use hopfchain::qcalc::rat;

fn main() {
    let grid = [1_000, 10_000, 100_000];
    for q in [rat(2, 1), rat(1, 2)] {
        let report = bound_experiment(&q, &grid, 1000, 7, LogBound::default(), None).unwrap();
        println!("{}", report.summary());
        print!("{}", report.to_csv());
    }
}
