//! E[X_n]/n across q = 1: exact values at small n, certified bounds at
//! n = 1024 and 4096.
//!
//! cargo run --release --example phase_transition

use hopfchain::markov::{phase_scan, phase_scan_enclosed};
use hopfchain::qcalc::rat;
use num_traits::ToPrimitive;

fn main() {
    let qs = [rat(1, 2), rat(9, 10), rat(1, 1), rat(11, 10), rat(2, 1)];
    println!("exact:");
    for row in phase_scan(&qs, &[16, 32, 64]).unwrap() {
        println!(
            "  q = {:>5}  n = {:>3}  {:.6}",
            row.q.to_string(),
            row.n,
            row.ratio.to_f64().unwrap()
        );
    }
    println!("certified:");
    for row in phase_scan_enclosed(&[rat(1, 2), rat(2, 1)], &[1024, 4096]).unwrap() {
        println!(
            "  q = {:>5}  n = {:>4}  [{:.8}, {:.8}]",
            row.q.to_string(),
            row.n,
            row.lower.to_f64().unwrap(),
            row.upper.to_f64().unwrap()
        );
    }
}
