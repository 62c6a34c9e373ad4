//! Checks every Hopf algebra axiom on a grid of monomials.
//!
//! cargo run --release --example axioms -- 4 3

use hopfchain::hopf::verify_axioms;

fn main() {
    let mut args = std::env::args().skip(1);
    let max_i = args.next().and_then(|a| a.parse().ok()).unwrap_or(3);
    let max_l = args.next().and_then(|a| a.parse().ok()).unwrap_or(2);
    let report = verify_axioms(max_i, max_l);
    print!("{report}");
    if !report.all_passed() {
        std::process::exit(1);
    }
}
