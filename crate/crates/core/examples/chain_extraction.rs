//! From the Hopf square to transition matrices.
//!
//! cargo run --example chain_extraction

use hopfchain::chain_extract::{build_chain_spec, doubling_map, phi_coefficients};
use hopfchain::qcalc::rat;

fn main() {
    // Grading 2, state l: double to 2l, then jump by 0, 1 or 2.
    let l = 3;
    let law = phi_coefficients(2, doubling_map(l)).unwrap();
    println!(
        "E^2 K^{l} -> states {}..={}",
        doubling_map(l),
        doubling_map(l) + 2
    );
    for (jump, coeff) in &law.entries {
        println!("  jump {jump}: {coeff}");
    }

    for (grading, q) in [(1, rat(2, 1)), (2, rat(1, 2)), (3, rat(1, 1))] {
        let spec = build_chain_spec(grading, &q, 4).unwrap();
        println!("\ngrading {grading}, q = {q}");
        for row in &spec.rows {
            let cells: Vec<String> = row
                .moves
                .iter()
                .map(|m| format!("{:>10}", m.p.to_string()))
                .collect();
            println!("  {}: {}", row.state, cells.join(""));
        }
    }
}
