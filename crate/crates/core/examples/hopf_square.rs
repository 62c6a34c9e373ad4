//! Coproduct, antipode and Hopf square of a few monomials.
//!
//! cargo run --example hopf_square

use hopfchain::hopf::{antipode, coproduct, hopf_square, Monomial};

fn main() {
    for text in ["E", "K^3", "E^2 K^1", "E^3"] {
        let m: Monomial = text.parse().expect("valid monomial");
        println!("x          = {m}");
        println!("coproduct  = {}", coproduct(m));
        println!("antipode   = {}", antipode(m));
        println!("square     = {}", hopf_square(m));
        println!();
    }
}
