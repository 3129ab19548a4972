//! Shared fixtures for the benchmarks.

use solvrad_core::groups::{parse_generators, Permutation};
use solvrad_core::polynomial::{parse_polynomial, IntPolynomial};

pub const QUINTIC: &str = "x^5+20x+32";
pub const D5: &str = "(1,2,3,4,5);(1,4)(2,3)";

pub fn fixture(poly: &str, gens: &str) -> (IntPolynomial, Vec<Permutation>) {
    let p = parse_polynomial(poly).expect("fixture polynomial");
    let g = parse_generators(gens, Some(p.degree())).expect("fixture generators");
    (p, g)
}
