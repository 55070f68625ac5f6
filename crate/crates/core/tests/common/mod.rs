#![allow(dead_code)]

pub mod oracle;

use buchsbaum_core::poly::parse_poly;
use buchsbaum_core::{Poly, Ring};

pub fn polys(ring: Ring, src: &[&str]) -> Vec<Poly> {
    let names = ring.var_names();
    src.iter().map(|s| parse_poly(ring, &names, s).unwrap()).collect()
}

pub fn skew_lines() -> (Ring, Vec<Poly>) {
    let r = Ring::standard(4);
    (r, polys(r, &["x0*x2", "x0*x3", "x1*x2", "x1*x3"]))
}

pub fn twisted_cubic() -> (Ring, Vec<Poly>) {
    let r = Ring::standard(4);
    (r, polys(r, &["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"]))
}

pub fn ci_2_3() -> (Ring, Vec<Poly>) {
    let r = Ring::standard(4);
    (r, polys(r, &["x0*x1 - x2*x3", "x0^3 + x1^3 + x2^3 + x3^3"]))
}

/// Smooth rational quartic curve in P^3 (not arithmetically Cohen-Macaulay).
pub fn rational_quartic() -> (Ring, Vec<Poly>) {
    let r = Ring::standard(4);
    (r, polys(r, &["x0*x3 - x1*x2", "x1^3 - x0^2*x2", "x2^3 - x1*x3^2", "x0*x2^2 - x1^2*x3"]))
}
