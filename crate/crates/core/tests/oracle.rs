//! Library results against brute-force linear algebra on graded pieces.

mod common;

use buchsbaum_core::homological::BettiTable;
use buchsbaum_core::module::FPModule;
use buchsbaum_core::monomial::monomials_of_degree;
use buchsbaum_core::{Poly, Ring};
use common::oracle::Oracle;
use common::*;
use proptest::prelude::*;

fn betti_of_quotient(ring: Ring, gens: &[Poly]) -> BettiTable {
    FPModule::quotient_ring(ring, gens).unwrap().resolution().betti()
}

fn oracle_for(ring: Ring) -> Oracle {
    Oracle::new(ring.nvars, ring.p)
}

// Values computed once with the dense oracle and frozen here.
const SKEW_HF: [i64; 8] = [1, 4, 6, 8, 10, 12, 14, 16];
const SKEW_BETTI: [(usize, i32, usize); 4] = [(0, 0, 1), (1, 2, 4), (2, 3, 4), (3, 4, 1)];
const CUBIC_BETTI: [(usize, i32, usize); 3] = [(0, 0, 1), (1, 2, 3), (2, 3, 2)];
const CI_HF: [i64; 8] = [1, 4, 9, 15, 21, 27, 33, 39];
const CI_BETTI: [(usize, i32, usize); 4] = [(0, 0, 1), (1, 2, 1), (1, 3, 1), (2, 5, 1)];
const QUARTIC_HF: [i64; 8] = [1, 4, 9, 13, 17, 21, 25, 29];
const QUARTIC_BETTI: [(usize, i32, usize); 5] = [(0, 0, 1), (1, 2, 1), (1, 3, 3), (2, 4, 4), (3, 5, 1)];

#[test]
fn frozen_values_still_match_the_oracle() {
    let (r, g) = skew_lines();
    let o = oracle_for(r);
    for (d, &v) in SKEW_HF.iter().enumerate() {
        assert_eq!(o.quotient_dim(&g, d as i32) as i64, v);
    }
    assert_eq!(BettiTable(o.betti_quotient(&g, 6)), BettiTable::from_entries(&SKEW_BETTI));
    let (r, g) = rational_quartic();
    let o = oracle_for(r);
    assert_eq!(BettiTable(o.betti_quotient(&g, 7)), BettiTable::from_entries(&QUARTIC_BETTI));
}

#[test]
fn hilbert_functions_of_curves() {
    for ((r, g), hf) in [(skew_lines(), SKEW_HF), (ci_2_3(), CI_HF), (rational_quartic(), QUARTIC_HF)] {
        let m = FPModule::quotient_ring(r, &g).unwrap();
        for (d, &v) in hf.iter().enumerate() {
            assert_eq!(m.graded_dim(d as i32), v, "degree {d}");
        }
    }
}

#[test]
fn betti_tables_of_curves() {
    let (r, g) = skew_lines();
    assert_eq!(betti_of_quotient(r, &g), BettiTable::from_entries(&SKEW_BETTI));
    let (r, g) = twisted_cubic();
    assert_eq!(betti_of_quotient(r, &g), BettiTable::from_entries(&CUBIC_BETTI));
    let (r, g) = ci_2_3();
    assert_eq!(betti_of_quotient(r, &g), BettiTable::from_entries(&CI_BETTI));
    let (r, g) = rational_quartic();
    assert_eq!(betti_of_quotient(r, &g), BettiTable::from_entries(&QUARTIC_BETTI));
}

#[test]
fn saturation_excess_matches_local_cohomology() {
    // H^0_m(R/I) = (I : m^inf) / I.
    let r = Ring::standard(4);
    let g = polys(r, &["x0^2", "x0*x1", "x0*x2", "x0*x3"]);
    let o = oracle_for(r);
    let m = FPModule::quotient_ring(r, &g).unwrap();
    let lc = buchsbaum_core::homological::local_cohomology(&m).unwrap();
    for t in 0..5 {
        assert_eq!(lc.dim(0, t), o.colon_power_excess(&g, t, 4) as i64, "t = {t}");
    }
    assert_eq!(lc.dim(0, 1), 1);

    let (r, skew) = skew_lines();
    let vars: Vec<Poly> = (0..4).map(|i| Poly::var(r, i)).collect();
    let g: Vec<Poly> = skew.iter().flat_map(|p| vars.iter().map(move |v| p.mul(v).unwrap())).collect();
    let m = FPModule::quotient_ring(r, &g).unwrap();
    let lc = buchsbaum_core::homological::local_cohomology(&m).unwrap();
    for t in 0..6 {
        assert_eq!(lc.dim(0, t), o.colon_power_excess(&g, t, 4) as i64, "t = {t}");
    }
    assert_eq!(lc.dim(0, 2), 4);
}

/// Exactness of the resolution and Ext dimensions, degree by degree.
fn check_resolution_and_ext(m: &FPModule, degrees: std::ops::RangeInclusive<i32>) {
    let ring = m.ring();
    let o = oracle_for(ring);
    let res = m.resolution();
    for d in degrees.clone() {
        // coker of the first map has the right dimension
        let f0 = o.free_dim(&res.free[0].degrees, d) as i64;
        let r0 = if res.maps.is_empty() { 0 } else { o.map_rank(&res.maps[0], d) as i64 };
        assert_eq!(m.graded_dim(d), f0 - r0, "dim M_{d}");
        for i in 1..res.free.len() {
            let fi = o.free_dim(&res.free[i].degrees, d);
            let out = o.map_rank(&res.maps[i - 1], d);
            let inc = if i < res.maps.len() { o.map_rank(&res.maps[i], d) } else { 0 };
            assert_eq!(out + inc, fi, "homology of F_{i} in degree {d}");
        }
    }
    let ext = m.ext();
    for (i, e) in ext.iter().enumerate() {
        for d in degrees.clone() {
            let t = -d;
            let expect = if i >= res.free.len() {
                0
            } else {
                let dual = res.free[i].dual();
                let fi = o.free_dim(&dual.degrees, t);
                let out = if i < res.maps.len() { o.map_rank(&res.maps[i].transpose(), t) } else { 0 };
                let inc = if i > 0 { o.map_rank(&res.maps[i - 1].transpose(), t) } else { 0 };
                fi - out - inc
            };
            assert_eq!(e.graded_dim(t), expect as i64, "Ext^{i} in degree {t}");
        }
    }
}

#[test]
fn dense_checks_on_curves() {
    for (r, g) in [skew_lines(), twisted_cubic(), rational_quartic()] {
        let m = FPModule::quotient_ring(r, &g).unwrap();
        check_resolution_and_ext(&m, 0..=8);
        let i = FPModule::ideal(r, &g).unwrap();
        check_resolution_and_ext(&i, 0..=8);
    }
}

fn random_ideal(nvars: usize) -> impl Strategy<Value = Vec<Vec<(u32, usize, u32)>>> {
    // Each generator: degree, then (monomial index, coefficient) pairs sharing that degree.
    let gen = (1u32..=3).prop_flat_map(move |deg| {
        let count = monomials_of_degree(nvars, deg).len();
        prop::collection::vec((Just(deg), 0..count, 1u32..32003), 1..4)
    });
    prop::collection::vec(gen, 1..4)
}

fn build(ring: Ring, raw: &[Vec<(u32, usize, u32)>]) -> Vec<Poly> {
    raw.iter()
        .map(|terms| {
            let t = terms
                .iter()
                .map(|&(d, k, c)| (monomials_of_degree(ring.nvars, d)[k], c))
                .collect();
            Poly::from_terms(ring, t)
        })
        .filter(|p| !p.is_zero())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hilbert_function_matches_dense(raw in random_ideal(4)) {
        let r = Ring::standard(4);
        let g = build(r, &raw);
        prop_assume!(!g.is_empty());
        let m = FPModule::quotient_ring(r, &g).unwrap();
        let o = oracle_for(r);
        for d in 0..7 {
            prop_assert_eq!(m.graded_dim(d), o.quotient_dim(&g, d) as i64);
        }
    }

    #[test]
    fn betti_numbers_match_koszul_homology(raw in random_ideal(3)) {
        let r = Ring::standard(3);
        let g = build(r, &raw);
        prop_assume!(!g.is_empty());
        let o = oracle_for(r);
        let b = betti_of_quotient(r, &g);
        let max = b.0.keys().map(|k| k.1).max().unwrap_or(0);
        prop_assert_eq!(b, BettiTable(o.betti_quotient(&g, max + 2)));
    }

    #[test]
    fn resolution_is_exact_and_ext_is_its_dual_homology(raw in random_ideal(3)) {
        let r = Ring::standard(3);
        let g = build(r, &raw);
        prop_assume!(!g.is_empty());
        let m = FPModule::quotient_ring(r, &g).unwrap();
        check_resolution_and_ext(&m, 0..=7);
    }
}
