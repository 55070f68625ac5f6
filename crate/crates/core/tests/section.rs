//! Hyperplane sections and rank one embeddings.

mod common;

use buchsbaum_core::module::FPModule;
use buchsbaum_core::qpres::is_saturated;
use buchsbaum_core::section::*;
use buchsbaum_core::{Poly, Ring};
use common::*;

fn ideal_betti(ring: Ring, gens: &[Poly]) -> Vec<(usize, i32, usize)> {
    FPModule::ideal(ring, gens).unwrap().resolution().betti().entries()
}

#[test]
fn section_of_skew_lines_is_two_collinear_points() {
    let (r, g) = skew_lines();
    for seed in [1, 2, 3] {
        let (h, gens) = hyperplane_section_ideal(r, &g, seed).unwrap();
        assert_eq!(h.target.nvars, 3);
        assert_eq!(ideal_betti(h.target, &gens), vec![(0, 1, 1), (0, 2, 1), (1, 3, 1)]);
        let a = FPModule::quotient_ring(h.target, &gens).unwrap();
        assert_eq!((0..5).map(|t| a.graded_dim(t)).collect::<Vec<_>>(), vec![1, 2, 2, 2, 2]);
    }
}

#[test]
fn section_of_a_complete_intersection() {
    let (r, g) = ci_2_3();
    let (h, gens) = hyperplane_section_ideal(r, &g, 7).unwrap();
    assert_eq!(ideal_betti(h.target, &gens), vec![(0, 2, 1), (0, 3, 1), (1, 5, 1)]);
}

#[test]
fn section_is_seed_deterministic() {
    let (r, g) = rational_quartic();
    let (a, ga) = hyperplane_section_ideal(r, &g, 11).unwrap();
    let (b, gb) = hyperplane_section_ideal(r, &g, 11).unwrap();
    assert_eq!(a.coefficients, b.coefficients);
    assert_eq!(ga, gb);
    // Four points in P^2 on no line: h-vector (1, 2, 1).
    let s = FPModule::quotient_ring(a.target, &ga).unwrap();
    assert_eq!((0..4).map(|t| s.graded_dim(t)).collect::<Vec<_>>(), vec![1, 3, 4, 4]);
}

#[test]
fn module_section_of_the_ring_is_the_ring() {
    let r = Ring::standard(4);
    let s = hyperplane_section(&FPModule::free(r, vec![0]), 3).unwrap();
    assert!(s.module.is_free());
    assert_eq!(s.module.generators().degrees, vec![0]);
    assert_eq!(s.module.ring().nvars, 3);
}

#[test]
fn module_section_of_an_ideal_matches_the_ideal_section() {
    let (r, g) = skew_lines();
    let i = FPModule::ideal(r, &g).unwrap();
    let s = hyperplane_section(&i, 5).unwrap();
    assert_eq!(s.method, SectionMethod::Embedded);
    let (h, gens) = hyperplane_section_ideal(r, &g, 5).unwrap();
    let direct = FPModule::ideal(h.target, &gens).unwrap();
    for t in -2..8 {
        assert_eq!(s.module.graded_dim(t), direct.graded_dim(t), "t = {t}");
    }
}

#[test]
fn module_section_of_a_quotient_removes_torsion() {
    // R/I for two skew lines: section is the coordinate ring of the saturated section.
    let (r, g) = skew_lines();
    let a = FPModule::quotient_ring(r, &g).unwrap();
    let s = hyperplane_section(&a, 5).unwrap();
    assert_eq!(s.method, SectionMethod::TorsionRemoved);
    assert_eq!((0..5).map(|t| s.module.graded_dim(t)).collect::<Vec<_>>(), vec![1, 2, 2, 2, 2]);
}

#[test]
fn depth_zero_modules_are_rejected() {
    let r = Ring::standard(3);
    let k = FPModule::quotient_ring(r, &polys(r, &["x0", "x1", "x2"])).unwrap();
    assert!(hyperplane_section(&k, 1).is_err());
    let (r, _) = skew_lines();
    let unsat = polys(r, &["x0^2", "x0*x1", "x0*x2", "x0*x3"]);
    assert!(hyperplane_section_ideal(r, &unsat, 1).is_err());
}

#[test]
fn rank_one_embedding_of_a_twisted_ideal() {
    let (r, g) = skew_lines();
    let c = FPModule::ideal(r, &g).unwrap().twist(3);
    let e = rank_one_embed(&c).unwrap();
    assert_eq!(e.twist, 3);
    assert!(e.saturated);
    let i = FPModule::ideal(r, &g).unwrap();
    assert_eq!(e.ideal.hilbert_series(), i.hilbert_series());
    assert_eq!(e.ideal.hilbert_series(), &c.hilbert_series().shift(3));
}

#[test]
fn rank_one_embedding_of_a_line_bundle() {
    let r = Ring::standard(4);
    let e = rank_one_embed(&FPModule::free(r, vec![1])).unwrap();
    assert_eq!(e.twist, -1);
    assert_eq!(e.gens.len(), 1);
    assert_eq!(e.gens[0].as_constant(), Some(1));
}

#[test]
fn rank_one_embedding_rejects_bad_modules() {
    let r = Ring::standard(4);
    let two = FPModule::free(r, vec![0, 0]);
    assert!(rank_one_embed(&two).unwrap_err().to_string().contains("rank 2"));
    let k = FPModule::quotient_ring(r, &polys(r, &["x0", "x1", "x2", "x3"])).unwrap();
    let torsion = FPModule::free(r, vec![0]).direct_sum(&k);
    assert!(rank_one_embed(&torsion).unwrap_err().to_string().contains("torsion"));
}

#[test]
fn embedded_ideal_of_a_cokernel_is_saturated() {
    // coker(R(-2)^2 -> G_2) on P^3 is a twisted ideal of two skew lines, up to coordinates.
    let r = Ring::standard(4);
    let g2 = buchsbaum_core::omega::g_module(r, 2).unwrap().module;
    let l2 = FPModule::free(r, vec![2, 2]);
    let space = buchsbaum_core::hom::hom_degree0(&l2, &g2).unwrap();
    let phi = space.random_element(4);
    let e = rank_one_embed(&phi.cokernel()).unwrap();
    assert_eq!(e.twist, 0);
    assert!(e.saturated);
    assert!(is_saturated(r, &e.gens));
    assert_eq!(ideal_betti(r, &e.gens), vec![(0, 2, 4), (1, 3, 4), (2, 4, 1)]);
}
