//! Groebner bases of graded submodules and the derived operations: normal forms,
//! syzygies, lifting, minimal generators and Hilbert series.

mod buchberger;
pub mod hilbert;
pub mod order;

use std::collections::HashMap;

use crate::field::PrimeField;
use crate::free::{FreeModule, GradedMap, Term, Vector};
use crate::monomial::{monomials_of_degree, Monomial};
use crate::poly::Ring;

use buchberger::{to_vector, Engine};
pub use hilbert::HilbertSeries;
pub use order::ModuleOrder;

/// Groebner basis of a submodule `U ⊆ F`.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: Ring,
    free: FreeModule,
    engine: Engine,
}

impl GroebnerBasis {
    /// Groebner basis in the standard order of `free`.
    pub fn new(ring: Ring, free: &FreeModule, gens: &[Vector]) -> Self {
        Self::with_order(ring, free, ModuleOrder::standard(free), gens)
    }

    pub fn with_order(ring: Ring, free: &FreeModule, order: ModuleOrder, gens: &[Vector]) -> Self {
        let mut engine = Engine::new(order, ring.field());
        for g in gens {
            engine.push(g);
        }
        engine.run(None);
        GroebnerBasis { ring, free: free.clone(), engine }
    }

    /// Groebner basis of the column span of `map`.
    pub fn of_image(map: &GradedMap) -> Self {
        Self::new(map.ring, &map.target, &map.cols)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn free(&self) -> &FreeModule {
        &self.free
    }

    pub fn len(&self) -> usize {
        self.engine.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.engine.elems.is_empty()
    }

    pub fn elements(&self) -> Vec<Vector> {
        let f = self.ring.field();
        self.engine.elems.iter().map(|e| to_vector(f, e.terms.clone())).collect()
    }

    pub fn reduce(&self, v: &Vector) -> Vector {
        if v.is_zero() {
            return Vector::zero();
        }
        let mut terms = v.terms().to_vec();
        self.engine.order.sort_desc(&mut terms);
        to_vector(self.ring.field(), self.engine.reduce_full(terms))
    }

    pub fn contains(&self, v: &Vector) -> bool {
        if v.is_zero() {
            return true;
        }
        let mut terms = v.terms().to_vec();
        self.engine.order.sort_desc(&mut terms);
        self.engine.top_reduce(terms).is_empty()
    }

    pub fn contains_all(&self, vs: &[Vector]) -> bool {
        vs.iter().all(|v| self.contains(v))
    }

    /// Interreduce so that the basis is the reduced Groebner basis.
    pub fn make_reduced(&mut self) {
        self.engine.interreduce();
    }

    /// Lead monomials grouped by component.
    pub fn lead_monomials(&self) -> Vec<Vec<Monomial>> {
        let mut out = vec![Vec::new(); self.free.rank()];
        for e in &self.engine.elems {
            out[e.lead().comp as usize].push(e.lead().mon);
        }
        out
    }

    /// Hilbert series of `F / U`.
    pub fn quotient_hilbert_series(&self) -> HilbertSeries {
        let leads = self.lead_monomials();
        let mut hs = HilbertSeries::zero(self.ring.nvars);
        for (k, lm) in leads.iter().enumerate() {
            let num = hilbert::monomial_ideal_numerator(lm);
            hs = hs.add(&HilbertSeries::from_coeffs(self.ring.nvars, self.free.degrees[k], &num));
        }
        hs
    }

    /// Standard terms (`mon`, `comp`) of `F / U` in degree `t`, as a basis of `[F/U]_t`.
    pub fn standard_terms(&self, t: i32) -> Vec<(Monomial, usize)> {
        let leads = self.lead_monomials();
        let mut out = Vec::new();
        for (k, &d) in self.free.degrees.iter().enumerate() {
            let md = t - d;
            if md < 0 {
                continue;
            }
            for m in monomials_of_degree(self.ring.nvars, md as u32) {
                if !leads[k].iter().any(|l| l.divides(&m)) {
                    out.push((m, k));
                }
            }
        }
        out
    }
}

/// Map from standard terms in one degree to coordinates.
#[derive(Clone, Debug, Default)]
pub struct StandardBasis {
    pub terms: Vec<(Monomial, usize)>,
    pub index: HashMap<(Monomial, usize), usize>,
}

impl StandardBasis {
    pub fn new(gb: &GroebnerBasis, t: i32) -> Self {
        let terms = gb.standard_terms(t);
        let index = terms.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        StandardBasis { terms, index }
    }

    pub fn dim(&self) -> usize {
        self.terms.len()
    }

    /// Coordinates of a normal form (all terms must be standard).
    pub fn coords(&self, nf: &Vector) -> Vec<u32> {
        let mut c = vec![0u32; self.terms.len()];
        for t in nf.terms() {
            let i = self.index[&(t.mon, t.comp as usize)];
            c[i] = t.coef;
        }
        c
    }

    pub fn vector(&self, f: PrimeField, coords: &[u32]) -> Vector {
        let terms = coords
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| Term { mon: self.terms[i].0, comp: self.terms[i].1 as u32, coef: c })
            .collect();
        Vector::from_terms(f, terms)
    }
}

/// Groebner basis of the graph `{(A v, v)} ⊆ F ⊕ F1` of a map `A: F1 -> F` in a block order.
///
/// Elements with lead term in `F` give a basis of the image, the others a basis of the kernel.
#[derive(Clone, Debug)]
pub struct GraphBasis {
    map_ring: Ring,
    target: FreeModule,
    source: FreeModule,
    engine: Engine,
}

impl GraphBasis {
    pub fn new(map: &GradedMap) -> Self {
        let f = map.ring.field();
        let m = map.target.rank();
        let order = ModuleOrder::block_sum(&ModuleOrder::standard(&map.target), &ModuleOrder::standard(&map.source));
        let mut engine = Engine::new(order, f);
        for (j, c) in map.cols.iter().enumerate() {
            let v = c.add(&Vector::basis(j).shift(m), f);
            engine.push(&v);
        }
        engine.run(None);
        GraphBasis { map_ring: map.ring, target: map.target.clone(), source: map.source.clone(), engine }
    }

    fn m(&self) -> usize {
        self.target.rank()
    }

    /// Groebner basis of the kernel (in the standard order of the source).
    pub fn kernel(&self) -> Vec<Vector> {
        let m = self.m();
        let f = self.map_ring.field();
        self.engine
            .elems
            .iter()
            .filter(|e| e.lead().comp as usize >= m)
            .map(|e| to_vector(f, e.terms.clone()).restrict(m, m + self.source.rank()))
            .collect()
    }

    /// Groebner basis of the image.
    pub fn image(&self) -> GroebnerBasis {
        let m = self.m();
        let bases: Vec<Vec<Term>> = self
            .engine
            .elems
            .iter()
            .filter(|e| (e.lead().comp as usize) < m)
            .map(|e| e.terms.iter().filter(|t| (t.comp as usize) < m).copied().collect())
            .collect();
        let engine = Engine::from_basis(ModuleOrder::standard(&self.target), self.map_ring.field(), bases);
        GroebnerBasis { ring: self.map_ring, free: self.target.clone(), engine }
    }

    /// `Some(c)` with `A c = v` if `v` lies in the image.
    pub fn lift(&self, v: &Vector) -> Option<Vector> {
        if v.is_zero() {
            return Some(Vector::zero());
        }
        let m = self.m();
        let f = self.map_ring.field();
        let mut terms = v.terms().to_vec();
        self.engine.order.sort_desc(&mut terms);
        let r = self.engine.top_reduce(terms);
        if let Some(t) = r.first() {
            if (t.comp as usize) < m {
                return None;
            }
        }
        let c = to_vector(f, r).restrict(m, m + self.source.rank());
        Some(c.scale(f.neg(1), f))
    }
}

/// Generators of the kernel of `map` (a Groebner basis of the syzygy module).
pub fn kernel(map: &GradedMap) -> GradedMap {
    let g = GraphBasis::new(map);
    let k = g.kernel();
    GradedMap::from_columns(map.ring, map.source.clone(), k, 0).expect("kernel elements are homogeneous")
}

/// Indices of a minimal generating subset of `gens ⊆ free`, chosen greedily by degree.
pub fn minimal_generator_indices(ring: Ring, free: &FreeModule, gens: &[Vector]) -> Vec<usize> {
    let mut engine = Engine::new(ModuleOrder::standard(free), ring.field());
    for g in gens {
        engine.push(g);
    }
    engine.run(None);
    let mut acc = engine.accepted.clone();
    acc.sort();
    acc
}

/// Minimal generators of the column span of `map`, as a new map.
pub fn minimal_generators(map: &GradedMap) -> GradedMap {
    let idx = minimal_generator_indices(map.ring, &map.target, &map.cols);
    map.select_cols(&idx)
}

/// Minimal generators of the kernel of `map`.
pub fn minimal_kernel(map: &GradedMap) -> GradedMap {
    minimal_generators(&kernel(map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, Poly};

    fn ideal_map(ring: Ring, src: &[&str]) -> GradedMap {
        let names = ring.var_names();
        let polys: Vec<Poly> = src.iter().map(|s| parse_poly(ring, &names, s).unwrap()).collect();
        GradedMap::from_rows(ring, FreeModule::new(vec![0]), &[polys]).unwrap()
    }

    #[test]
    fn twisted_cubic_gb_and_hilbert() {
        let ring = Ring::standard(4);
        let a = ideal_map(ring, &["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"]);
        let gb = GroebnerBasis::of_image(&a);
        let hs = gb.quotient_hilbert_series();
        for t in 0..6 {
            assert_eq!(hs.value(t), 3 * t as i64 + 1);
        }
        let syz = minimal_kernel(&a);
        assert_eq!(syz.ncols(), 2);
        assert!(a.compose(&syz).unwrap().is_zero());
    }

    #[test]
    fn lift_recovers_coefficients() {
        let ring = Ring::standard(3);
        let a = ideal_map(ring, &["x0^2", "x1^2", "x0*x1 + x2^2"]);
        let g = GraphBasis::new(&a);
        let names = ring.var_names();
        let target = parse_poly(ring, &names, "x0^3*x1 + x1^2*x2^2 + x0*x1*x2^2").unwrap();
        let v = Vector::from_polys(&[target.clone()]);
        let c = g.lift(&v).expect("in ideal");
        assert_eq!(a.apply(&c), v);
        let out = Vector::from_polys(&[Poly::var(ring, 2).pow(2)]);
        assert!(g.lift(&out).is_none());
    }

    #[test]
    fn minimal_generators_drop_redundant() {
        let ring = Ring::standard(3);
        let a = ideal_map(ring, &["x0", "x0*x1", "x1", "x0 + x1"]);
        let m = minimal_generators(&a);
        assert_eq!(m.ncols(), 2);
    }
}
