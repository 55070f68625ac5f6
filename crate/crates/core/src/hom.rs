//! Degree-zero homomorphism spaces and the randomized isomorphism test.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use crate::error::Result;
use crate::free::{GradedMap, Term, Vector};
use crate::groebner::StandardBasis;
use crate::linalg::Matrix;
use crate::module::{FPModule, ModHom};
use crate::random::{element, rng};

/// A basis of `Hom_0(M, N)` as a vector space over `F_p`.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub source: FPModule,
    pub target: FPModule,
    pub basis: Vec<ModHom>,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn combination(&self, coeffs: &[u32]) -> ModHom {
        let f = self.source.ring().field();
        let mut mat = GradedMap::zero(
            self.source.ring(),
            self.source.generators().clone(),
            self.target.generators().clone(),
        );
        for (b, &c) in self.basis.iter().zip(coeffs) {
            if c != 0 {
                for (k, col) in b.matrix.cols.iter().enumerate() {
                    mat.cols[k] = mat.cols[k].add(&col.scale(c, f), f);
                }
            }
        }
        ModHom::new_unchecked(self.source.clone(), self.target.clone(), mat)
    }

    pub fn random_element(&self, seed: u64) -> ModHom {
        let f = self.source.ring().field();
        let mut r = rng(seed);
        let coeffs: Vec<u32> = (0..self.dim()).map(|_| element(&mut r, f)).collect();
        self.combination(&coeffs)
    }
}

/// Standard bases of `[N]_t`, built lazily.
pub(crate) struct DegreeBases<'a> {
    module: &'a FPModule,
    cache: HashMap<i32, StandardBasis>,
}

impl<'a> DegreeBases<'a> {
    pub fn new(module: &'a FPModule) -> Self {
        DegreeBases { module, cache: HashMap::new() }
    }

    pub fn get(&mut self, t: i32) -> &StandardBasis {
        let m = self.module;
        self.cache.entry(t).or_insert_with(|| StandardBasis::new(m.gb(), t))
    }
}

/// `Hom_0(M, N)`: images of generators of `M` in standard monomial coordinates of `N`,
/// constrained so that every relation of `M` maps to zero.
pub fn hom_degree0(m: &FPModule, n: &FPModule) -> Result<HomSpace> {
    m.ring().check_same(&n.ring())?;
    let ring = m.ring();
    let f = ring.field();
    let a = m.presentation();
    let mut bases = DegreeBases::new(n);
    // Unknowns.
    let mut unk_offset = Vec::with_capacity(m.num_generators());
    let mut nunk = 0;
    for &d in &m.generators().degrees {
        unk_offset.push(nunk);
        nunk += bases.get(d).dim();
    }
    // Equations.
    let mut row_offset = Vec::with_capacity(a.ncols());
    let mut nrows = 0;
    for &d in &a.source.degrees {
        row_offset.push(nrows);
        nrows += bases.get(d).dim();
    }
    let mut mat = Matrix::zeros(f, nrows, nunk);
    for (j, col) in a.cols.iter().enumerate() {
        let dj = a.source.degrees[j];
        // Group entries of the relation by generator.
        let mut by_gen: BTreeMap<usize, Vec<Term>> = BTreeMap::new();
        for t in col.terms() {
            by_gen.entry(t.comp as usize).or_default().push(*t);
        }
        for (k, entry) in by_gen {
            let dk = m.generators().degrees[k];
            let src_terms = bases.get(dk).terms.clone();
            for (u, (mon, comp)) in src_terms.iter().enumerate() {
                let terms: Vec<Term> = entry
                    .iter()
                    .map(|t| Term { mon: t.mon.mul(mon), comp: *comp as u32, coef: t.coef })
                    .collect();
                let v = Vector::from_terms(f, terms);
                let nf = n.normal_form(&v);
                let coords = bases.get(dj).coords(&nf);
                for (r, c) in coords.into_iter().enumerate() {
                    if c != 0 {
                        let old = mat.get(row_offset[j] + r, unk_offset[k] + u);
                        mat.set(row_offset[j] + r, unk_offset[k] + u, f.add(old, c));
                    }
                }
            }
        }
    }
    let kernel = mat.kernel();
    let mut basis = Vec::with_capacity(kernel.len());
    for x in kernel {
        let mut cols = Vec::with_capacity(m.num_generators());
        for (k, &d) in m.generators().degrees.iter().enumerate() {
            let sb = bases.get(d);
            let coords = &x[unk_offset[k]..unk_offset[k] + sb.dim()];
            cols.push(sb.vector(f, coords));
        }
        let g = GradedMap::new_unchecked(ring, m.generators().clone(), n.generators().clone(), cols);
        basis.push(ModHom::new_unchecked(m.clone(), n.clone(), g));
    }
    Ok(HomSpace { source: m.clone(), target: n.clone(), basis })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum IsoVerdict {
    /// A witness map inducing a bijection on minimal generators, with equal Hilbert series.
    Isomorphic,
    /// Certified by an invariant that differs.
    NotIsomorphic { reason: String },
    /// No witness found; `error_bound` bounds the chance that the modules are isomorphic anyway.
    Inconclusive { error_bound: f64 },
}

#[derive(Clone, Debug)]
pub struct IsoReport {
    pub verdict: IsoVerdict,
    pub trials: u32,
    pub trials_used: u32,
    pub prime: u32,
    pub witness: Option<ModHom>,
}

impl IsoReport {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self.verdict, IsoVerdict::Isomorphic)
    }

    pub fn is_certified_negative(&self) -> bool {
        matches!(self.verdict, IsoVerdict::NotIsomorphic { .. })
    }
}

fn degree_multiset(d: &[i32]) -> Vec<i32> {
    let mut v = d.to_vec();
    v.sort();
    v
}

/// Constant block of `α` between generators of degree `d`: rows index target generators.
fn constant_block(alpha: &GradedMap, src_idx: &[usize], tgt_idx: &[usize]) -> Vec<Vec<u32>> {
    let pos: HashMap<usize, usize> = tgt_idx.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let mut block = vec![vec![0u32; src_idx.len()]; tgt_idx.len()];
    for (c, &k) in src_idx.iter().enumerate() {
        for t in alpha.cols[k].terms() {
            if t.mon.is_one() {
                if let Some(&r) = pos.get(&(t.comp as usize)) {
                    block[r][c] = t.coef;
                }
            }
        }
    }
    block
}

/// Randomized isomorphism test for graded modules.
///
/// Negative answers are certified by invariants (Hilbert series, generator and relation
/// degrees, or a degree in which no degree-zero map can be onto modulo the maximal ideal).
/// Positive answers carry a witness `α: M -> N` that is bijective on `M/mM -> N/mN`; with equal
/// Hilbert series this makes `α` an isomorphism.
pub fn random_iso_test(m: &FPModule, n: &FPModule, trials: u32, seed: u64) -> Result<IsoReport> {
    m.ring().check_same(&n.ring())?;
    let p = m.ring().p;
    let report = |verdict, used, witness| IsoReport { verdict, trials, trials_used: used, prime: p, witness };
    let neg = |reason: String| report(IsoVerdict::NotIsomorphic { reason }, 0, None);
    if m.hilbert_series() != n.hilbert_series() {
        return Ok(neg("Hilbert series differ".into()));
    }
    let mm = m.minimal();
    let nn = n.minimal();
    if degree_multiset(&mm.generators().degrees) != degree_multiset(&nn.generators().degrees) {
        return Ok(neg("minimal generator degrees differ".into()));
    }
    if degree_multiset(&mm.presentation().source.degrees) != degree_multiset(&nn.presentation().source.degrees)
    {
        return Ok(neg("minimal relation degrees differ".into()));
    }
    if mm.num_generators() == 0 {
        let w = ModHom::zero(&mm, &nn);
        return Ok(report(IsoVerdict::Isomorphic, 0, Some(w)));
    }
    let hom = hom_degree0(&mm, &nn)?;
    if hom.dim() == 0 {
        return Ok(neg("Hom_0(M, N) = 0".into()));
    }
    let mut degrees: Vec<i32> = mm.generators().degrees.clone();
    degrees.sort();
    degrees.dedup();
    let blocks: Vec<(Vec<usize>, Vec<usize>)> = degrees
        .iter()
        .map(|&d| {
            let s = (0..mm.num_generators()).filter(|&k| mm.generators().degrees[k] == d).collect();
            let t = (0..nn.num_generators()).filter(|&k| nn.generators().degrees[k] == d).collect();
            (s, t)
        })
        .collect();
    let f = m.ring().field();
    // Certificate: in some degree the constant parts of all maps span too little.
    for (i, (s, t)) in blocks.iter().enumerate() {
        let mut rows = Vec::new();
        for b in &hom.basis {
            let blk = constant_block(&b.matrix, s, t);
            for c in 0..s.len() {
                rows.push((0..t.len()).map(|r| blk[r][c]).collect::<Vec<u32>>());
            }
        }
        let span = Matrix::from_rows(f, &rows, t.len()).rank();
        if span < t.len() {
            return Ok(neg(format!(
                "no degree-zero map reaches all generators of degree {} modulo the maximal ideal",
                degrees[i]
            )));
        }
    }
    for trial in 0..trials {
        let alpha = hom.random_element(seed.wrapping_add(trial as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
        let ok = blocks.iter().all(|(s, t)| {
            let blk = constant_block(&alpha.matrix, s, t);
            Matrix::from_rows(f, &blk, s.len()).rank() == t.len()
        });
        if ok {
            return Ok(report(IsoVerdict::Isomorphic, trial + 1, Some(alpha)));
        }
    }
    let r = mm.num_generators() as f64;
    let bound = (r / p as f64).powi(trials as i32).min(1.0);
    Ok(report(IsoVerdict::Inconclusive { error_bound: bound }, trials, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_poly, Ring};

    #[test]
    fn twists_of_free_modules() {
        let ring = Ring::standard(3);
        let a = FPModule::free(ring, vec![1]);
        let b = FPModule::free(ring, vec![2]);
        let r = random_iso_test(&a, &b, 20, 1).unwrap();
        assert!(r.is_certified_negative());
        let r = random_iso_test(&a, &a.scramble(3), 20, 1).unwrap();
        assert!(r.is_isomorphic());
    }

    #[test]
    fn hom_from_r_is_the_module_in_degree_zero() {
        let ring = Ring::standard(3);
        let names = ring.var_names();
        let q = FPModule::quotient_ring(ring, &[parse_poly(ring, &names, "x0^2").unwrap()]).unwrap();
        let r1 = FPModule::free(ring, vec![2]);
        // Hom_0(R(-2), R/(x0^2)) = [R/(x0^2)]_2 has dimension 6 - 1 = 5.
        assert_eq!(hom_degree0(&r1, &q).unwrap().dim(), 5);
    }

    #[test]
    fn scrambled_ideal_is_isomorphic() {
        let ring = Ring::standard(4);
        let names = ring.var_names();
        let gens: Vec<_> =
            ["x0*x2", "x0*x3", "x1*x2", "x1*x3"].iter().map(|s| parse_poly(ring, &names, s).unwrap()).collect();
        let i = FPModule::ideal(ring, &gens).unwrap();
        let r = random_iso_test(&i, &i.scramble(11), 20, 5).unwrap();
        assert!(r.is_isomorphic());
        let w = r.witness.unwrap();
        assert!(ModHom::new(w.source.clone(), w.target.clone(), w.matrix.clone()).is_ok());
    }
}
