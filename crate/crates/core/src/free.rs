//! Graded free modules, their elements and degree-zero maps between them.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{invariant, Error, Result};
use crate::field::PrimeField;
use crate::monomial::Monomial;
use crate::poly::{Poly, Ring};

/// `⊕ R(-d_k)`; `degrees[k] = d_k` is the degree of the k-th basis element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FreeModule {
    pub degrees: Vec<i32>,
}

impl FreeModule {
    pub fn new(degrees: Vec<i32>) -> Self {
        FreeModule { degrees }
    }

    pub fn rank(&self) -> usize {
        self.degrees.len()
    }

    /// `F(a)`: every basis degree decreases by `a`.
    pub fn twist(&self, a: i32) -> FreeModule {
        FreeModule { degrees: self.degrees.iter().map(|d| d - a).collect() }
    }

    pub fn dual(&self) -> FreeModule {
        FreeModule { degrees: self.degrees.iter().map(|d| -d).collect() }
    }

    pub fn sum(&self, o: &FreeModule) -> FreeModule {
        let mut degrees = self.degrees.clone();
        degrees.extend_from_slice(&o.degrees);
        FreeModule { degrees }
    }

    /// Sorted degree multiset.
    pub fn sorted_degrees(&self) -> Vec<i32> {
        let mut d = self.degrees.clone();
        d.sort();
        d
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub mon: Monomial,
    pub comp: u32,
    pub coef: u32,
}

/// Canonical term order for stored vectors: component ascending, then grevlex descending.
#[inline]
pub(crate) fn canonical_cmp(a: &Term, b: &Term) -> Ordering {
    a.comp.cmp(&b.comp).then_with(|| b.mon.grevlex(&a.mon))
}

/// Element of a free module, stored sparsely in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Vector {
    terms: Vec<Term>,
}

impl Vector {
    pub fn zero() -> Self {
        Vector { terms: Vec::new() }
    }

    /// Basis element `e_k`.
    pub fn basis(k: usize) -> Self {
        Vector { terms: vec![Term { mon: Monomial::ONE, comp: k as u32, coef: 1 }] }
    }

    pub fn from_terms(f: PrimeField, mut terms: Vec<Term>) -> Self {
        terms.sort_by(canonical_cmp);
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(l) if l.comp == t.comp && l.mon == t.mon => l.coef = f.add(l.coef, t.coef),
                _ => out.push(t),
            }
            if out.last().map(|l| l.coef == 0).unwrap_or(false) {
                out.pop();
            }
        }
        Vector { terms: out }
    }

    pub fn from_polys(polys: &[Poly]) -> Self {
        let mut terms = Vec::new();
        for (k, p) in polys.iter().enumerate() {
            for &(mon, coef) in p.terms() {
                terms.push(Term { mon, comp: k as u32, coef });
            }
        }
        Vector { terms }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Entry in component `k`.
    pub fn component(&self, ring: Ring, k: usize) -> Poly {
        let terms: Vec<(Monomial, u32)> =
            self.terms.iter().filter(|t| t.comp as usize == k).map(|t| (t.mon, t.coef)).collect();
        Poly::from_sorted_terms(ring, terms)
    }

    pub fn to_polys(&self, ring: Ring, rank: usize) -> Vec<Poly> {
        let mut buckets: Vec<Vec<(Monomial, u32)>> = vec![Vec::new(); rank];
        for t in &self.terms {
            buckets[t.comp as usize].push((t.mon, t.coef));
        }
        buckets.into_iter().map(|b| Poly::from_sorted_terms(ring, b)).collect()
    }

    /// Degree as an element of `F`, `None` for zero; errors if not homogeneous.
    pub fn degree_in(&self, f: &FreeModule) -> Result<Option<i32>> {
        let mut deg = None;
        for t in &self.terms {
            let d = t.mon.degree() as i32 + f.degrees[t.comp as usize];
            match deg {
                None => deg = Some(d),
                Some(e) if e != d => return Err(Error::Precondition("inhomogeneous vector".into())),
                _ => {}
            }
        }
        Ok(deg)
    }

    /// `self + c * o`.
    pub fn combine(&self, o: &Vector, c: u32, f: PrimeField) -> Vector {
        if c == 0 || o.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < o.terms.len() {
            let ord = if i == self.terms.len() {
                Ordering::Greater
            } else if j == o.terms.len() {
                Ordering::Less
            } else {
                canonical_cmp(&self.terms[i], &o.terms[j])
            };
            match ord {
                Ordering::Less => {
                    out.push(self.terms[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    let mut t = o.terms[j];
                    t.coef = f.mul(c, t.coef);
                    out.push(t);
                    j += 1;
                }
                Ordering::Equal => {
                    let v = f.add(self.terms[i].coef, f.mul(c, o.terms[j].coef));
                    if v != 0 {
                        let mut t = self.terms[i];
                        t.coef = v;
                        out.push(t);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Vector { terms: out }
    }

    pub fn add(&self, o: &Vector, f: PrimeField) -> Vector {
        self.combine(o, 1, f)
    }

    pub fn sub(&self, o: &Vector, f: PrimeField) -> Vector {
        self.combine(o, f.neg(1), f)
    }

    pub fn scale(&self, c: u32, f: PrimeField) -> Vector {
        if c == 0 {
            return Vector::zero();
        }
        Vector {
            terms: self.terms.iter().map(|t| Term { coef: f.mul(t.coef, c), ..*t }).collect(),
        }
    }

    pub fn mul_term(&self, m: &Monomial, c: u32, f: PrimeField) -> Vector {
        if c == 0 {
            return Vector::zero();
        }
        Vector {
            terms: self
                .terms
                .iter()
                .map(|t| Term { mon: t.mon.mul(m), comp: t.comp, coef: f.mul(t.coef, c) })
                .collect(),
        }
    }

    pub fn mul_poly(&self, p: &Poly) -> Vector {
        let f = p.ring().field();
        let mut acc = Vector::zero();
        for (m, c) in p.terms() {
            acc = acc.add(&self.mul_term(m, *c, f), f);
        }
        acc
    }

    /// Relabel components through `map` (old index -> new index), dropping `None`.
    pub fn remap(&self, map: &[Option<usize>], f: PrimeField) -> Vector {
        let terms = self
            .terms
            .iter()
            .filter_map(|t| map[t.comp as usize].map(|k| Term { comp: k as u32, ..*t }))
            .collect();
        Vector::from_terms(f, terms)
    }

    /// Shift all components by `offset`.
    pub fn shift(&self, offset: usize) -> Vector {
        Vector {
            terms: self.terms.iter().map(|t| Term { comp: t.comp + offset as u32, ..*t }).collect(),
        }
    }

    /// Keep components in `lo..hi`, renumbered from zero.
    pub fn restrict(&self, lo: usize, hi: usize) -> Vector {
        Vector {
            terms: self
                .terms
                .iter()
                .filter(|t| (t.comp as usize) >= lo && (t.comp as usize) < hi)
                .map(|t| Term { comp: t.comp - lo as u32, ..*t })
                .collect(),
        }
    }

    /// Constant part in component `k` (coefficient of `1 * e_k`).
    pub fn constant_at(&self, k: usize) -> u32 {
        self.terms
            .iter()
            .find(|t| t.comp as usize == k && t.mon.is_one())
            .map(|t| t.coef)
            .unwrap_or(0)
    }

    pub fn max_comp(&self) -> Option<usize> {
        self.terms.last().map(|t| t.comp as usize)
    }

    pub fn fmt_with(&self, ring: Ring, rank: usize, names: &[String]) -> String {
        let polys = self.to_polys(ring, rank);
        format!("[{}]", polys.iter().map(|p| p.fmt_with(names)).collect::<Vec<_>>().join(", "))
    }
}

/// Degree-zero homomorphism `source -> target` of graded free modules, stored by columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    pub ring: Ring,
    pub source: FreeModule,
    pub target: FreeModule,
    pub cols: Vec<Vector>,
}

impl GradedMap {
    /// Validate that column `j` is homogeneous of degree `source.degrees[j]` in `target`.
    pub fn new(ring: Ring, source: FreeModule, target: FreeModule, cols: Vec<Vector>) -> Result<Self> {
        if cols.len() != source.rank() {
            return invariant(format!("{} columns for source of rank {}", cols.len(), source.rank()));
        }
        for (j, c) in cols.iter().enumerate() {
            if let Some(k) = c.max_comp() {
                if k >= target.rank() {
                    return invariant(format!("column {j} has component {k} outside target"));
                }
            }
            match c.degree_in(&target)? {
                Some(d) if d != source.degrees[j] => {
                    return Err(Error::Precondition(format!(
                        "column {j} has degree {d}, expected {}",
                        source.degrees[j]
                    )))
                }
                _ => {}
            }
        }
        Ok(GradedMap { ring, source, target, cols })
    }

    pub(crate) fn new_unchecked(ring: Ring, source: FreeModule, target: FreeModule, cols: Vec<Vector>) -> Self {
        debug_assert!(Self::new(ring, source.clone(), target.clone(), cols.clone()).is_ok());
        GradedMap { ring, source, target, cols }
    }

    /// Columns given as polynomial vectors; source degrees inferred (zero columns need `fallback`).
    pub fn from_columns(ring: Ring, target: FreeModule, cols: Vec<Vector>, fallback: i32) -> Result<Self> {
        let mut degs = Vec::with_capacity(cols.len());
        for c in &cols {
            degs.push(c.degree_in(&target)?.unwrap_or(fallback));
        }
        Self::new(ring, FreeModule::new(degs), target, cols)
    }

    /// Matrix given by rows of polynomials (`rows[i][j]` is the entry at row i, column j).
    pub fn from_rows(ring: Ring, target: FreeModule, rows: &[Vec<Poly>]) -> Result<Self> {
        let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
        let mut cols = Vec::with_capacity(ncols);
        for j in 0..ncols {
            let col: Vec<Poly> = rows.iter().map(|r| r[j].clone()).collect();
            cols.push(Vector::from_polys(&col));
        }
        Self::from_columns(ring, target, cols, 0)
    }

    pub fn zero(ring: Ring, source: FreeModule, target: FreeModule) -> Self {
        let cols = vec![Vector::zero(); source.rank()];
        GradedMap { ring, source, target, cols }
    }

    pub fn identity(ring: Ring, f: FreeModule) -> Self {
        let cols = (0..f.rank()).map(Vector::basis).collect();
        GradedMap { ring, source: f.clone(), target: f, cols }
    }

    pub fn nrows(&self) -> usize {
        self.target.rank()
    }

    pub fn ncols(&self) -> usize {
        self.source.rank()
    }

    pub fn entry(&self, i: usize, j: usize) -> Poly {
        self.cols[j].component(self.ring, i)
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        let f = self.ring.field();
        let mut acc = Vector::zero();
        for t in v.terms() {
            acc = acc.add(&self.cols[t.comp as usize].mul_term(&t.mon, t.coef, f), f);
        }
        acc
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedMap) -> Result<GradedMap> {
        if other.target != self.source {
            return invariant("composition of incompatible maps");
        }
        let cols = other.cols.iter().map(|c| self.apply(c)).collect();
        Ok(GradedMap { ring: self.ring, source: other.source.clone(), target: self.target.clone(), cols })
    }

    pub fn transpose(&self) -> GradedMap {
        let f = self.ring.field();
        let mut cols: Vec<Vec<Term>> = vec![Vec::new(); self.nrows()];
        for (j, c) in self.cols.iter().enumerate() {
            for t in c.terms() {
                cols[t.comp as usize].push(Term { mon: t.mon, comp: j as u32, coef: t.coef });
            }
        }
        GradedMap {
            ring: self.ring,
            source: self.target.dual(),
            target: self.source.dual(),
            cols: cols.into_iter().map(|ts| Vector::from_terms(f, ts)).collect(),
        }
    }

    /// `[self | other]` with a common target.
    pub fn hstack(&self, other: &GradedMap) -> Result<GradedMap> {
        if self.target != other.target {
            return invariant("hstack of maps with different targets");
        }
        let mut cols = self.cols.clone();
        cols.extend(other.cols.iter().cloned());
        Ok(GradedMap {
            ring: self.ring,
            source: self.source.sum(&other.source),
            target: self.target.clone(),
            cols,
        })
    }

    /// `[self; other]` with a common source.
    pub fn vstack(&self, other: &GradedMap) -> Result<GradedMap> {
        if self.source != other.source {
            return invariant("vstack of maps with different sources");
        }
        let f = self.ring.field();
        let off = self.nrows();
        let cols = self.cols.iter().zip(&other.cols).map(|(a, b)| a.add(&b.shift(off), f)).collect();
        Ok(GradedMap {
            ring: self.ring,
            source: self.source.clone(),
            target: self.target.sum(&other.target),
            cols,
        })
    }

    pub fn direct_sum(&self, other: &GradedMap) -> GradedMap {
        let off = self.nrows();
        let mut cols = self.cols.clone();
        cols.extend(other.cols.iter().map(|c| c.shift(off)));
        GradedMap {
            ring: self.ring,
            source: self.source.sum(&other.source),
            target: self.target.sum(&other.target),
            cols,
        }
    }

    pub fn scale(&self, c: u32) -> GradedMap {
        let f = self.ring.field();
        GradedMap { cols: self.cols.iter().map(|v| v.scale(c, f)).collect(), ..self.clone() }
    }

    pub fn add(&self, o: &GradedMap) -> Result<GradedMap> {
        if self.source != o.source || self.target != o.target {
            return invariant("sum of maps with different shapes");
        }
        let f = self.ring.field();
        Ok(GradedMap { cols: self.cols.iter().zip(&o.cols).map(|(a, b)| a.add(b, f)).collect(), ..self.clone() })
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_zero())
    }

    /// Select columns.
    pub fn select_cols(&self, idx: &[usize]) -> GradedMap {
        GradedMap {
            ring: self.ring,
            source: FreeModule::new(idx.iter().map(|&j| self.source.degrees[j]).collect()),
            target: self.target.clone(),
            cols: idx.iter().map(|&j| self.cols[j].clone()).collect(),
        }
    }

    /// Twist source and target by `a`.
    pub fn twist(&self, a: i32) -> GradedMap {
        GradedMap {
            ring: self.ring,
            source: self.source.twist(a),
            target: self.target.twist(a),
            cols: self.cols.clone(),
        }
    }

    /// True if no entry is a nonzero constant.
    pub fn is_minimal(&self) -> bool {
        self.cols.iter().all(|c| c.terms().iter().all(|t| !t.mon.is_one()))
    }
}
