//! Finitely presented graded modules `M = coker(A: F1 -> F0)` and degree-zero maps between them.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{invariant, precondition, Result};
use crate::free::{FreeModule, GradedMap, Term, Vector};
use crate::groebner::{self, GroebnerBasis, HilbertSeries};
use crate::homological::Resolution;
use crate::poly::{Poly, Ring};

#[derive(Debug, Default)]
struct Cache {
    gb: OnceLock<GroebnerBasis>,
    hilbert: OnceLock<HilbertSeries>,
    minimal: OnceLock<Minimalized>,
    resolution: OnceLock<Resolution>,
    ext: OnceLock<Vec<FPModule>>,
    qpres: Mutex<HashMap<usize, Arc<crate::qpres::Raw>>>,
}

/// Cokernel of a degree-zero map of graded free modules.
#[derive(Clone, Debug)]
pub struct FPModule {
    pres: GradedMap,
    cache: Arc<Cache>,
}

impl PartialEq for FPModule {
    fn eq(&self, o: &Self) -> bool {
        self.pres == o.pres
    }
}

impl FPModule {
    pub fn coker(pres: GradedMap) -> Self {
        FPModule { pres, cache: Arc::new(Cache::default()) }
    }

    pub fn free(ring: Ring, degrees: Vec<i32>) -> Self {
        let f = FreeModule::new(degrees);
        Self::coker(GradedMap::zero(ring, FreeModule::default(), f))
    }

    pub fn zero(ring: Ring) -> Self {
        Self::free(ring, Vec::new())
    }

    /// `R / I`.
    pub fn quotient_ring(ring: Ring, gens: &[Poly]) -> Result<Self> {
        let row: Vec<Poly> = gens.to_vec();
        let m = GradedMap::from_rows(ring, FreeModule::new(vec![0]), &[row])?;
        Ok(Self::coker(m))
    }

    /// The ideal `I` as a module, generated by `gens` in their degrees.
    pub fn ideal(ring: Ring, gens: &[Poly]) -> Result<Self> {
        let vs: Vec<Vector> = gens.iter().map(|g| Vector::from_polys(std::slice::from_ref(g))).collect();
        Self::subquotient(ring, &FreeModule::new(vec![0]), &vs, &[])
    }

    /// `(<gens> + <rels>) / <rels>` inside a free module, presented on `gens`.
    pub fn subquotient(ring: Ring, free: &FreeModule, gens: &[Vector], rels: &[Vector]) -> Result<Self> {
        let mut cols = gens.to_vec();
        cols.extend_from_slice(rels);
        let all = GradedMap::from_columns(ring, free.clone(), cols, 0)?;
        let k = gens.len();
        let ker = groebner::kernel(&all);
        let g_source = FreeModule::new(all.source.degrees[..k].to_vec());
        let cols: Vec<Vector> = ker.cols.iter().map(|c| c.restrict(0, k)).filter(|c| !c.is_zero()).collect();
        let pres = GradedMap::from_columns(ring, g_source, cols, 0)?;
        Ok(Self::coker(groebner::minimal_generators(&pres)))
    }

    pub fn ring(&self) -> Ring {
        self.pres.ring
    }

    pub fn presentation(&self) -> &GradedMap {
        &self.pres
    }

    /// `F0`, the free module on the generators.
    pub fn generators(&self) -> &FreeModule {
        &self.pres.target
    }

    pub fn num_generators(&self) -> usize {
        self.pres.target.rank()
    }

    pub fn gb(&self) -> &GroebnerBasis {
        self.cache.gb.get_or_init(|| GroebnerBasis::of_image(&self.pres))
    }

    pub fn hilbert_series(&self) -> &HilbertSeries {
        self.cache.hilbert.get_or_init(|| self.gb().quotient_hilbert_series())
    }

    /// `dim_k [M]_t`.
    pub fn graded_dim(&self, t: i32) -> i64 {
        self.hilbert_series().value(t)
    }

    pub fn is_zero(&self) -> bool {
        self.hilbert_series().is_zero()
    }

    pub fn krull_dim(&self) -> Option<usize> {
        self.hilbert_series().dimension()
    }

    pub fn normal_form(&self, v: &Vector) -> Vector {
        self.gb().reduce(v)
    }

    pub fn is_zero_element(&self, v: &Vector) -> bool {
        self.gb().contains(v)
    }

    /// `M(a)`.
    pub fn twist(&self, a: i32) -> FPModule {
        Self::coker(self.pres.twist(a))
    }

    pub fn direct_sum(&self, o: &FPModule) -> FPModule {
        Self::coker(self.pres.direct_sum(&o.pres))
    }

    pub fn direct_sum_all(ring: Ring, parts: &[FPModule]) -> FPModule {
        let mut acc = FPModule::zero(ring);
        for p in parts {
            acc = acc.direct_sum(p);
        }
        acc
    }

    /// True if the module is free (no relations after minimalization).
    pub fn is_free(&self) -> bool {
        let m = self.minimalize();
        m.module.pres.ncols() == 0
    }

    /// Minimal presentation together with the induced isomorphisms on generators.
    pub fn minimalize(&self) -> Minimalized {
        self.cache.minimal.get_or_init(|| minimalize(self)).clone()
    }

    pub fn minimal(&self) -> FPModule {
        self.cache.minimal.get_or_init(|| minimalize(self)).module.clone()
    }

    /// Minimal free resolution (computed once).
    pub fn resolution(&self) -> &Resolution {
        self.cache
            .resolution
            .get_or_init(|| crate::homological::compute_resolution(self).expect("resolution terminates"))
    }

    pub(crate) fn qpres_memo(&self) -> &Mutex<HashMap<usize, Arc<crate::qpres::Raw>>> {
        &self.cache.qpres
    }

    /// `Ext^i(M, R)` for `0 <= i <= n + 1` (computed once).
    pub fn ext(&self) -> &Vec<FPModule> {
        self.cache.ext.get_or_init(|| crate::homological::compute_ext(self).expect("ext modules"))
    }

    /// `Hom(M, R)`, presented by minimal generators of `ker(A^T)`.
    pub fn dual(&self) -> FPModule {
        self.dual_with_generators().0
    }

    /// `M*` together with its generators as elements of `F0*`.
    pub fn dual_with_generators(&self) -> (FPModule, GradedMap) {
        let at = self.pres.transpose();
        let z = groebner::minimal_kernel(&at);
        let m = FPModule::subquotient(self.ring(), &z.target, &z.cols, &[]).expect("kernel is homogeneous");
        (m, z)
    }

    /// `ann(M)`, generators of the annihilator ideal.
    pub fn annihilator(&self) -> Vec<Poly> {
        let ring = self.ring();
        let mut acc: Option<Vec<Poly>> = None;
        for k in 0..self.num_generators() {
            // (im A : e_k) = kernel of R(-d_k) -> F0 / im A.
            let d = self.pres.target.degrees[k];
            let col = GradedMap::new_unchecked(
                ring,
                FreeModule::new(vec![d]),
                self.pres.target.clone(),
                vec![Vector::basis(k)],
            );
            let big = col.hstack(&self.pres).expect("same target");
            let ker = groebner::kernel(&big);
            let gens: Vec<Poly> =
                ker.cols.iter().map(|c| c.component(ring, 0)).filter(|p| !p.is_zero()).collect();
            acc = Some(match acc {
                None => gens,
                Some(prev) => intersect_ideals(ring, &prev, &gens),
            });
        }
        let gens = acc.unwrap_or_else(|| vec![Poly::constant(ring, 1)]);
        minimal_ideal_generators(ring, &gens)
    }

    /// Apply a random invertible change of generators within each degree (same module).
    pub fn scramble(&self, seed: u64) -> FPModule {
        let mut rng = crate::random::rng(seed);
        let f = self.ring().field();
        let degs = &self.pres.target.degrees;
        let n = degs.len();
        // Upper unitriangular mixing inside each degree keeps invertibility.
        let mut g: Vec<Vector> = (0..n).map(Vector::basis).collect();
        for i in 0..n {
            for j in 0..n {
                if i != j && degs[i] == degs[j] && j > i {
                    let c = crate::random::element(&mut rng, f);
                    g[i] = g[i].add(&Vector::basis(j).scale(c, f), f);
                }
            }
            let s = crate::random::nonzero_element(&mut rng, f);
            g[i] = g[i].scale(s, f);
        }
        // New generators g_i in old coordinates: M = F0' / P^{-1} A.
        let p = GradedMap::new_unchecked(self.ring(), self.pres.target.clone(), self.pres.target.clone(), g);
        let pinv = invert_constant_matrix(&p).expect("unitriangular");
        let cols = self.pres.cols.iter().map(|c| pinv.apply(c)).collect();
        FPModule::coker(GradedMap::new_unchecked(
            self.ring(),
            self.pres.source.clone(),
            self.pres.target.clone(),
            cols,
        ))
    }
}

/// Invert a degree-zero automorphism of a free module given by constant entries only.
pub(crate) fn invert_constant_matrix(p: &GradedMap) -> Option<GradedMap> {
    let f = p.ring.field();
    let n = p.ncols();
    let mut m = crate::linalg::Matrix::zeros(f, n, 2 * n);
    for j in 0..n {
        for t in p.cols[j].terms() {
            if !t.mon.is_one() {
                return None;
            }
            m.set(t.comp as usize, j, t.coef);
        }
        m.set(j, n + j, 1);
    }
    let piv = m.rref();
    if piv.len() < n || piv[n - 1] != n - 1 {
        return None;
    }
    let cols = (0..n)
        .map(|j| {
            let terms = (0..n)
                .filter(|&i| m.get(i, n + j) != 0)
                .map(|i| Term { mon: crate::monomial::Monomial::ONE, comp: i as u32, coef: m.get(i, n + j) })
                .collect();
            Vector::from_terms(f, terms)
        })
        .collect();
    Some(GradedMap::new_unchecked(p.ring, p.target.clone(), p.source.clone(), cols))
}

/// Result of minimalizing a presentation.
#[derive(Clone, Debug)]
pub struct Minimalized {
    pub module: FPModule,
    /// Old generators expressed in the new ones: `F0_old -> F0_new`.
    pub to_new: GradedMap,
    /// New generators as old ones: `F0_new -> F0_old`.
    pub to_old: GradedMap,
}

fn minimalize(m: &FPModule) -> Minimalized {
    let ring = m.ring();
    let f = ring.field();
    let mut target = m.pres.target.clone();
    let mut cols: Vec<Vector> = m.pres.cols.iter().filter(|c| !c.is_zero()).cloned().collect();
    let mut col_degs: Vec<i32> = m
        .pres
        .cols
        .iter()
        .zip(&m.pres.source.degrees)
        .filter(|(c, _)| !c.is_zero())
        .map(|(_, &d)| d)
        .collect();
    // orig[k] = index of current generator k among the old ones.
    let mut orig: Vec<usize> = (0..target.rank()).collect();
    let mut to_new: Vec<Vector> = (0..target.rank()).map(Vector::basis).collect();
    loop {
        // Find a unit entry, preferring short columns.
        let mut best: Option<(usize, usize, u32, usize)> = None;
        for (j, c) in cols.iter().enumerate() {
            for t in c.terms() {
                if t.mon.is_one() {
                    let cand = (j, t.comp as usize, t.coef, c.len());
                    if best.map(|b| cand.3 < b.3).unwrap_or(true) {
                        best = Some(cand);
                    }
                    break;
                }
            }
        }
        let Some((j, i, c, _)) = best else { break };
        let cinv = f.inv(c);
        let pivot = cols[j].clone();
        // e_i = -c^{-1} (pivot - c e_i) in the quotient.
        let sub = pivot.sub(&Vector::basis(i).scale(c, f), f).scale(f.neg(cinv), f);
        let eliminate = |v: &Vector| -> Vector {
            let p = v.component(ring, i);
            if p.is_zero() {
                return v.clone();
            }
            let without = v.sub(&Vector::from_polys(&unit_at(ring, i, &p)), f);
            without.add(&sub.mul_poly(&p), f)
        };
        let mut new_cols = Vec::with_capacity(cols.len() - 1);
        let mut new_degs = Vec::with_capacity(cols.len() - 1);
        for (k, col) in cols.iter().enumerate() {
            if k == j {
                continue;
            }
            let r = eliminate(col);
            if !r.is_zero() {
                new_cols.push(r);
                new_degs.push(col_degs[k]);
            }
        }
        for v in to_new.iter_mut() {
            *v = eliminate(v);
        }
        let map: Vec<Option<usize>> =
            (0..target.rank()).map(|k| if k == i { None } else { Some(if k < i { k } else { k - 1 }) }).collect();
        cols = new_cols.iter().map(|v| v.remap(&map, f)).collect();
        col_degs = new_degs;
        to_new = to_new.iter().map(|v| v.remap(&map, f)).collect();
        target.degrees.remove(i);
        orig.remove(i);
    }
    let pres = GradedMap::new_unchecked(ring, FreeModule::new(col_degs), target.clone(), cols);
    let pres = groebner::minimal_generators(&pres);
    let module = FPModule::coker(pres);
    let to_new = GradedMap::new_unchecked(ring, m.pres.target.clone(), target.clone(), to_new);
    let to_old = GradedMap::new_unchecked(
        ring,
        target,
        m.pres.target.clone(),
        orig.iter().map(|&k| Vector::basis(k)).collect(),
    );
    Minimalized { module, to_new, to_old }
}

fn unit_at(ring: Ring, i: usize, p: &Poly) -> Vec<Poly> {
    let mut v = vec![Poly::zero(ring); i + 1];
    v[i] = p.clone();
    v
}

/// Generators of `I ∩ J`.
pub fn intersect_ideals(ring: Ring, a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    let mut cols: Vec<Vector> = a.iter().map(|p| Vector::from_polys(std::slice::from_ref(p))).collect();
    cols.extend(b.iter().map(|p| Vector::from_polys(std::slice::from_ref(p))));
    let m = GradedMap::from_columns(ring, FreeModule::new(vec![0]), cols, 0).expect("homogeneous");
    let ker = groebner::kernel(&m);
    let k = a.len();
    let head = GradedMap::from_columns(
        ring,
        FreeModule::new(vec![0]),
        a.iter().map(|p| Vector::from_polys(std::slice::from_ref(p))).collect(),
        0,
    )
    .expect("homogeneous");
    ker.cols
        .iter()
        .map(|c| head.apply(&c.restrict(0, k)).component(ring, 0))
        .filter(|p| !p.is_zero())
        .collect()
}

pub fn minimal_ideal_generators(ring: Ring, gens: &[Poly]) -> Vec<Poly> {
    let vs: Vec<Vector> = gens.iter().map(|p| Vector::from_polys(std::slice::from_ref(p))).collect();
    let idx = groebner::minimal_generator_indices(ring, &FreeModule::new(vec![0]), &vs);
    idx.into_iter().map(|i| gens[i].clone()).collect()
}

/// Degree-zero homomorphism of finitely presented modules, given on generators.
#[derive(Clone, Debug)]
pub struct ModHom {
    pub source: FPModule,
    pub target: FPModule,
    /// `F0(source) -> F0(target)`; column k is the image of generator k.
    pub matrix: GradedMap,
}

impl ModHom {
    /// Checks that relations of the source map into relations of the target.
    pub fn new(source: FPModule, target: FPModule, matrix: GradedMap) -> Result<Self> {
        if &matrix.source != source.generators() || &matrix.target != target.generators() {
            return invariant("map does not match generator modules");
        }
        for c in &source.pres.cols {
            if !target.is_zero_element(&matrix.apply(c)) {
                return precondition("map is not well defined on relations");
            }
        }
        Ok(ModHom { source, target, matrix })
    }

    pub(crate) fn new_unchecked(source: FPModule, target: FPModule, matrix: GradedMap) -> Self {
        ModHom { source, target, matrix }
    }

    pub fn identity(m: &FPModule) -> Self {
        ModHom::new_unchecked(m.clone(), m.clone(), GradedMap::identity(m.ring(), m.generators().clone()))
    }

    pub fn zero(source: &FPModule, target: &FPModule) -> Self {
        let mat = GradedMap::zero(source.ring(), source.generators().clone(), target.generators().clone());
        ModHom::new_unchecked(source.clone(), target.clone(), mat)
    }

    /// `self ∘ o`.
    pub fn compose(&self, o: &ModHom) -> Result<ModHom> {
        let mat = self.matrix.compose(&o.matrix)?;
        Ok(ModHom::new_unchecked(o.source.clone(), self.target.clone(), mat))
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.cols.iter().all(|c| self.target.is_zero_element(c))
    }

    /// Preimage of the target relations: generators of `{x ∈ F0 : φ(x) = 0 in target}`.
    fn kernel_lift(&self) -> Vec<Vector> {
        let big = self.matrix.hstack(&self.target.pres).expect("common target");
        let ker = groebner::minimal_kernel(&big);
        let k = self.matrix.ncols();
        ker.cols.iter().map(|c| c.restrict(0, k)).filter(|c| !c.is_zero()).collect()
    }

    /// Kernel as a module together with its inclusion into the source.
    pub fn kernel(&self) -> (FPModule, ModHom) {
        let ring = self.source.ring();
        let gens = self.kernel_lift();
        let f0 = self.source.generators();
        let km = FPModule::subquotient(ring, f0, &gens, &self.source.pres.cols).expect("homogeneous");
        let incl = GradedMap::from_columns(ring, f0.clone(), gens, 0).expect("homogeneous");
        let incl = GradedMap::new_unchecked(ring, km.generators().clone(), f0.clone(), incl.cols);
        (km.clone(), ModHom::new_unchecked(km, self.source.clone(), incl))
    }

    pub fn image(&self) -> FPModule {
        let ring = self.source.ring();
        FPModule::subquotient(ring, self.target.generators(), &self.matrix.cols, &self.target.pres.cols)
            .expect("homogeneous")
    }

    pub fn cokernel(&self) -> FPModule {
        FPModule::coker(self.target.pres.hstack(&self.matrix).expect("common target"))
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().0.is_zero()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().is_zero()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_surjective() && self.source.hilbert_series() == self.target.hilbert_series()
    }

    pub fn scale(&self, c: u32) -> ModHom {
        ModHom::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.scale(c))
    }

    pub fn add(&self, o: &ModHom) -> Result<ModHom> {
        Ok(ModHom::new_unchecked(self.source.clone(), self.target.clone(), self.matrix.add(&o.matrix)?))
    }

    /// Transfer along minimalizations of source and target.
    pub fn through(&self, src: &Minimalized, tgt: &Minimalized) -> ModHom {
        let mat = tgt.to_new.compose(&self.matrix).and_then(|m| m.compose(&src.to_old)).expect("shapes");
        ModHom::new_unchecked(src.module.clone(), tgt.module.clone(), mat)
    }
}

/// `(N :_F m)` for a submodule `N ⊆ F` given by generators.
pub fn quotient_by_maximal(ring: Ring, free: &FreeModule, gens: &[Vector]) -> Vec<Vector> {
    let f = ring.field();
    let nv = ring.nvars;
    let r = free.rank();
    let block = FreeModule::new(free.degrees.iter().map(|d| d - 1).collect());
    let mut big_target = FreeModule::default();
    for _ in 0..nv {
        big_target = big_target.sum(&block);
    }
    let mut cols = Vec::new();
    for k in 0..r {
        let mut v = Vector::zero();
        for i in 0..nv {
            let x = Poly::var(ring, i);
            v = v.add(&Vector::basis(i * r + k).mul_poly(&x), f);
        }
        cols.push(v);
    }
    for i in 0..nv {
        for g in gens {
            cols.push(g.shift(i * r));
        }
    }
    let m = GradedMap::from_columns(ring, big_target, cols, 0).expect("homogeneous");
    let ker = groebner::kernel(&m);
    let out: Vec<Vector> = ker.cols.iter().map(|c| c.restrict(0, r)).filter(|c| !c.is_zero()).collect();
    let map = GradedMap::from_columns(ring, free.clone(), out, 0).expect("homogeneous");
    groebner::minimal_generators(&map).cols
}

/// Saturation `(N :_F m^∞)`.
pub fn saturate(ring: Ring, free: &FreeModule, gens: &[Vector]) -> Vec<Vector> {
    let mut cur = gens.to_vec();
    loop {
        let gb = GroebnerBasis::new(ring, free, &cur);
        let next = quotient_by_maximal(ring, free, &cur);
        if gb.contains_all(&next) {
            return cur;
        }
        cur = next;
    }
}

pub fn saturate_ideal(ring: Ring, gens: &[Poly]) -> Vec<Poly> {
    let vs: Vec<Vector> = gens.iter().map(|p| Vector::from_polys(std::slice::from_ref(p))).collect();
    let f = FreeModule::new(vec![0]);
    saturate(ring, &f, &vs).iter().map(|v| v.component(ring, 0)).collect()
}
