//! Minimal q-presentations `0 -> P -> E -> M -> 0` and the exact sequence of
//! Eilenberg-MacLane modules attached to an ideal.
//!
//! A q-presentation has `pd P < q` and `H^j_m(E) = 0` for `dim R - q <= j < dim R`.
//! The construction is inductive in `q`: take a minimal presentation
//! `0 -> L -> F0 -> M -> 0`, a minimal `(q-1)`-presentation `0 -> Q -> G -> L -> 0`,
//! extend `G -> F0` by a minimal generating set of `G* / (g_1, ..., g_m)` and read off
//! `P` and `E` as cokernels.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{invariant, precondition, Error, Result};
use crate::free::{FreeModule, GradedMap, Term, Vector};
use crate::groebner::{self, HilbertSeries};
use crate::homological::LocalCohomology;
use crate::module::{FPModule, ModHom};
use crate::poly::{Poly, Ring};

/// Raw output of the construction, aligned with the generators of `M`.
#[derive(Debug)]
pub(crate) struct Raw {
    /// Generators of `E`; the first `head` of them map to the generators of `M`.
    free_e: FreeModule,
    head: usize,
    e_rels: Vec<Vector>,
    /// Relations of `P`, on the generators `head..` of `free_e`.
    p_rels: Vec<Vector>,
}

impl Raw {
    fn p_free(&self) -> FreeModule {
        FreeModule::new(self.free_e.degrees[self.head..].to_vec())
    }
}

/// `0 -> P -> E -> M -> 0`.
#[derive(Clone, Debug)]
pub struct QPresentation {
    pub q: usize,
    pub module: FPModule,
    pub p: FPModule,
    pub e: FPModule,
    pub inject: ModHom,
    pub project: ModHom,
    /// Degrees of the generators of `E` that do not come from generators of `M`.
    pub added_degrees: Vec<i32>,
}

impl QPresentation {
    pub fn is_trivial(&self) -> bool {
        self.p.is_zero()
    }

    /// Add the same free summand `R(-d)` to `P` and `E`, mapped identically.
    pub fn pad_free_summand(&self, d: i32) -> QPresentation {
        let ring = self.module.ring();
        let rf = FPModule::free(ring, vec![d]);
        let p = self.p.direct_sum(&rf);
        let e = self.e.direct_sum(&rf);
        let np = self.p.num_generators();
        let ne = self.e.num_generators();
        let mut cols: Vec<Vector> = self.inject.matrix.cols.clone();
        cols.push(Vector::basis(ne));
        let inject = ModHom::new_unchecked(
            p.clone(),
            e.clone(),
            GradedMap::new_unchecked(ring, p.generators().clone(), e.generators().clone(), cols),
        );
        let mut pcols = self.project.matrix.cols.clone();
        pcols.push(Vector::zero());
        let project = ModHom::new_unchecked(
            e.clone(),
            self.module.clone(),
            GradedMap::new_unchecked(ring, e.generators().clone(), self.module.generators().clone(), pcols),
        );
        let _ = np;
        QPresentation {
            q: self.q,
            module: self.module.clone(),
            p,
            e,
            inject,
            project,
            added_degrees: self.added_degrees.iter().copied().chain([d]).collect(),
        }
    }
}

fn trivial_raw(m: &FPModule) -> Raw {
    Raw {
        free_e: m.generators().clone(),
        head: m.num_generators(),
        e_rels: m.presentation().cols.iter().filter(|c| !c.is_zero()).cloned().collect(),
        p_rels: Vec::new(),
    }
}

/// Memoized construction on a minimally presented module.
fn build(m: &FPModule, q: usize) -> Result<Arc<Raw>> {
    if let Some(r) = m.qpres_memo().lock().expect("memo lock").get(&q) {
        return Ok(r.clone());
    }
    let r = Arc::new(build_uncached(m, q)?);
    m.qpres_memo().lock().expect("memo lock").insert(q, r.clone());
    Ok(r)
}

fn build_uncached(m: &FPModule, q: usize) -> Result<Raw> {
    let ring = m.ring();
    let f = ring.field();
    let nv = ring.nvars;
    let d1 = m.presentation();
    if q == 0 || d1.ncols() == 0 {
        return Ok(trivial_raw(m));
    }
    match m.krull_dim() {
        None => return Ok(trivial_raw(m)),
        Some(dim) if q + dim < nv => return Ok(trivial_raw(m)),
        _ => {}
    }
    let f0 = m.generators().clone();
    let head = f0.rank();
    // L = im(d1) = F1 / im(d2), minimally presented.
    let l = FPModule::coker(groebner::minimal_kernel(d1));
    let lraw = build(&l, q - 1)?;
    let free_g = &lraw.free_e;
    let head_l = lraw.head;
    let gpres = GradedMap::from_columns(ring, free_g.clone(), lraw.e_rels.clone(), 0)?;
    let z = groebner::minimal_kernel(&gpres.transpose());
    let gdual = free_g.dual();
    // g_j: the j-th row of G -> L -> F0, as elements of G* inside F_G*.
    let gs: Vec<Vector> = (0..head)
        .map(|j| {
            let mut terms = Vec::new();
            for (k, col) in d1.cols.iter().enumerate().take(head_l) {
                for (mon, c) in col.component(ring, j).terms() {
                    terms.push(Term { mon: *mon, comp: k as u32, coef: *c });
                }
            }
            Vector::from_terms(f, terms)
        })
        .collect();
    let quotient = FPModule::subquotient(ring, &gdual, &z.cols, &gs)?;
    let chosen: Vec<usize> = quotient
        .minimalize()
        .to_old
        .cols
        .iter()
        .map(|c| c.terms()[0].comp as usize)
        .collect();
    let mut degs: Vec<i32> = f0.degrees.iter().map(|d| -d).collect();
    let mut rows = gs;
    for &c in &chosen {
        rows.push(z.cols[c].clone());
        degs.push(z.source.degrees[c]);
    }
    let h = GradedMap::new_unchecked(ring, FreeModule::new(degs), gdual, rows);
    let ht = h.transpose();
    let mut free_e = ht.target.clone();
    let s = free_e.rank();
    let mut e_rels: Vec<Vector> = ht.cols.iter().filter(|c| !c.is_zero()).cloned().collect();
    let mut p_rels = Vec::new();
    for col in &ht.cols[head_l..] {
        if !col.restrict(0, head).is_zero() {
            return invariant("image of Q meets the generators of M");
        }
        let r = col.restrict(head, s);
        if !r.is_zero() {
            p_rels.push(r);
        }
    }
    // Split off free summands shared by P and E.
    loop {
        let extra = free_e.rank() - head;
        if extra == 0 {
            break;
        }
        let duals: Vec<Vector> = if e_rels.is_empty() {
            (head..free_e.rank()).map(Vector::basis).collect()
        } else {
            let epres = GradedMap::from_columns(ring, free_e.clone(), e_rels.clone(), 0)?;
            groebner::minimal_kernel(&epres.transpose()).cols
        };
        let hit = (0..extra).find(|&k| duals.iter().any(|l| l.constant_at(head + k) != 0));
        let Some(k) = hit else { break };
        let drop = head + k;
        let map: Vec<Option<usize>> =
            (0..free_e.rank()).map(|i| if i == drop { None } else { Some(if i < drop { i } else { i - 1 }) }).collect();
        e_rels = e_rels.iter().map(|v| v.remap(&map, f)).filter(|v| !v.is_zero()).collect();
        let pmap: Vec<Option<usize>> =
            (0..extra).map(|i| if i == k { None } else { Some(if i < k { i } else { i - 1 }) }).collect();
        p_rels = p_rels.iter().map(|v| v.remap(&pmap, f)).filter(|v| !v.is_zero()).collect();
        free_e.degrees.remove(drop);
    }
    Ok(Raw { free_e, head, e_rels, p_rels })
}

/// Minimal q-presentation of `m` for `1 <= q <= dim R`.
pub fn q_presentation(m: &FPModule, q: usize) -> Result<QPresentation> {
    let ring = m.ring();
    if q == 0 || q > ring.nvars {
        return Err(Error::Precondition(format!("q must lie in 1..={}, got {q}", ring.nvars)));
    }
    let min = m.minimalize();
    let raw = build(&min.module, q)?;
    let e_pres = GradedMap::from_columns(ring, raw.free_e.clone(), raw.e_rels.clone(), 0)?;
    let e = FPModule::coker(e_pres);
    let p_pres = GradedMap::from_columns(ring, raw.p_free(), raw.p_rels.clone(), 0)?;
    let p = FPModule::coker(p_pres);
    let inject = GradedMap::new_unchecked(
        ring,
        raw.p_free(),
        raw.free_e.clone(),
        (raw.head..raw.free_e.rank()).map(Vector::basis).collect(),
    );
    let to_min = GradedMap::new_unchecked(
        ring,
        raw.free_e.clone(),
        min.module.generators().clone(),
        (0..raw.free_e.rank()).map(|i| if i < raw.head { Vector::basis(i) } else { Vector::zero() }).collect(),
    );
    let project = min.to_old.compose(&to_min)?;
    Ok(QPresentation {
        q,
        module: m.clone(),
        inject: ModHom::new_unchecked(p.clone(), e.clone(), inject),
        project: ModHom::new_unchecked(e.clone(), m.clone(), project),
        p,
        e,
        added_degrees: raw.free_e.degrees[raw.head..].to_vec(),
    })
}

/// Exactness of `0 -> P -> E -> M -> 0`; `None` if exact.
pub fn exactness_failure(p: &FPModule, e: &FPModule, m: &FPModule, inject: &ModHom, project: &ModHom) -> Option<String> {
    if ModHom::new(p.clone(), e.clone(), inject.matrix.clone()).is_err() {
        return Some("P -> E is not well defined".into());
    }
    if ModHom::new(e.clone(), m.clone(), project.matrix.clone()).is_err() {
        return Some("E -> M is not well defined".into());
    }
    match project.compose(inject) {
        Ok(c) if c.is_zero() => {}
        _ => return Some("composite P -> M is not zero".into()),
    }
    if !inject.is_injective() {
        return Some("P -> E is not injective".into());
    }
    if !project.is_surjective() {
        return Some("E -> M is not surjective".into());
    }
    let sum: HilbertSeries = p.hilbert_series().add(m.hilbert_series());
    if &sum != e.hilbert_series() {
        return Some("Hilbert series of E differs from P + M".into());
    }
    None
}

/// Projective dimension; `None` for the zero module.
pub fn projective_dimension(m: &FPModule) -> Option<usize> {
    if m.is_zero() {
        return None;
    }
    Some(m.resolution().length())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub module: String,
    pub j: usize,
    pub t: i32,
    pub expected: i64,
    pub found: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DistributionReport {
    pub q: usize,
    pub window: (i32, i32),
    /// Why the sequence is not a q-presentation at all.
    pub precheck: Option<String>,
    pub mismatches: Vec<Mismatch>,
}

impl DistributionReport {
    pub fn passed(&self) -> bool {
        self.precheck.is_none() && self.mismatches.is_empty()
    }
}

/// Check how a q-presentation distributes the cohomology of `M` over `P` and `E`:
/// `H^j(E) = H^j(M)` below the band `dim R - q <= j < dim R`, zero in it;
/// `H^j(P) = 0` for `j <= dim R - q` and `H^j(P) = H^{j-1}(M)` above.
pub fn verify_distribution(qp: &QPresentation, window: (i32, i32)) -> Result<DistributionReport> {
    let mut report = DistributionReport { q: qp.q, window, precheck: None, mismatches: Vec::new() };
    if let Some(why) = exactness_failure(&qp.p, &qp.e, &qp.module, &qp.inject, &qp.project) {
        report.precheck = Some(why);
        return Ok(report);
    }
    if let Some(pd) = projective_dimension(&qp.p) {
        if pd >= qp.q {
            report.precheck = Some(format!("pd P = {pd} is not below q = {}", qp.q));
            return Ok(report);
        }
    }
    let nv = qp.module.ring().nvars;
    let band = nv - qp.q;
    let hm = LocalCohomology::new(&qp.module)?;
    let he = LocalCohomology::new(&qp.e)?;
    let hp = LocalCohomology::new(&qp.p)?;
    let mut push = |module: &str, j: usize, t: i32, expected: i64, found: i64| {
        if expected != found {
            report.mismatches.push(Mismatch { module: module.into(), j, t, expected, found });
        }
    };
    for j in 0..nv {
        if j < band {
            for t in window.0..=window.1 {
                push("E", j, t, hm.dim(j, t), he.dim(j, t));
            }
        } else if !he.vanishes(j) {
            let t = he.top_degree(j).unwrap_or(0);
            push("E", j, t, 0, he.dim(j, t).max(1));
        }
        if j <= band {
            if !hp.vanishes(j) {
                let t = hp.top_degree(j).unwrap_or(0);
                push("P", j, t, 0, hp.dim(j, t).max(1));
            }
        } else {
            for t in window.0..=window.1 {
                push("P", j, t, hm.dim(j - 1, t), hp.dim(j, t));
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct MinimalityReport {
    pub minimal: bool,
    /// `(generator of P, its degree)` sent by `P -> E` onto a free direct summand of `E`.
    pub common_summand: Option<(usize, i32)>,
    /// For `q = 1`: `(rank P, number of minimal generators of Ext^1(M, R))`.
    pub rank_check: Option<(i64, usize)>,
}

/// Generic rank of a module (zero unless it has full dimension).
pub fn generic_rank(m: &FPModule) -> i64 {
    let hs = m.hilbert_series();
    if hs.dimension() == Some(m.ring().nvars) {
        hs.multiplicity()
    } else {
        0
    }
}

fn pair(ring: Ring, lambda: &Vector, v: &Vector) -> Poly {
    let mut acc = Poly::zero(ring);
    for t in v.terms() {
        let l = lambda.component(ring, t.comp as usize);
        if !l.is_zero() {
            acc = acc.add(&l.mul_term(&t.mon, t.coef)).expect("same ring");
        }
    }
    acc
}

/// `P` and `E` share a free summand mapped isomorphically iff some functional on `E`
/// sends the image of some generator of `P` to a unit.
pub fn is_minimal_qpres(qp: &QPresentation) -> Result<MinimalityReport> {
    let ring = qp.module.ring();
    let duals = groebner::minimal_kernel(&qp.e.presentation().transpose());
    let mut common = None;
    'outer: for (k, v) in qp.inject.matrix.cols.iter().enumerate() {
        for l in &duals.cols {
            if let Some(c) = pair(ring, l, v).as_constant() {
                if c != 0 {
                    common = Some((k, qp.p.generators().degrees[k]));
                    break 'outer;
                }
            }
        }
    }
    let rank_check = if qp.q == 1 {
        let ext1 = &qp.module.ext()[1];
        Some((generic_rank(&qp.p), ext1.minimal().num_generators()))
    } else {
        None
    };
    let rank_ok = rank_check.map(|(r, g)| r == g as i64).unwrap_or(true);
    Ok(MinimalityReport { minimal: common.is_none() && rank_ok, common_summand: common, rank_check })
}

/// How a module in the sequence sits with respect to local cohomology.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DepthLabel {
    Free,
    MaximalCohenMacaulay,
    /// Only `H^depth_m` and the top local cohomology are nonzero.
    EilenbergMacLane(usize),
    Other,
}

pub fn depth_label(m: &FPModule) -> Result<DepthLabel> {
    if m.is_free() {
        return Ok(DepthLabel::Free);
    }
    let nv = m.ring().nvars;
    let h = LocalCohomology::new(m)?;
    let nonzero: Vec<usize> = (0..nv).filter(|&j| !h.vanishes(j)).collect();
    Ok(match nonzero.as_slice() {
        [] => DepthLabel::MaximalCohenMacaulay,
        [j] => DepthLabel::EilenbergMacLane(*j),
        _ => DepthLabel::Other,
    })
}

/// `0 -> E_s -> ... -> E_1 -> I -> 0`.
#[derive(Clone, Debug)]
pub struct EMSequence {
    pub ideal: FPModule,
    pub codim: usize,
    pub s: usize,
    /// `modules[i]` is `E_{i+1}`.
    pub modules: Vec<FPModule>,
    /// `maps[0]: E_1 -> I`, `maps[i]: E_{i+1} -> E_i`.
    pub maps: Vec<ModHom>,
    /// The kernels `P_k` met along the way.
    pub witnesses: Vec<FPModule>,
}

fn quotient_cohomology(ring: Ring, gens: &[Poly]) -> Result<LocalCohomology> {
    LocalCohomology::new(&FPModule::quotient_ring(ring, gens)?)
}

pub fn is_saturated(ring: Ring, gens: &[Poly]) -> bool {
    let sat = crate::module::saturate_ideal(ring, gens);
    let vs: Vec<Vector> = gens.iter().map(|p| Vector::from_polys(std::slice::from_ref(p))).collect();
    let gb = groebner::GroebnerBasis::new(ring, &FreeModule::new(vec![0]), &vs);
    sat.iter().all(|p| gb.contains(&Vector::from_polys(std::slice::from_ref(p))))
}

/// Codimension of `R/I` in `R`.
pub fn codimension(ring: Ring, gens: &[Poly]) -> Result<usize> {
    let a = FPModule::quotient_ring(ring, gens)?;
    match a.krull_dim() {
        Some(d) => Ok(ring.nvars - d),
        None => Err(Error::Precondition("the ideal is the unit ideal".into())),
    }
}

/// `s = min { k >= c : H^j(R/I) = 0 for k + 1 <= j <= n - k }`.
pub fn em_length(ring: Ring, gens: &[Poly]) -> Result<usize> {
    let c = codimension(ring, gens)?;
    let n = ring.nvars - 1;
    let h = quotient_cohomology(ring, gens)?;
    let mut k = c;
    while !(k + 1..=n.saturating_sub(k)).all(|j| h.vanishes(j)) {
        k += 1;
    }
    Ok(k)
}

fn free_cover(m: &FPModule) -> (FPModule, ModHom) {
    let min = m.minimalize();
    let free = FPModule::free(m.ring(), min.module.generators().degrees.clone());
    let cover = ModHom::new_unchecked(free.clone(), m.clone(), min.to_old.clone());
    (free, cover)
}

/// The sequence of Eilenberg-MacLane modules of a saturated ideal of codimension at least two,
/// built by splicing minimal q-presentations and, when `dim R/I < codim`, a free resolution.
pub fn em_sequence(ring: Ring, gens: &[Poly]) -> Result<EMSequence> {
    if !is_saturated(ring, gens) {
        return precondition("ideal is not saturated; saturate it first");
    }
    let c = codimension(ring, gens)?;
    let n = ring.nvars - 1;
    if c < 2 {
        return precondition(&format!("codimension must be at least 2, got {c}"));
    }
    let ideal = FPModule::ideal(ring, gens)?;
    let s = em_length(ring, gens)?;
    let d = n + 1 - c;
    let mut modules = Vec::new();
    let mut maps = Vec::new();
    let mut witnesses = Vec::new();
    let append_resolution = |p: &FPModule, inject: &ModHom, modules: &mut Vec<FPModule>, maps: &mut Vec<ModHom>| {
        let (cover_mod, cover) = free_cover(p);
        let res = p.minimal().resolution().clone();
        modules.push(cover_mod.clone());
        maps.push(inject.compose(&cover).expect("shapes"));
        let mut prev = cover_mod;
        for map in &res.maps {
            let next = FPModule::free(ring, map.source.degrees.clone());
            maps.push(ModHom::new_unchecked(next.clone(), prev.clone(), map.clone()));
            modules.push(next.clone());
            prev = next;
        }
    };
    if d == 1 {
        let qp = q_presentation(&ideal, n - 1)?;
        modules.push(qp.e.clone());
        maps.push(qp.project.clone());
        witnesses.push(qp.p.clone());
        if !qp.p.is_zero() {
            append_resolution(&qp.p, &qp.inject, &mut modules, &mut maps);
        }
    } else {
        let qp = q_presentation(&ideal, n - 2)?;
        modules.push(qp.e.clone());
        maps.push(qp.project.clone());
        witnesses.push(qp.p.clone());
        let mut p_prev = qp.p;
        let mut inj_prev = qp.inject;
        let kmax = if d < c { d } else { s };
        for k in 3..=kmax {
            let qk = q_presentation(&p_prev, n + 2 - 2 * k)?;
            modules.push(qk.e.clone());
            maps.push(inj_prev.compose(&qk.project)?);
            witnesses.push(qk.p.clone());
            p_prev = qk.p;
            inj_prev = qk.inject;
        }
        if d < c {
            append_resolution(&p_prev, &inj_prev, &mut modules, &mut maps);
        } else if !p_prev.is_zero() {
            modules.push(p_prev.clone());
            maps.push(inj_prev);
        }
    }
    Ok(EMSequence { ideal, codim: c, s, modules, maps, witnesses })
}

#[derive(Clone, Debug, Serialize)]
pub struct EMReport {
    pub exact: Option<String>,
    pub labels: Vec<DepthLabel>,
    pub label_failures: Vec<usize>,
    pub mismatches: Vec<Mismatch>,
}

impl EMReport {
    pub fn passed(&self) -> bool {
        self.exact.is_none() && self.label_failures.is_empty() && self.mismatches.is_empty()
    }
}

/// Exactness of a chain `... -> C_2 -> C_1 -> C_0 -> 0`, given `maps[i]: C_{i+1} -> C_i`,
/// with the last map injective.
pub fn chain_exactness_failure(maps: &[ModHom]) -> Option<String> {
    if let Some(first) = maps.first() {
        if !first.is_surjective() {
            return Some("first map is not surjective".into());
        }
    }
    for i in 1..maps.len() {
        match maps[i - 1].compose(&maps[i]) {
            Ok(c) if c.is_zero() => {}
            _ => return Some(format!("composite at position {i} is not zero")),
        }
        let (ker, _) = maps[i - 1].kernel();
        let im = maps[i].image();
        if ker.hilbert_series() != im.hilbert_series() {
            return Some(format!("homology at position {i}"));
        }
    }
    if let Some(last) = maps.last() {
        if !last.is_injective() {
            return Some("last map is not injective".into());
        }
    }
    None
}

/// Exactness, depth labels (`E_i` free, maximal Cohen-Macaulay or Eilenberg-MacLane of depth `2i`)
/// and `H^{2i}(E_i) = H^i(R/I)` in the window for `i <= min(n - c, s)`.
pub fn verify_em_sequence(seq: &EMSequence, ring: Ring, gens: &[Poly], window: (i32, i32)) -> Result<EMReport> {
    let exact = chain_exactness_failure(&seq.maps);
    let n = ring.nvars - 1;
    let ha = quotient_cohomology(ring, gens)?;
    let mut labels = Vec::new();
    let mut label_failures = Vec::new();
    let mut mismatches = Vec::new();
    for (idx, e) in seq.modules.iter().enumerate() {
        let i = idx + 1;
        let label = depth_label(e)?;
        let ok = match label {
            DepthLabel::Free | DepthLabel::MaximalCohenMacaulay => true,
            DepthLabel::EilenbergMacLane(j) => j == 2 * i,
            DepthLabel::Other => false,
        };
        if !ok {
            label_failures.push(i);
        }
        labels.push(label);
        if i <= (n - seq.codim).min(seq.s) && 2 * i <= n {
            let he = LocalCohomology::new(e)?;
            for t in window.0..=window.1 {
                let (a, b) = (ha.dim(i, t), he.dim(2 * i, t));
                if a != b {
                    mismatches.push(Mismatch { module: format!("E{i}"), j: 2 * i, t, expected: a, found: b });
                }
            }
        }
    }
    Ok(EMReport { exact, labels, label_failures, mismatches })
}

/// Hilbert series lookup helper for reports.
pub fn degree_counts(degrees: &[i32]) -> Vec<(i32, usize)> {
    let mut h: HashMap<i32, usize> = HashMap::new();
    for &d in degrees {
        *h.entry(d).or_default() += 1;
    }
    let mut v: Vec<(i32, usize)> = h.into_iter().collect();
    v.sort();
    v
}
