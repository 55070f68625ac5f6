//! Syzygy modules `G_i` of the residue field, Buchsbaum tests and Omega-resolutions.
//!
//! One indexing table is used everywhere:
//!
//! | sheaf side                 | module side         | cohomology                                        |
//! |----------------------------|---------------------|---------------------------------------------------|
//! | `Ω^p(-e)`                  | `G_{p+1}(-e)`       | generators: `C(n+1, p+1)` in degree `p + 1 + e`   |
//! | summand `(p, e, s)`        | `G_{p+1}(-e)^s`     | `s = dim [H^{p+1}_m(I)]_e = dim [H^p_m(A)]_e`     |
//! | weak level `i`, `(2i-1, e, s)` | `G_{2i}(-e)^s`  | `s = dim [H^i_m(A)]_e`                            |
//!
//! Free summands are recorded by generator degree: `d` stands for `O(-d)`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{invariant, precondition, Error, Result};
use crate::free::{FreeModule, GradedMap, Term, Vector};
use crate::groebner::GraphBasis;
use crate::hom::{random_iso_test, IsoVerdict};
use crate::homological::{BettiTable, CohomologyTable, LocalCohomology, Resolution};
use crate::linalg::Matrix;
use crate::module::{FPModule, ModHom};
use crate::monomial::{binomial, Monomial};
use crate::poly::Ring;
use crate::qpres::{self, chain_exactness_failure, EMSequence, QPresentation};
use crate::scheme::Subscheme;

/// Increasing `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..n {
            cur.push(v);
            rec(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Koszul differential `∧^k R^{n+1}(-k) -> ∧^{k-1} R^{n+1}(-k+1)`,
/// `e_S ↦ Σ (-1)^pos x_{s_pos} e_{S \ s_pos}`.
pub fn koszul_map(ring: Ring, k: usize) -> Result<GradedMap> {
    let nv = ring.nvars;
    if k == 0 || k > nv {
        return Err(Error::Precondition(format!("Koszul index must lie in 1..={nv}, got {k}")));
    }
    let f = ring.field();
    let src = subsets(nv, k);
    let tgt = subsets(nv, k - 1);
    let index: HashMap<&Vec<usize>, usize> = tgt.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let cols = src
        .iter()
        .map(|s| {
            let terms = s
                .iter()
                .enumerate()
                .map(|(pos, &v)| {
                    let mut rest = s.clone();
                    rest.remove(pos);
                    let coef = if pos % 2 == 0 { 1 } else { f.neg(1) };
                    Term { mon: Monomial::var(v), comp: index[&rest] as u32, coef }
                })
                .collect();
            Vector::from_terms(f, terms)
        })
        .collect();
    Ok(GradedMap::new_unchecked(
        ring,
        FreeModule::new(vec![k as i32; src.len()]),
        FreeModule::new(vec![k as i32 - 1; tgt.len()]),
        cols,
    ))
}

/// `G_i`, the `i`-th syzygy module of the residue field; `G~_i = Ω^{i-1}`.
#[derive(Clone, Debug)]
pub struct GModule {
    pub i: usize,
    pub module: FPModule,
}

type GCache = Mutex<HashMap<(u32, usize, usize), FPModule>>;

fn g_cache() -> &'static GCache {
    static CACHE: OnceLock<GCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `G_i = coker(∧^{i+1} -> ∧^i)` for `1 <= i <= n + 1`; `G_{n+1} = R(-n-1)`.
pub fn g_module(ring: Ring, i: usize) -> Result<GModule> {
    let nv = ring.nvars;
    if i == 0 || i > nv {
        return Err(Error::Precondition(format!("G_i needs 1 <= i <= {nv}, got {i}")));
    }
    let key = (ring.p, nv, i);
    if let Some(m) = g_cache().lock().expect("cache lock").get(&key) {
        return Ok(GModule { i, module: m.clone() });
    }
    let module = if i == nv {
        FPModule::free(ring, vec![nv as i32])
    } else {
        FPModule::coker(koszul_map(ring, i + 1)?)
    };
    let count = binomial(nv as i64, i as i64) as usize;
    if module.num_generators() != count || module.generators().degrees.iter().any(|&d| d != i as i32) {
        return invariant(format!("G_{i} does not have {count} generators of degree {i}"));
    }
    g_cache().lock().expect("cache lock").insert(key, module.clone());
    Ok(GModule { i, module })
}

/// `H^i_m(G_i) = K` in degree 0 and no other intermediate cohomology (`i <= n`).
pub fn verify_g_module(g: &GModule) -> Result<bool> {
    let nv = g.module.ring().nvars;
    if g.i == nv {
        return Ok(g.module.is_free());
    }
    let lc = LocalCohomology::new(&g.module)?;
    for j in 0..nv {
        let expect_nonzero = j == g.i;
        if lc.vanishes(j) == expect_nonzero {
            return Ok(false);
        }
    }
    Ok(lc.is_finite_length(g.i) && lc.bottom_degree(g.i) == Some(0) && lc.top_degree(g.i) == Some(0) && lc.dim(g.i, 0) == 1)
}

/// `G_{p+1}(-e)`, the module of twisted `p`-forms.
pub fn omega_module(ring: Ring, p: usize, e: i32) -> Result<FPModule> {
    Ok(g_module(ring, p + 1)?.module.twist(-e))
}

/// Generator degrees of `G_{p+1}(-e)^s`.
fn omega_generator_degrees(nv: usize, p: usize, e: i32, s: usize) -> Vec<i32> {
    let count = binomial(nv as i64, p as i64 + 1) as usize * s;
    vec![p as i32 + 1 + e; count]
}

// ---------------------------------------------------------------------------------------------
// Cohomology of twisted forms.

/// `h^0(Ω^p(k))` on `P^n`.
fn bott_h0(n: i64, p: i64, k: i64) -> i64 {
    if p == 0 {
        return if k >= 0 { binomial(n + k, k) } else { 0 };
    }
    if k > p {
        binomial(k + n - p, k) * binomial(k - 1, p)
    } else {
        0
    }
}

/// Nonzero `(q, h^q(Ω^p(t)))` on `P^n`; only `q ∈ {0, p, n}` can occur.
pub fn bott_cohomology(n: usize, p: usize, t: i32) -> Result<Vec<(usize, i64)>> {
    if p > n {
        return Err(Error::Precondition(format!("p must lie in 0..={n}, got {p}")));
    }
    let (ni, pi, ti) = (n as i64, p as i64, t as i64);
    let mut out: BTreeMap<usize, i64> = BTreeMap::new();
    let h0 = bott_h0(ni, pi, ti);
    if h0 != 0 {
        out.insert(0, h0);
    }
    if n > 0 {
        let hn = bott_h0(ni, ni - pi, -ti);
        if hn != 0 {
            *out.entry(n).or_default() += hn;
        }
    }
    if t == 0 && p > 0 && p < n {
        out.insert(p, 1);
    }
    Ok(out.into_iter().collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct BottTable {
    pub n: usize,
    pub p: usize,
    pub window: (i32, i32),
    /// `(q, t, h^q(Ω^p(t)))`, nonzero values only.
    pub entries: Vec<(usize, i32, i64)>,
}

/// Bott values over a window, each checked against the module `G_{p+1}`:
/// `h^q = dim [H^{q+1}_m(G_{p+1})]_t` for `q >= 1`, and
/// `h^0 = dim [G_{p+1}]_t - dim [H^0_m]_t + dim [H^1_m]_t`.
pub fn bott_table(ring: Ring, p: usize, window: (i32, i32)) -> Result<BottTable> {
    let n = ring.n();
    let g = g_module(ring, p + 1)?;
    let lc = LocalCohomology::new(&g.module)?;
    let mut entries = Vec::new();
    for t in window.0..=window.1 {
        let formula: BTreeMap<usize, i64> = bott_cohomology(n, p, t)?.into_iter().collect();
        for q in 0..=n {
            let module = if q == 0 {
                g.module.graded_dim(t) - lc.dim(0, t) + lc.dim(1, t)
            } else {
                lc.dim(q + 1, t)
            };
            let expected = formula.get(&q).copied().unwrap_or(0);
            if module != expected {
                return invariant(format!(
                    "h^{q}(Ω^{p}({t})) on P^{n}: formula {expected}, module computation {module}"
                ));
            }
            if expected != 0 {
                entries.push((q, t, expected));
            }
        }
    }
    Ok(BottTable { n, p, window, entries })
}

// ---------------------------------------------------------------------------------------------
// Buchsbaum tests.

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasiBuchsbaumVerdict {
    pub quasi_buchsbaum: bool,
    /// First failure: `(i, variable, generator of the dual Ext module)` with `x_var · H^i_m(A) != 0`.
    pub witness: Option<(usize, usize, usize)>,
}

/// `m · H^i_m(A) = 0` for all `i < dim A`.
pub fn quasi_buchsbaum_test(x: &Subscheme) -> Result<QuasiBuchsbaumVerdict> {
    x.require_saturated()?;
    let lc = x.cohomology();
    for i in 0..x.dim_a() {
        if let Some((v, g)) = lc.maximal_ideal_witness(i) {
            return Ok(QuasiBuchsbaumVerdict { quasi_buchsbaum: false, witness: Some((i, v, g)) });
        }
    }
    Ok(QuasiBuchsbaumVerdict { quasi_buchsbaum: true, witness: None })
}

/// Nonzero `(e, dim [H^i_m(A)]_e)` of a finite length row.
fn row_entries(lc: &LocalCohomology, i: usize) -> Result<Vec<(i32, usize)>> {
    if lc.vanishes(i) {
        return Ok(Vec::new());
    }
    let (Some(lo), Some(hi)) = (lc.bottom_degree(i), lc.top_degree(i)) else {
        return precondition(format!("H^{i}_m(R/I) does not have finite length"));
    };
    Ok((lo..=hi).filter_map(|e| {
        let s = lc.dim(i, e);
        (s > 0).then_some((e, s as usize))
    })
    .collect())
}

/// Remove `sub` from `all` as multisets; `None` if `sub` is not contained in `all`.
fn multiset_difference(all: &[i32], sub: &[i32]) -> Option<Vec<i32>> {
    let mut counts: BTreeMap<i32, i64> = BTreeMap::new();
    for &d in all {
        *counts.entry(d).or_default() += 1;
    }
    for &d in sub {
        let c = counts.entry(d).or_default();
        *c -= 1;
        if *c < 0 {
            return None;
        }
    }
    Some(counts.into_iter().flat_map(|(d, c)| std::iter::repeat(d).take(c as usize)).collect())
}

/// `F ⊕ ⊕ G_{p+1}(-e)^s`.
fn decomposition_module(ring: Ring, free: &[i32], omega: &[(usize, i32, usize)]) -> Result<FPModule> {
    let mut parts = vec![FPModule::free(ring, free.to_vec())];
    for &(p, e, s) in omega {
        let g = omega_module(ring, p, e)?;
        for _ in 0..s {
            parts.push(g.clone());
        }
    }
    Ok(FPModule::direct_sum_all(ring, &parts))
}

/// Outcome of deciding `E ≅ F ⊕ ⊕ G_{p+1}(-e)^s`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Decomposition {
    Certified { free: Vec<i32>, trials_used: u32 },
    /// Proof that no such decomposition exists.
    Refuted { reason: String },
    /// No isomorphism found; the decomposition fails with probability at least `1 - error_bound`.
    Inconclusive { trials: u32, error_bound: f64 },
}

fn decompose(e: &FPModule, omega: &[(usize, i32, usize)], trials: u32, seed: u64) -> Result<Decomposition> {
    let ring = e.ring();
    let nv = ring.nvars;
    let degs = e.minimal().generators().degrees.clone();
    let g_degs: Vec<i32> = omega.iter().flat_map(|&(p, e, s)| omega_generator_degrees(nv, p, e, s)).collect();
    let Some(free) = multiset_difference(&degs, &g_degs) else {
        return Ok(Decomposition::Refuted {
            reason: "generator degrees of E do not contain those of the predicted forms".into(),
        });
    };
    let candidate = decomposition_module(ring, &free, omega)?;
    let rep = random_iso_test(e, &candidate, trials, seed)?;
    Ok(match rep.verdict {
        IsoVerdict::Isomorphic => Decomposition::Certified { free, trials_used: rep.trials_used },
        IsoVerdict::NotIsomorphic { reason } => Decomposition::Refuted { reason },
        IsoVerdict::Inconclusive { error_bound } => Decomposition::Inconclusive { trials, error_bound },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum BuchsbaumVerdict {
    ArithmeticallyBuchsbaum,
    NotArithmeticallyBuchsbaum { reason: String },
    /// The decomposition was not found in the allotted trials.
    NotArithmeticallyBuchsbaumProbabilistic { trials: u32, error_bound: f64 },
}

#[derive(Clone, Debug)]
pub struct ArithBuchsbaumReport {
    pub verdict: BuchsbaumVerdict,
    pub quasi: QuasiBuchsbaumVerdict,
    /// Predicted summands `(p, e, s)` read off the cohomology of `A`.
    pub predicted: Vec<(usize, i32, usize)>,
    pub resolution: Option<OmegaResolution>,
}

impl ArithBuchsbaumReport {
    pub fn is_buchsbaum(&self) -> bool {
        self.verdict == BuchsbaumVerdict::ArithmeticallyBuchsbaum
    }
}

fn require_codim(x: &Subscheme) -> Result<usize> {
    let c = x.codim();
    if c < 2 || c > x.n() {
        return Err(Error::Precondition(format!("codimension must lie in 2..={}, got {c}", x.n())));
    }
    Ok(c)
}

/// Decide arithmetic Buchsbaumness through the minimal `(c-1)`-presentation `0 -> P -> E -> I -> 0`:
/// `X` is arithmetically Buchsbaum iff `E ≅ F ⊕ ⊕ G_{p+1}(-e)^s` with `s = dim [H^p_m(A)]_e`.
pub fn arith_buchsbaum_test(x: &Subscheme, trials: u32, seed: u64) -> Result<ArithBuchsbaumReport> {
    x.require_saturated()?;
    let c = require_codim(x)?;
    let n = x.n();
    let quasi = quasi_buchsbaum_test(x)?;
    if !quasi.quasi_buchsbaum {
        let (i, v, _) = quasi.witness.expect("witness");
        return Ok(ArithBuchsbaumReport {
            verdict: BuchsbaumVerdict::NotArithmeticallyBuchsbaum {
                reason: format!("not quasi-Buchsbaum: x{v} acts nontrivially on H^{i}_m(R/I)"),
            },
            quasi,
            predicted: Vec::new(),
            resolution: None,
        });
    }
    let lc = x.cohomology();
    let mut predicted = Vec::new();
    for p in 1..=n - c {
        for (e, s) in row_entries(lc, p)? {
            predicted.push((p, e, s));
        }
    }
    let qp = qpres::q_presentation(&x.ideal, c - 1)?;
    let dec = decompose(&qp.e, &predicted, trials, seed)?;
    let verdict = match &dec {
        Decomposition::Certified { .. } => BuchsbaumVerdict::ArithmeticallyBuchsbaum,
        Decomposition::Refuted { reason } => BuchsbaumVerdict::NotArithmeticallyBuchsbaum { reason: reason.clone() },
        Decomposition::Inconclusive { trials, error_bound } => {
            BuchsbaumVerdict::NotArithmeticallyBuchsbaumProbabilistic { trials: *trials, error_bound: *error_bound }
        }
    };
    let resolution = match dec {
        Decomposition::Certified { free, .. } => Some(assemble_omega_resolution(x, c, free, predicted.clone(), qp)?),
        _ => None,
    };
    Ok(ArithBuchsbaumReport { verdict, quasi, predicted, resolution })
}

fn assemble_omega_resolution(
    x: &Subscheme,
    c: usize,
    f1: Vec<i32>,
    omega: Vec<(usize, i32, usize)>,
    qp: QPresentation,
) -> Result<OmegaResolution> {
    let pmin = qp.p.minimal();
    let pres = pmin.resolution().clone();
    if pres.length() + 2 != c {
        return invariant(format!("pd P = {} but codimension is {c}", pres.length()));
    }
    let mut free = vec![f1];
    for f in &pres.free {
        free.push(f.sorted_degrees());
    }
    let or = OmegaResolution {
        n: x.n(),
        free,
        omega,
        minimal: true,
        maps: Some(OmegaMaps { presentation: qp, p_resolution: pres }),
    };
    if or.rank_balance() != 1 {
        return invariant(format!("alternating rank sum is {}, not 1", or.rank_balance()));
    }
    Ok(or)
}

// ---------------------------------------------------------------------------------------------
// Omega-resolutions.

/// Module-level data behind an Omega-resolution: the `(c-1)`-presentation of `I`
/// and the minimal free resolution of `P`.
#[derive(Clone, Debug)]
pub struct OmegaMaps {
    pub presentation: QPresentation,
    pub p_resolution: Resolution,
}

/// `0 -> F_c -> ... -> F_2 -> F_1 ⊕ ⊕ Ω^{p_j}(-e_j)^{s_j} -> J_X -> 0`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OmegaResolution {
    pub n: usize,
    /// `free[i]` lists the generator degrees of `F_{i+1}`.
    pub free: Vec<Vec<i32>>,
    pub omega: Vec<(usize, i32, usize)>,
    pub minimal: bool,
    #[serde(skip)]
    pub maps: Option<OmegaMaps>,
}

impl PartialEq for OmegaResolution {
    fn eq(&self, o: &Self) -> bool {
        self.n == o.n && self.free == o.free && self.omega == o.omega && self.minimal == o.minimal
    }
}

impl OmegaResolution {
    pub fn codim(&self) -> usize {
        self.free.len()
    }

    /// `Σ (-1)^{i-1} rank F_i + Σ s_j C(n, p_j)`; equals 1 for an ideal sheaf.
    pub fn rank_balance(&self) -> i64 {
        let mut r: i64 = 0;
        for (i, f) in self.free.iter().enumerate() {
            let sign = if i % 2 == 0 { 1 } else { -1 };
            r += sign * f.len() as i64;
        }
        for &(p, _, s) in &self.omega {
            r += s as i64 * binomial(self.n as i64, p as i64);
        }
        r
    }

    /// Sorted free levels and merged, sorted summands.
    pub fn normalized(&self) -> OmegaResolution {
        let free = self.free.iter().map(|f| sorted(f)).collect();
        OmegaResolution { n: self.n, free, omega: merge_summands(&self.omega), minimal: self.minimal, maps: None }
    }
}

fn sorted(v: &[i32]) -> Vec<i32> {
    let mut v = v.to_vec();
    v.sort();
    v
}

fn merge_summands(v: &[(usize, i32, usize)]) -> Vec<(usize, i32, usize)> {
    let mut m: BTreeMap<(usize, i32), usize> = BTreeMap::new();
    for &(p, e, s) in v {
        if s > 0 {
            *m.entry((p, e)).or_default() += s;
        }
    }
    m.into_iter().map(|((p, e), s)| (p, e, s)).collect()
}

/// The minimal Omega-resolution of an arithmetically Buchsbaum subscheme.
pub fn omega_resolution(x: &Subscheme, trials: u32, seed: u64) -> Result<OmegaResolution> {
    let rep = arith_buchsbaum_test(x, trials, seed)?;
    match rep.resolution {
        Some(r) => Ok(r),
        None => Err(Error::Precondition(format!("not arithmetically Buchsbaum: {:?}", rep.verdict))),
    }
}

/// Exactness of `... -> F_3 -> F_2 -> E -> I -> 0` at module level.
pub fn omega_exactness_failure(or: &OmegaResolution) -> Option<String> {
    let Some(maps) = &or.maps else { return Some("no module-level maps".into()) };
    let qp = &maps.presentation;
    let ring = qp.module.ring();
    let pmin = qp.p.minimalize();
    let f2 = FPModule::free(ring, pmin.module.generators().degrees.clone());
    let cover = ModHom::new(f2.clone(), qp.p.clone(), pmin.to_old.clone()).ok()?;
    let mut chain = vec![qp.project.clone(), qp.inject.compose(&cover).ok()?];
    let mut prev = f2;
    for m in &maps.p_resolution.maps {
        let next = FPModule::free(ring, m.source.degrees.clone());
        chain.push(ModHom::new(next.clone(), prev.clone(), m.clone()).ok()?);
        prev = next;
    }
    chain_exactness_failure(&chain)
}

// ---------------------------------------------------------------------------------------------
// Mapping cone.

#[derive(Clone, Debug, Serialize)]
pub struct ConeExpansion {
    /// Betti table of the raw cone, indexed as a resolution of `I`.
    pub raw: BettiTable,
    /// After cancelling units, when module-level maps are available.
    pub minimal: Option<BettiTable>,
    /// `(level, degree, count)` of cancelled pairs between levels `level` and `level + 1`.
    pub cancellations: Vec<(usize, i32, usize)>,
}

/// Betti table (of `I`) of the cone obtained by replacing each `Ω^p(-e)` by its Koszul resolution:
/// level `i` (counted from 1) is `F_i ⊕ ⊕ R(-e-p-i)^{s C(n+1, p+i)}`.
pub fn raw_cone_betti(or: &OmegaResolution) -> BettiTable {
    let nv = or.n as i64 + 1;
    let mut entries = Vec::new();
    for (i, f) in or.free.iter().enumerate() {
        for &d in f {
            entries.push((i, d, 1));
        }
    }
    for &(p, e, s) in &or.omega {
        for i in 1..=(nv as usize) {
            let r = binomial(nv, p as i64 + i as i64);
            if r > 0 {
                entries.push((i - 1, e + p as i32 + i as i32, s * r as usize));
            }
        }
    }
    BettiTable::from_entries(&entries)
}

/// Raw cone, and its minimalization computed from the module-level chain map
/// `res(P) -> res(E)`: the cone of that map resolves `I`, and unit cancellation between
/// levels `k + 1` and `k` removes the rank of the constant part of `φ_k` in each degree.
pub fn mapping_cone_expand(or: &OmegaResolution) -> Result<ConeExpansion> {
    let raw = raw_cone_betti(or);
    let Some(maps) = &or.maps else {
        return Ok(ConeExpansion { raw, minimal: None, cancellations: Vec::new() });
    };
    let qp = &maps.presentation;
    let ring = qp.module.ring();
    let emin = qp.e.minimalize();
    let res_e = emin.module.resolution().clone();
    let pmin = qp.p.minimalize();
    let res_p = &maps.p_resolution;
    if res_e.free[0] != *emin.module.generators() || res_p.free[0] != *pmin.module.generators() {
        return invariant("resolutions do not start at the minimal generators");
    }
    // φ_0: F_2 -> gens of E.
    let phi0 = emin.to_new.compose(&qp.inject.matrix)?.compose(&pmin.to_old)?;
    let mut phis = vec![phi0];
    for k in 1..res_p.free.len() {
        let prev = phis[k - 1].compose(&res_p.maps[k - 1])?;
        let target = res_e.free.get(k).cloned().unwrap_or_default();
        let cols = if k - 1 < res_e.maps.len() {
            let gb = GraphBasis::new(&res_e.maps[k - 1]);
            prev.cols
                .iter()
                .map(|v| gb.lift(v).ok_or_else(|| Error::Invariant(format!("chain map does not lift at level {k}"))))
                .collect::<Result<Vec<_>>>()?
        } else {
            if prev.cols.iter().any(|c| !c.is_zero()) {
                return invariant("chain map reaches past the end of the resolution of E");
            }
            vec![Vector::zero(); prev.ncols()]
        };
        phis.push(GradedMap::new_unchecked(ring, res_p.free[k].clone(), target, cols));
    }
    // Raw module-level cone, indexed as a resolution of I.
    let mut raw_mod = Vec::new();
    for (i, f) in res_e.free.iter().enumerate() {
        for &d in &f.degrees {
            raw_mod.push((i, d, 1));
        }
    }
    for (k, f) in res_p.free.iter().enumerate() {
        for &d in &f.degrees {
            raw_mod.push((k + 1, d, 1));
        }
    }
    let raw_mod = BettiTable::from_entries(&raw_mod);
    if raw_mod != raw {
        return invariant("module-level cone differs from the symbolic cone");
    }
    let f = ring.field();
    let mut min = raw.0.clone();
    let mut cancellations = Vec::new();
    for (k, phi) in phis.iter().enumerate() {
        let mut degrees: Vec<i32> = phi.source.degrees.clone();
        degrees.sort();
        degrees.dedup();
        for d in degrees {
            let src: Vec<usize> = (0..phi.ncols()).filter(|&j| phi.source.degrees[j] == d).collect();
            let tgt: Vec<usize> = (0..phi.nrows()).filter(|&i| phi.target.degrees[i] == d).collect();
            if tgt.is_empty() {
                continue;
            }
            let pos: HashMap<usize, usize> = tgt.iter().enumerate().map(|(a, &b)| (b, a)).collect();
            let rows: Vec<Vec<u32>> = src
                .iter()
                .map(|&j| {
                    let mut r = vec![0u32; tgt.len()];
                    for t in phi.cols[j].terms() {
                        if t.mon.is_one() {
                            if let Some(&a) = pos.get(&(t.comp as usize)) {
                                r[a] = t.coef;
                            }
                        }
                    }
                    r
                })
                .collect();
            let rank = Matrix::from_rows(f, &rows, tgt.len()).rank();
            if rank > 0 {
                cancellations.push((k, d, rank));
                for key in [(k, d), (k + 1, d)] {
                    let v = min.get_mut(&key).expect("cancelled entry present");
                    *v -= rank;
                }
            }
        }
    }
    min.retain(|_, v| *v > 0);
    Ok(ConeExpansion { raw, minimal: Some(BettiTable(min)), cancellations })
}

// ---------------------------------------------------------------------------------------------
// Tor tail.

/// Predicted `β_{i,j}(A)` for `i >= c + 1`: `Tor_i(K, A) = ⊕ K(-e-p-i)^{s C(n+1, p+i)}`.
pub fn tor_tail_predict(or: &OmegaResolution) -> BettiTable {
    let nv = or.n as i64 + 1;
    let c = or.codim();
    let mut entries = Vec::new();
    for &(p, e, s) in &or.omega {
        for i in c + 1..=nv as usize {
            let r = binomial(nv, p as i64 + i as i64);
            if r > 0 {
                entries.push((i, e + p as i32 + i as i32, s * r as usize));
            }
        }
    }
    BettiTable::from_entries(&entries)
}

#[derive(Clone, Debug, Serialize)]
pub struct TorTailReport {
    pub predicted: BettiTable,
    /// Entries of the Betti table of `A` with `i >= c + 1`.
    pub computed: BettiTable,
    pub matches: bool,
}

pub fn check_tor_tail(or: &OmegaResolution, betti_a: &BettiTable) -> TorTailReport {
    let c = or.codim();
    let predicted = tor_tail_predict(or);
    let computed = BettiTable(betti_a.0.iter().filter(|(k, v)| k.0 > c && **v > 0).map(|(k, v)| (*k, *v)).collect());
    let matches = predicted == computed;
    TorTailReport { predicted, computed, matches }
}

// ---------------------------------------------------------------------------------------------
// Hyperplane sections.

/// Omega-resolution of a general hyperplane section, obtained symbolically: restrict every
/// bundle, split `Ω^p|_H = Ω_H^p ⊕ Ω_H^{p-1}(-1)`, and replace the `Ω_H^{n-c}` pieces by their
/// free resolutions. The result is in general not minimal.
pub fn hyperplane_transform(or: &OmegaResolution) -> Result<OmegaResolution> {
    let n = or.n as i64;
    let c = or.codim() as i64;
    if c > n - 1 {
        return precondition("the hyperplane section would be empty");
    }
    let top = (n - c) as usize;
    let mut free: Vec<Vec<i32>> = or.free.clone();
    let mut omega = Vec::new();
    for &(p, e, s) in &or.omega {
        if p == 1 {
            free[0].extend(std::iter::repeat(e + 1).take(s));
        }
        if p == top {
            for i in 1..=c {
                let count = s * binomial(n, c - i) as usize;
                free[i as usize - 1].extend(std::iter::repeat(e + (n + i - c) as i32).take(count));
            }
        }
        if p < top {
            omega.push((p, e, s));
        }
        if p >= 2 {
            omega.push((p - 1, e + 1, s));
        }
    }
    let out = OmegaResolution { n: or.n - 1, free, omega, minimal: false, maps: None }.normalized();
    Ok(OmegaResolution { minimal: false, ..out })
}

#[derive(Clone, Debug, Serialize)]
pub struct TransformCheck {
    pub omega_equal: bool,
    /// Per level, `(degree, count)` pairs cancelled against the next level.
    pub cancelled: Vec<Vec<(i32, i64)>>,
    pub cancellable: bool,
}

impl TransformCheck {
    pub fn passed(&self) -> bool {
        self.omega_equal && self.cancellable
    }
}

/// Compare a symbolic transform with the Omega-resolution computed from the section itself:
/// the forms must agree exactly and the extra free summands must cancel in adjacent pairs.
pub fn compare_transform(symbolic: &OmegaResolution, actual: &OmegaResolution) -> TransformCheck {
    let a = symbolic.normalized();
    let b = actual.normalized();
    let omega_equal = a.omega == b.omega && a.n == b.n;
    let levels = a.free.len().max(b.free.len());
    let count = |v: &[Vec<i32>], i: usize| -> BTreeMap<i32, i64> {
        let mut m = BTreeMap::new();
        if let Some(l) = v.get(i) {
            for &d in l {
                *m.entry(d).or_default() += 1;
            }
        }
        m
    };
    let mut carry: BTreeMap<i32, i64> = BTreeMap::new();
    let mut cancelled = Vec::new();
    let mut ok = true;
    for i in 0..levels {
        let (ca, cb) = (count(&a.free, i), count(&b.free, i));
        let mut y: BTreeMap<i32, i64> = BTreeMap::new();
        let keys: std::collections::BTreeSet<i32> = ca.keys().chain(cb.keys()).chain(carry.keys()).copied().collect();
        for d in keys {
            let diff = ca.get(&d).copied().unwrap_or(0) - cb.get(&d).copied().unwrap_or(0);
            let v = diff - carry.get(&d).copied().unwrap_or(0);
            if v < 0 {
                ok = false;
            }
            if v != 0 {
                y.insert(d, v);
            }
        }
        cancelled.push(y.iter().map(|(&d, &v)| (d, v)).collect());
        carry = y;
    }
    if !carry.is_empty() {
        ok = false;
    }
    TransformCheck { omega_equal, cancelled, cancellable: ok }
}

// ---------------------------------------------------------------------------------------------
// Bounds.

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub what: String,
    pub lower: i64,
    pub value: i64,
    pub upper: i64,
}

impl BoundCheck {
    pub fn holds(&self) -> bool {
        self.lower <= self.value && self.value <= self.upper
    }

    pub fn slack(&self) -> (i64, i64) {
        (self.value - self.lower, self.upper - self.value)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ShiftBoundsReport {
    pub index_of_speciality: i32,
    /// `1 <= p_j + e_j <= e(X) + n + 2 - c`.
    pub summands: Vec<BoundCheck>,
    /// `min{d_1k, p_j + e_j} - 1 <= d_ik - i <= e(X) + n + 1 - c`.
    pub free: Vec<BoundCheck>,
}

impl ShiftBoundsReport {
    pub fn holds(&self) -> bool {
        self.summands.iter().chain(&self.free).all(|b| b.holds())
    }

    /// Whether some free twist attains the lower and the upper bound of the second chain.
    pub fn free_bounds_attained(&self) -> (bool, bool) {
        (self.free.iter().any(|b| b.slack().0 == 0), self.free.iter().any(|b| b.slack().1 == 0))
    }
}

pub fn shift_bounds_check(or: &OmegaResolution, index_of_speciality: i32) -> ShiftBoundsReport {
    let e = index_of_speciality as i64;
    let n = or.n as i64;
    let c = or.codim() as i64;
    let summands = or
        .omega
        .iter()
        .map(|&(p, ej, _)| BoundCheck {
            what: format!("p + e for Ω^{p}(-{ej})"),
            lower: 1,
            value: p as i64 + ej as i64,
            upper: e + n + 2 - c,
        })
        .collect();
    let low = or.free[0]
        .iter()
        .map(|&d| d as i64)
        .chain(or.omega.iter().map(|&(p, ej, _)| p as i64 + ej as i64))
        .min()
        .map(|m| m - 1);
    let mut free = Vec::new();
    if let Some(low) = low {
        for (i, level) in or.free.iter().enumerate() {
            for &d in level {
                free.push(BoundCheck {
                    what: format!("d - i for O(-{d}) in F_{}", i + 1),
                    lower: low,
                    value: d as i64 - (i as i64 + 1),
                    upper: e + n + 1 - c,
                });
            }
        }
    }
    ShiftBoundsReport { index_of_speciality, summands, free }
}

#[derive(Clone, Debug, Serialize)]
pub struct RegularityReport {
    pub index_of_speciality: i32,
    pub check: BoundCheck,
    /// Regularity read off local cohomology; must equal the Betti table value.
    pub from_cohomology: Option<i32>,
    /// For arithmetically Cohen-Macaulay input the bounds are informational.
    pub acm: bool,
}

/// `e(X) + n + 2 - c <= reg X <= e(X) + n + 3 - c`.
pub fn regularity_bounds_check(x: &Subscheme) -> Result<RegularityReport> {
    let e = x.index_of_speciality()?;
    let reg = x.regularity().ok_or_else(|| Error::Invariant("empty Betti table".into()))?;
    let from_cohomology = x.regularity_from_cohomology();
    if from_cohomology != Some(reg) {
        return invariant(format!("regularity {reg} from Betti numbers, {from_cohomology:?} from cohomology"));
    }
    let (n, c) = (x.n() as i64, x.codim() as i64);
    Ok(RegularityReport {
        index_of_speciality: e,
        check: BoundCheck {
            what: "reg X".into(),
            lower: e as i64 + n + 2 - c,
            value: reg as i64,
            upper: e as i64 + n + 3 - c,
        },
        from_cohomology,
        acm: x.is_acm(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GapReport {
    pub annihilated: bool,
    /// `((i, e), (j, f))` with `i < j`, both nonzero and `(i + e) - (j + f) = 1`.
    pub offending: Vec<((usize, i32), (usize, i32))>,
    /// Whether every intermediate row is fully inside the table window.
    pub window_complete: bool,
}

impl GapReport {
    pub fn holds(&self) -> bool {
        self.annihilated && self.offending.is_empty()
    }
}

/// Sufficient test for arithmetic Buchsbaumness on the cohomology table of `A`.
pub fn gap_criterion_check(table: &CohomologyTable) -> GapReport {
    let dim_a = table.rows.iter().filter(|r| !r.vanishes).map(|r| r.i).max().unwrap_or(0);
    let mut annihilated = true;
    let mut window_complete = true;
    for i in 1..dim_a {
        let Some(row) = table.row(i) else { continue };
        if row.vanishes {
            continue;
        }
        annihilated &= row.killed_by_maximal_ideal;
        match (row.bottom_degree, row.top_degree) {
            (Some(lo), Some(hi)) => window_complete &= table.window.0 <= lo && hi <= table.window.1,
            _ => window_complete = false,
        }
    }
    let nonzero: Vec<(usize, i32)> =
        table.entries.iter().filter(|e| e.0 >= 1 && e.0 < dim_a && e.2 != 0).map(|e| (e.0, e.1)).collect();
    let mut offending = Vec::new();
    for &(i, e) in &nonzero {
        for &(j, f) in &nonzero {
            if i < j && (i as i32 + e) - (j as i32 + f) == 1 {
                offending.push(((i, e), (j, f)));
            }
        }
    }
    GapReport { annihilated, offending, window_complete }
}

// ---------------------------------------------------------------------------------------------
// Weak Omega-resolutions.

/// `0 -> L_s -> ... -> L_1 -> J_X -> 0` with `L_i = F_i ⊕ ⊕ Ω^{2i-1}(-e)^s` for `i <= v`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeakOmegaResolution {
    pub n: usize,
    pub c: usize,
    pub free: Vec<Vec<i32>>,
    /// `omega[i]` lists the summands `(2i+1, e, s)` of level `i + 1`.
    pub omega: Vec<Vec<(usize, i32, usize)>>,
    pub minimal: bool,
    #[serde(skip)]
    pub maps: Option<EMSequence>,
}

impl PartialEq for WeakOmegaResolution {
    fn eq(&self, o: &Self) -> bool {
        self.n == o.n && self.c == o.c && self.free == o.free && self.omega == o.omega && self.minimal == o.minimal
    }
}

impl WeakOmegaResolution {
    pub fn s(&self) -> usize {
        self.free.len()
    }

    pub fn v(&self) -> usize {
        (self.n - self.c).min(self.s())
    }

    /// All summands as `(p, e, s)`, levels flattened.
    pub fn all_summands(&self) -> Vec<(usize, i32, usize)> {
        self.omega.iter().flatten().copied().collect()
    }
}

/// Weak Omega-resolution from the Eilenberg-MacLane sequence; requires `m · H^i_m(A) = 0` for `i <= v`.
pub fn weak_omega_resolution(x: &Subscheme, trials: u32, seed: u64) -> Result<WeakOmegaResolution> {
    x.require_saturated()?;
    let c = x.codim();
    if c < 2 {
        return precondition(format!("codimension must be at least 2, got {c}"));
    }
    let n = x.n();
    let seq = qpres::em_sequence(x.ring, &x.gens)?;
    let lc = x.cohomology();
    let v = (n - c).min(seq.s);
    for i in 1..=v {
        if !lc.killed_by_maximal_ideal(i) {
            return precondition(format!("not quasi-Buchsbaum at level {i}"));
        }
    }
    let mut free = Vec::new();
    let mut omega = Vec::new();
    for (k, e) in seq.modules.iter().enumerate() {
        let i = k + 1;
        let summands: Vec<(usize, i32, usize)> = if i <= v {
            row_entries(lc, i)?.into_iter().map(|(e, s)| (2 * i - 1, e, s)).collect()
        } else {
            Vec::new()
        };
        if summands.iter().any(|&(p, _, _)| p + 1 > x.ring.nvars) {
            return invariant(format!("level {i} would need G_{} over {} variables", 2 * i, x.ring.nvars));
        }
        match decompose(e, &summands, trials, seed.wrapping_add(i as u64))? {
            Decomposition::Certified { free: f, .. } => free.push(f),
            other => return invariant(format!("level {i} of the sequence does not decompose: {other:?}")),
        }
        omega.push(summands);
    }
    Ok(WeakOmegaResolution { n, c, free, omega, minimal: true, maps: Some(seq) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn koszul_squares_to_zero() {
        let ring = Ring::standard(4);
        for k in 2..=4 {
            let a = koszul_map(ring, k).unwrap();
            let b = koszul_map(ring, k - 1).unwrap();
            assert!(b.compose(&a).unwrap().is_zero());
        }
    }

    #[test]
    fn bott_examples() {
        assert_eq!(bott_cohomology(4, 1, 2).unwrap(), vec![(0, 10)]);
        assert_eq!(bott_cohomology(3, 1, 0).unwrap(), vec![(1, 1)]);
        for n in 1..6 {
            assert!(bott_cohomology(n, 1, 1).unwrap().is_empty());
        }
    }

    #[test]
    fn g2_has_koszul_betti_numbers() {
        let ring = Ring::standard(4);
        let g = g_module(ring, 2).unwrap();
        let b = g.module.resolution().betti();
        assert_eq!(b.entries(), vec![(0, 2, 6), (1, 3, 4), (2, 4, 1)]);
    }
}
