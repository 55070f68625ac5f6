//! Minimal free resolutions, Betti tables, `Ext^i(M, R)` and local cohomology.
//!
//! Local cohomology is computed through graded local duality:
//! `dim [H^i_m(M)]_t = dim [Ext^{n+1-i}(M, R)]_{-t-n-1}` for `R = k[x0..xn]`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invariant, Result};
use crate::free::{FreeModule, GradedMap, Vector};
use crate::groebner;
use crate::module::FPModule;
use crate::poly::{Poly, Ring};

/// Minimal graded free resolution `0 <- F0 <- F1 <- ... <- Fl <- 0`.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub ring: Ring,
    pub free: Vec<FreeModule>,
    /// `maps[i]: free[i + 1] -> free[i]`.
    pub maps: Vec<GradedMap>,
}

impl Resolution {
    pub fn length(&self) -> usize {
        self.maps.len()
    }

    pub fn betti(&self) -> BettiTable {
        let mut t = BTreeMap::new();
        for (i, f) in self.free.iter().enumerate() {
            for &d in &f.degrees {
                *t.entry((i, d)).or_insert(0) += 1;
            }
        }
        BettiTable(t)
    }

    /// True if every differential has entries in the maximal ideal.
    pub fn is_minimal(&self) -> bool {
        self.maps.iter().all(|m| m.is_minimal())
    }
}

pub fn min_free_resolution(m: &FPModule) -> Result<Resolution> {
    Ok(m.resolution().clone())
}

pub(crate) fn compute_resolution(m: &FPModule) -> Result<Resolution> {
    let ring = m.ring();
    let mm = m.minimal();
    let mut free = vec![mm.generators().clone()];
    let mut maps = Vec::new();
    let mut d = mm.presentation().clone();
    while d.ncols() > 0 {
        if maps.len() > ring.nvars {
            return invariant("resolution longer than the number of variables");
        }
        free.push(d.source.clone());
        let next = groebner::minimal_kernel(&d);
        maps.push(d);
        d = next;
    }
    Ok(Resolution { ring, free, maps })
}

/// Graded Betti numbers `β_{i,j}` keyed by `(i, j)` with `j` the internal degree.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BettiTable(pub BTreeMap<(usize, i32), usize>);

impl BettiTable {
    pub fn get(&self, i: usize, j: i32) -> usize {
        self.0.get(&(i, j)).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> Vec<(usize, i32, usize)> {
        self.0.iter().filter(|(_, &b)| b > 0).map(|(&(i, j), &b)| (i, j, b)).collect()
    }

    pub fn from_entries(e: &[(usize, i32, usize)]) -> Self {
        let mut t = BTreeMap::new();
        for &(i, j, b) in e {
            if b > 0 {
                *t.entry((i, j)).or_insert(0) += b;
            }
        }
        BettiTable(t)
    }

    /// Castelnuovo-Mumford regularity `max(j - i)`.
    pub fn regularity(&self) -> Option<i32> {
        self.0.keys().map(|&(i, j)| j - i as i32).max()
    }

    pub fn projective_dimension(&self) -> Option<usize> {
        self.0.keys().map(|&(i, _)| i).max()
    }

    /// Shift homological index by `s` (e.g. to compare an ideal with its quotient ring).
    pub fn shift_index(&self, s: usize) -> BettiTable {
        BettiTable(self.0.iter().map(|(&(i, j), &b)| ((i + s, j), b)).collect())
    }

    /// Render as the usual table: rows `j - i`, columns `i`.
    pub fn render(&self) -> String {
        if self.0.is_empty() {
            return "(zero)\n".into();
        }
        let maxi = self.projective_dimension().unwrap();
        let lo = self.0.keys().map(|&(i, j)| j - i as i32).min().unwrap();
        let hi = self.regularity().unwrap();
        let mut s = String::new();
        s.push_str("       ");
        for i in 0..=maxi {
            s.push_str(&format!("{i:>6}"));
        }
        s.push('\n');
        for r in lo..=hi {
            s.push_str(&format!("{r:>5}: "));
            for i in 0..=maxi {
                let b = self.get(i, r + i as i32);
                if b == 0 {
                    s.push_str(&format!("{:>6}", "."));
                } else {
                    s.push_str(&format!("{b:>6}"));
                }
            }
            s.push('\n');
        }
        s
    }
}

pub fn betti_table(res: &Resolution) -> BettiTable {
    res.betti()
}

/// `Ext^i(M, R)` for `0 <= i <= n + 1`, indexed by `i`.
pub fn ext_modules(m: &FPModule) -> Result<Vec<FPModule>> {
    Ok(m.ext().clone())
}

pub(crate) fn compute_ext(m: &FPModule) -> Result<Vec<FPModule>> {
    let ring = m.ring();
    let res = m.resolution();
    let mut out = Vec::with_capacity(ring.nvars + 1);
    for i in 0..=ring.nvars {
        if i >= res.free.len() {
            out.push(FPModule::zero(ring));
            continue;
        }
        let fi_dual = res.free[i].dual();
        let kernel_gens: Vec<Vector> = if i < res.maps.len() {
            groebner::minimal_kernel(&res.maps[i].transpose()).cols
        } else {
            (0..fi_dual.rank()).map(Vector::basis).collect()
        };
        let rels: Vec<Vector> = if i > 0 { res.maps[i - 1].transpose().cols } else { Vec::new() };
        let e = FPModule::subquotient(ring, &fi_dual, &kernel_gens, &rels)?;
        out.push(e.minimal());
    }
    Ok(out)
}

/// Local cohomology modules `H^i_m(M)` described through their dual Ext modules.
#[derive(Clone, Debug)]
pub struct LocalCohomology {
    pub ring: Ring,
    ext: Vec<FPModule>,
}

impl LocalCohomology {
    pub fn new(m: &FPModule) -> Result<Self> {
        Ok(LocalCohomology { ring: m.ring(), ext: ext_modules(m)? })
    }

    fn nv(&self) -> i32 {
        self.ring.nvars as i32
    }

    /// The Ext module dual to `H^i_m`.
    pub fn dual_ext(&self, i: usize) -> Option<&FPModule> {
        let nv = self.ring.nvars;
        if i > nv {
            return None;
        }
        self.ext.get(nv - i)
    }

    pub fn dim(&self, i: usize, t: i32) -> i64 {
        match self.dual_ext(i) {
            Some(e) => e.graded_dim(-t - self.nv()),
            None => 0,
        }
    }

    pub fn vanishes(&self, i: usize) -> bool {
        self.dual_ext(i).map(|e| e.is_zero()).unwrap_or(true)
    }

    pub fn is_finite_length(&self, i: usize) -> bool {
        self.dual_ext(i).map(|e| e.hilbert_series().is_finite_length()).unwrap_or(true)
    }

    /// Largest degree with `[H^i_m(M)]_t != 0` (exact, from the lowest generator of the Ext module).
    pub fn top_degree(&self, i: usize) -> Option<i32> {
        let e = self.dual_ext(i)?;
        if e.is_zero() {
            return None;
        }
        let mm = e.minimal();
        mm.generators().degrees.iter().min().map(|a| -a - self.nv())
    }

    /// Smallest nonzero degree for a finite length module.
    pub fn bottom_degree(&self, i: usize) -> Option<i32> {
        let e = self.dual_ext(i)?;
        let (_, hi) = e.hilbert_series().finite_support()?;
        Some(-hi - self.nv())
    }

    /// `None` if `m H^i_m(M) = 0`; otherwise a witness `(variable, generator)` acting nontrivially.
    pub fn maximal_ideal_witness(&self, i: usize) -> Option<(usize, usize)> {
        let e = self.dual_ext(i)?;
        let f = self.ring.field();
        let _ = f;
        for k in 0..e.num_generators() {
            for v in 0..self.ring.nvars {
                let x = Poly::var(self.ring, v);
                let vec = Vector::basis(k).mul_poly(&x);
                if !e.is_zero_element(&vec) {
                    return Some((v, k));
                }
            }
        }
        None
    }

    pub fn killed_by_maximal_ideal(&self, i: usize) -> bool {
        self.maximal_ideal_witness(i).is_none()
    }

    /// Table of nonzero values `(i, t, h)` for `t` in the window.
    pub fn table(&self, window: (i32, i32)) -> CohomologyTable {
        let mut entries = Vec::new();
        let mut rows = Vec::new();
        for i in 0..=self.ring.nvars {
            for t in window.0..=window.1 {
                let h = self.dim(i, t);
                if h != 0 {
                    entries.push((i, t, h));
                }
            }
            rows.push(RowInfo {
                i,
                vanishes: self.vanishes(i),
                finite_length: self.is_finite_length(i),
                killed_by_maximal_ideal: self.killed_by_maximal_ideal(i),
                top_degree: self.top_degree(i),
                bottom_degree: self.bottom_degree(i),
            });
        }
        CohomologyTable { nvars: self.ring.nvars, window, entries, rows }
    }
}

pub fn local_cohomology(m: &FPModule) -> Result<LocalCohomology> {
    LocalCohomology::new(m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowInfo {
    pub i: usize,
    pub vanishes: bool,
    pub finite_length: bool,
    pub killed_by_maximal_ideal: bool,
    pub top_degree: Option<i32>,
    pub bottom_degree: Option<i32>,
}

/// `dim [H^i_m(M)]_t` over a degree window, plus exact per-row facts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyTable {
    pub nvars: usize,
    pub window: (i32, i32),
    pub entries: Vec<(usize, i32, i64)>,
    pub rows: Vec<RowInfo>,
}

impl CohomologyTable {
    pub fn get(&self, i: usize, t: i32) -> i64 {
        self.entries.iter().find(|e| e.0 == i && e.1 == t).map(|e| e.2).unwrap_or(0)
    }

    pub fn row(&self, i: usize) -> Option<&RowInfo> {
        self.rows.get(i)
    }
}

pub fn local_cohomology_table(m: &FPModule, window: (i32, i32)) -> Result<CohomologyTable> {
    Ok(LocalCohomology::new(m)?.table(window))
}

/// `K_M = Ext^{n+1-d}(M, R)(-n-1)` with `d = dim M`.
pub fn canonical_module(m: &FPModule) -> Result<FPModule> {
    let d = m.krull_dim().ok_or_else(|| crate::Error::Precondition("zero module".into()))?;
    let nv = m.ring().nvars;
    Ok(ext_modules(m)?[nv - d].twist(-(nv as i32)))
}

fn ext_dim(e: &FPModule) -> Option<usize> {
    e.krull_dim()
}

/// `M` is a `k`-th syzygy iff `dim Ext^{n+1-i}(M, R) <= i - k` for all `i < n + 1`
/// (the zero module has dimension minus infinity).
pub fn k_syzygy_test(m: &FPModule, k: usize) -> Result<bool> {
    let ext = ext_modules(m)?;
    let nv = m.ring().nvars;
    for i in 0..nv {
        if let Some(d) = ext_dim(&ext[nv - i]) {
            if (d as i64) > i as i64 - k as i64 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Independent check for `k >= 3`: `M` reflexive and `Ext^i(M*, R) = 0` for `1 <= i <= k - 2`.
pub fn k_syzygy_cross_check(m: &FPModule, k: usize) -> Result<bool> {
    if !k_syzygy_test(m, 1)? {
        return Ok(false);
    }
    let dual = m.dual();
    let bidual = dual.dual();
    if bidual.hilbert_series() != m.hilbert_series() {
        return Ok(false);
    }
    let ext = ext_modules(&dual)?;
    for i in 1..=k.saturating_sub(2) {
        if i < ext.len() && !ext[i].is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleInvariants {
    pub dim: Option<usize>,
    pub depth: Option<usize>,
    pub projective_dimension: usize,
    pub multiplicity: i64,
    pub rank: i64,
    pub regularity: Option<i32>,
    pub finite_length: bool,
}

pub fn module_invariants(m: &FPModule) -> Result<ModuleInvariants> {
    let hs = m.hilbert_series();
    let res = m.resolution();
    let nv = m.ring().nvars;
    let dim = hs.dimension();
    let pd = res.length();
    let rank = if dim == Some(nv) { hs.multiplicity() } else { 0 };
    Ok(ModuleInvariants {
        dim,
        depth: if hs.is_zero() { None } else { Some(nv - pd) },
        projective_dimension: pd,
        multiplicity: hs.multiplicity(),
        rank,
        regularity: res.betti().regularity(),
        finite_length: hs.is_finite_length(),
    })
}
