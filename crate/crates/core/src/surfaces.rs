//! Surfaces in `P^4`: the two-step presentation `0 -> E_2 -> E_1 -> I -> 0`, the lifting
//! criterion for arithmetic Buchsbaumness, and surfaces built as degeneracy loci.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::groebner::StandardBasis;
use crate::hom::hom_degree0;
use crate::homological::{k_syzygy_test, LocalCohomology};
use crate::linalg::Matrix;
use crate::module::{FPModule, ModHom};
use crate::omega::{omega_module, OmegaResolution, WeakOmegaResolution};
use crate::poly::{Poly, Ring};
use crate::qpres;
use crate::scheme::Subscheme;
use crate::section::rank_one_embed;

fn ext_finite_length(m: &FPModule, j: usize) -> bool {
    m.ext().get(j).map_or(true, |e| e.hilbert_series().is_finite_length())
}

/// `E~` is locally free iff `Ext^j(E, R)` has finite length for all `j >= 1`.
fn is_bundle(m: &FPModule) -> bool {
    (1..m.ext().len()).all(|j| ext_finite_length(m, j))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurfaceFlags {
    pub e1_bundle: bool,
    pub e2_bundle: bool,
    pub equidimensional: bool,
    pub equidim_cm: bool,
    pub torsionfree_e1: bool,
    pub reflexive_e2: bool,
}

#[derive(Clone, Debug)]
pub struct SurfacePresentation {
    pub e1: FPModule,
    pub e2: FPModule,
    /// `E_2 -> E_1`.
    pub phi: ModHom,
    pub flags: SurfaceFlags,
    /// `H^2_m(E_1) = H^1_m(A)` and `H^4_m(E_2) = H^2_m(A)` in every degree of the window.
    pub placement_holds: bool,
    pub sequence: qpres::EMSequence,
}

fn same_row(a: &LocalCohomology, i: usize, b: &LocalCohomology, j: usize, window: (i32, i32)) -> bool {
    if a.is_finite_length(i) != b.is_finite_length(j) || a.vanishes(i) != b.vanishes(j) {
        return false;
    }
    (window.0..=window.1).all(|t| a.dim(i, t) == b.dim(j, t))
}

/// Two-step presentation of a surface `X ⊂ P^4` from its Eilenberg-MacLane sequence.
pub fn surface_presentation(x: &Subscheme, window: (i32, i32)) -> Result<SurfacePresentation> {
    if x.ring.nvars != 5 || x.dim_a() != 3 {
        return precondition(format!(
            "need a surface in P^4, got dim R/I = {} in {} variables",
            x.dim_a(),
            x.ring.nvars
        ));
    }
    x.require_saturated()?;
    let seq = qpres::em_sequence(x.ring, &x.gens)?;
    if seq.modules.len() != 2 {
        return Err(Error::Invariant(format!("expected two modules, got {}", seq.modules.len())));
    }
    let e1 = seq.modules[0].clone();
    let e2 = seq.modules[1].clone();
    let phi = seq.maps[1].clone();
    let e1_bundle = is_bundle(&e1);
    let e2_bundle = is_bundle(&e2);
    let ext1_e2_dim = e2.ext().get(1).and_then(|m| m.krull_dim());
    let equidimensional = e1_bundle && ext1_e2_dim.map_or(true, |d| d <= 1);
    let flags = SurfaceFlags {
        e1_bundle,
        e2_bundle,
        equidimensional,
        equidim_cm: e1_bundle && e2_bundle,
        torsionfree_e1: k_syzygy_test(&e1, 1)?,
        reflexive_e2: k_syzygy_test(&e2, 2)?,
    };
    let a = x.cohomology();
    let h1 = LocalCohomology::new(&e1)?;
    let h2 = LocalCohomology::new(&e2)?;
    let placement_holds = same_row(&h1, 2, a, 1, window) && same_row(&h2, 4, a, 2, window);
    Ok(SurfacePresentation { e1, e2, phi, flags, placement_holds, sequence: seq })
}

fn twist_label(k: i32) -> String {
    match k {
        0 => String::new(),
        k if k < 0 => format!("(\u{2212}{})", -k),
        k => format!("({k})"),
    }
}

/// `Ω^p(-e)` written out.
pub fn omega_label(p: usize, e: i32) -> String {
    if p == 0 {
        format!("O{}", twist_label(-e))
    } else {
        format!("Ω^{p}{}", twist_label(-e))
    }
}

#[derive(Clone, Debug)]
pub enum LiftingOutcome {
    /// `δ ∘ α = φ`.
    Lifted { alpha: ModHom },
    /// No `α` exists; the listed Hom components vanish.
    Obstructed { zero_components: Vec<String> },
}

#[derive(Clone, Debug)]
pub struct LiftingReport {
    /// Minimal free cover `δ: P -> E_1`.
    pub delta: ModHom,
    pub phi: ModHom,
    pub hom_dim: usize,
    pub outcome: LiftingOutcome,
}

impl LiftingReport {
    pub fn is_buchsbaum(&self) -> bool {
        matches!(self.outcome, LiftingOutcome::Lifted { .. })
    }
}

/// Decide whether `φ: E_2 -> E_1` factors through the minimal free cover of `E_1`;
/// for a quasi-Buchsbaum surface in `P^4` this holds iff the surface is arithmetically Buchsbaum.
pub fn lifting_test(wor: &WeakOmegaResolution) -> Result<LiftingReport> {
    if wor.n != 4 || wor.c != 2 {
        return precondition("lifting test is restricted to surfaces in P^4");
    }
    let Some(seq) = &wor.maps else {
        return precondition("weak Omega-resolution carries no module-level maps");
    };
    if seq.modules.len() != 2 {
        return precondition("expected a two-step presentation");
    }
    let e1 = &seq.modules[0];
    let e2 = &seq.modules[1];
    let phi = seq.maps[1].clone();
    let ring = e1.ring();
    let f = ring.field();
    let min = e1.minimalize();
    let p = FPModule::free(ring, min.module.generators().degrees.clone());
    let delta = ModHom::new(p.clone(), e1.clone(), min.to_old.clone())?;

    let space = hom_degree0(e2, &p)?;
    let degrees = &e2.generators().degrees;
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let mut rhs: Vec<u32> = Vec::new();
    let mut images: Vec<Vec<crate::free::Vector>> = space
        .basis
        .iter()
        .map(|b| delta.matrix.compose(&b.matrix).map(|m| m.cols))
        .collect::<Result<_>>()?;
    let nb = space.dim();
    let mut bases: std::collections::HashMap<i32, StandardBasis> = Default::default();
    for (j, &d) in degrees.iter().enumerate() {
        let sb = bases.entry(d).or_insert_with(|| StandardBasis::new(e1.gb(), d));
        let target = sb.coords(&e1.normal_form(&phi.matrix.cols[j]));
        let cols: Vec<Vec<u32>> = images.iter_mut().map(|img| sb.coords(&e1.normal_form(&img[j]))).collect();
        for r in 0..sb.dim() {
            rows.push((0..nb).map(|b| cols[b][r]).collect());
            rhs.push(target[r]);
        }
    }
    let solution = if rows.is_empty() {
        Some(vec![0; nb])
    } else {
        Matrix::from_rows(f, &rows, nb).solve(&rhs)
    };
    let outcome = match solution {
        Some(c) => {
            let alpha = space.combination(&c);
            let diff = delta.compose(&alpha)?.add(&phi.scale(f.neg(1)))?;
            if !diff.is_zero() {
                return Err(Error::Invariant("solution of the lifting system does not lift φ".into()));
            }
            LiftingOutcome::Lifted { alpha }
        }
        None => {
            let cover_degrees: BTreeSet<i32> = p.generators().degrees.iter().copied().collect();
            let mut zero_components = Vec::new();
            for &(q, e, _) in wor.omega.get(1).map(|v| v.as_slice()).unwrap_or(&[]) {
                let g = omega_module(ring, q, e)?;
                for &d in &cover_degrees {
                    if hom_degree0(&g, &FPModule::free(ring, vec![d]))?.dim() == 0 {
                        zero_components.push(format!("Hom({}, {}) = 0", omega_label(q, e), omega_label(0, d)));
                    }
                }
            }
            LiftingOutcome::Obstructed { zero_components }
        }
    };
    Ok(LiftingReport { delta, phi, hom_dim: nb, outcome })
}

/// Input shape for the constructor: either resolution format.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Shape {
    Weak(WeakOmegaResolution),
    Omega(OmegaResolution),
}

impl Shape {
    pub fn n(&self) -> usize {
        match self {
            Shape::Weak(w) => w.n,
            Shape::Omega(o) => o.n,
        }
    }

    /// Per level, free generator degrees and `(p, e, s)` summands.
    pub fn levels(&self) -> Vec<(Vec<i32>, Vec<(usize, i32, usize)>)> {
        match self {
            Shape::Weak(w) => w
                .free
                .iter()
                .enumerate()
                .map(|(i, f)| (f.clone(), w.omega.get(i).cloned().unwrap_or_default()))
                .collect(),
            Shape::Omega(o) => o
                .free
                .iter()
                .enumerate()
                .map(|(i, f)| (f.clone(), if i == 0 { o.omega.clone() } else { Vec::new() }))
                .collect(),
        }
    }

    /// Expected nonzero `(i, e, dim [H^i_m(A)]_e)`.
    pub fn expected_cohomology(&self) -> Vec<(usize, i32, usize)> {
        let mut out: Vec<(usize, i32, usize)> = match self {
            Shape::Weak(w) => w
                .omega
                .iter()
                .enumerate()
                .flat_map(|(k, v)| v.iter().map(move |&(_, e, s)| (k + 1, e, s)))
                .collect(),
            Shape::Omega(o) => o.omega.iter().map(|&(p, e, s)| (p, e, s)).collect(),
        };
        out.sort();
        out
    }
}

fn level_module(ring: Ring, free: &[i32], omega: &[(usize, i32, usize)]) -> Result<FPModule> {
    let mut parts = vec![FPModule::free(ring, free.to_vec())];
    for &(p, e, s) in omega {
        let g = omega_module(ring, p, e)?;
        parts.extend(std::iter::repeat(g).take(s));
    }
    Ok(FPModule::direct_sum_all(ring, &parts))
}

#[derive(Clone, Debug)]
pub struct Construction {
    pub ring: Ring,
    pub gens: Vec<Poly>,
    pub seed: u64,
    pub attempts: u32,
    pub twist: i32,
}

pub const CONSTRUCT_ATTEMPTS: u32 = 16;

/// Degeneracy locus of a random `φ: L_2 -> L_1`: `coker φ ≅ J_X(t)`. Each attempt checks
/// codimension two, saturation and the prescribed intermediate cohomology.
pub fn construct_from_shape(shape: &Shape, seed: u64) -> Result<Construction> {
    let levels = shape.levels();
    if levels.len() != 2 {
        return precondition(format!("need a shape with two levels, got {}", levels.len()));
    }
    let n = shape.n();
    let ring = Ring::new(32003, n + 1)?;
    let l1 = level_module(ring, &levels[0].0, &levels[0].1)?;
    let l2 = level_module(ring, &levels[1].0, &levels[1].1)?;
    let space = hom_degree0(&l2, &l1)?;
    let expected = shape.expected_cohomology();
    let mut last = String::from("no attempt made");
    for k in 0..CONSTRUCT_ATTEMPTS {
        let s = seed.wrapping_add(k as u64);
        let phi = space.random_element(s);
        let c = phi.cokernel();
        let emb = match rank_one_embed(&c) {
            Ok(e) => e,
            Err(e) => {
                last = e.to_string();
                continue;
            }
        };
        let x = match Subscheme::new(ring, &emb.gens) {
            Ok(x) => x,
            Err(e) => {
                last = e.to_string();
                continue;
            }
        };
        if x.codim() != 2 || !emb.saturated {
            last = format!("codimension {}, saturated {}", x.codim(), emb.saturated);
            continue;
        }
        let lc = x.cohomology();
        let mut found = Vec::new();
        let mut finite = true;
        for i in 1..x.dim_a() {
            if lc.vanishes(i) {
                continue;
            }
            match (lc.bottom_degree(i), lc.top_degree(i)) {
                (Some(lo), Some(hi)) => {
                    for e in lo..=hi {
                        let h = lc.dim(i, e);
                        if h != 0 {
                            found.push((i, e, h as usize));
                        }
                    }
                }
                _ => finite = false,
            }
        }
        if !finite || found != expected {
            last = format!("cohomology {found:?} differs from the shape {expected:?}");
            continue;
        }
        return Ok(Construction { ring, gens: emb.gens, seed: s, attempts: k + 1, twist: emb.twist });
    }
    Err(Error::Budget(format!("no valid degeneracy locus in {CONSTRUCT_ATTEMPTS} attempts: {last}")))
}
