//! General hyperplane sections and the embedding of rank one modules as twisted ideals.

use serde::Serialize;

use crate::error::{precondition, Error, Result};
use crate::free::{GradedMap, Vector};
use crate::homological::LocalCohomology;
use crate::monomial::Monomial;
use crate::module::{minimal_ideal_generators, saturate, saturate_ideal, FPModule};
use crate::poly::{Poly, Ring};
use crate::qpres;
use crate::random;

/// Seeded general hyperplane `x_n = Σ a_i x_i`, returned as the substitution polynomial
/// in the ring with one variable fewer.
#[derive(Clone, Debug)]
pub struct Hyperplane {
    pub seed: u64,
    pub coefficients: Vec<u32>,
    pub source: Ring,
    pub target: Ring,
    pub substitution: Poly,
}

impl Hyperplane {
    pub fn random(ring: Ring, seed: u64) -> Result<Self> {
        if ring.nvars < 2 {
            return precondition("need at least two variables to cut by a hyperplane");
        }
        let target = ring.drop_var()?;
        let f = ring.field();
        let mut rng = random::rng(seed);
        let coefficients: Vec<u32> = (0..target.nvars).map(|_| random::nonzero_element(&mut rng, f)).collect();
        let terms = coefficients.iter().enumerate().map(|(i, &a)| (Monomial::var(i), a)).collect();
        let substitution = Poly::from_terms(target, terms);
        Ok(Hyperplane { seed, coefficients, source: ring, target, substitution })
    }

    pub fn restrict(&self, p: &Poly) -> Poly {
        p.substitute_var(self.source.nvars - 1, &self.substitution, self.target)
    }

    pub fn restrict_vector(&self, v: &Vector, rank: usize) -> Vector {
        let polys: Vec<Poly> = v.to_polys(self.source, rank).iter().map(|p| self.restrict(p)).collect();
        Vector::from_polys(&polys)
    }

    pub fn restrict_map(&self, m: &GradedMap) -> GradedMap {
        let r = m.nrows();
        let cols = m.cols.iter().map(|c| self.restrict_vector(c, r)).collect();
        GradedMap::new_unchecked(self.target, m.source.clone(), m.target.clone(), cols)
    }
}

/// Saturated ideal of `X ∩ H` in the coordinate ring of `H`, minimally generated.
pub fn hyperplane_section_ideal(ring: Ring, gens: &[Poly], seed: u64) -> Result<(Hyperplane, Vec<Poly>)> {
    if !qpres::is_saturated(ring, gens) {
        return precondition("ideal must be saturated before taking a hyperplane section");
    }
    let h = Hyperplane::random(ring, seed)?;
    let cut: Vec<Poly> = gens.iter().map(|g| h.restrict(g)).filter(|g| !g.is_zero()).collect();
    let sat = saturate_ideal(h.target, &cut);
    let min = minimal_ideal_generators(h.target, &sat);
    Ok((h, min))
}

/// How the section of a module was computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SectionMethod {
    /// `M` embedded in a free module `F` with `F/M` free of `l`-torsion; saturated inside `F̄`.
    Embedded,
    /// `M/lM` with its `m`-torsion removed.
    TorsionRemoved,
}

#[derive(Clone, Debug)]
pub struct ModuleSection {
    pub hyperplane: Hyperplane,
    pub method: SectionMethod,
    pub module: FPModule,
}

fn hilbert_drops_by_one(m: &FPModule, section: &FPModule) -> bool {
    let (lo, hi) = section_window(m);
    (lo..=hi).all(|t| section.graded_dim(t) == m.graded_dim(t) - m.graded_dim(t - 1))
}

fn section_window(m: &FPModule) -> (i32, i32) {
    let degs = &m.generators().degrees;
    let lo = degs.iter().copied().min().unwrap_or(0);
    let hi = m.presentation().source.degrees.iter().copied().max().unwrap_or(lo).max(lo);
    (lo - 1, hi + m.ring().nvars as i32 + 2)
}

/// `H^0_*` of the restriction of `M~` to a general hyperplane, as a module over the
/// polynomial ring in one variable fewer. Requires `depth M > 0`.
pub fn hyperplane_section(m: &FPModule, seed: u64) -> Result<ModuleSection> {
    let ring = m.ring();
    if m.is_zero() {
        return Ok(ModuleSection {
            hyperplane: Hyperplane::random(ring, seed)?,
            method: SectionMethod::TorsionRemoved,
            module: FPModule::zero(ring.drop_var()?),
        });
    }
    let lc = LocalCohomology::new(m)?;
    if !lc.vanishes(0) {
        return precondition("module has depth zero; a linear form may be a zero divisor");
    }
    let h = Hyperplane::random(ring, seed)?;
    let target = h.target;

    // Branch 1: M torsion free, embedded through M -> M**.
    let (dual, z) = m.dual_with_generators();
    let rank = |x: &FPModule| match x.krull_dim() {
        Some(d) if d == ring.nvars => x.hilbert_series().multiplicity(),
        _ => 0,
    };
    if dual.num_generators() > 0 && rank(m) > 0 {
        let zt = z.transpose();
        let image = FPModule::subquotient(ring, &zt.target, &zt.cols, &[])?;
        if image.hilbert_series() == m.hilbert_series() {
            let f = zt.target.clone();
            let cut: Vec<Vector> =
                zt.cols.iter().map(|c| h.restrict_vector(c, f.rank())).filter(|c| !c.is_zero()).collect();
            let cut_module = FPModule::subquotient(target, &f, &cut, &[])?;
            if hilbert_drops_by_one(m, &cut_module) {
                let sat = saturate(target, &f, &cut);
                let module = FPModule::subquotient(target, &f, &sat, &[])?.minimal();
                return Ok(ModuleSection { hyperplane: h, method: SectionMethod::Embedded, module });
            }
        }
    }

    // Branch 2: quotient by the restricted relations, m-torsion removed.
    let pres = h.restrict_map(m.presentation());
    let rels: Vec<Vector> = pres.cols.iter().filter(|c| !c.is_zero()).cloned().collect();
    let sat = saturate(target, &pres.target, &rels);
    let mat = GradedMap::from_columns(target, pres.target.clone(), sat, 0)?;
    let module = FPModule::coker(mat).minimal();
    Ok(ModuleSection { hyperplane: h, method: SectionMethod::TorsionRemoved, module })
}

/// `C ≅ I(t)` for a rank one module `C` whose double dual is free.
#[derive(Clone, Debug)]
pub struct RankOneEmbedding {
    pub gens: Vec<Poly>,
    pub ideal: FPModule,
    pub twist: i32,
    pub saturated: bool,
}

/// Realize a torsion-free rank one module as a twisted ideal through `C -> C** ≅ R(t)`.
pub fn rank_one_embed(c: &FPModule) -> Result<RankOneEmbedding> {
    let ring = c.ring();
    let rank = match c.krull_dim() {
        Some(d) if d == ring.nvars => c.hilbert_series().multiplicity(),
        _ => 0,
    };
    if rank != 1 {
        return Err(Error::Precondition(format!("module has rank {rank}, not 1")));
    }
    let (dual, z) = c.dual_with_generators();
    let dmin = dual.minimalize();
    if dmin.module.num_generators() != 1 || !dmin.module.is_free() {
        return precondition("double dual is not free: the degeneracy locus has the wrong codimension");
    }
    // The single generator of C*, written in F0*.
    let lambda = z.compose(&dmin.to_old)?;
    let col = &lambda.cols[0];
    let k = c.num_generators();
    let comps = col.to_polys(ring, k);
    let mut twist = None;
    for (j, p) in comps.iter().enumerate() {
        if let Some(d) = p.degree() {
            twist = Some(d as i32 - c.generators().degrees[j]);
            break;
        }
    }
    let twist = twist.ok_or_else(|| Error::Invariant("dual generator is zero".into()))?;
    let gens = minimal_ideal_generators(ring, &comps.into_iter().filter(|p| !p.is_zero()).collect::<Vec<_>>());
    let ideal = FPModule::ideal(ring, &gens)?;
    if ideal.hilbert_series() != &c.hilbert_series().shift(twist) {
        return precondition("module is not torsion free: C -> C** is not injective");
    }
    let saturated = qpres::is_saturated(ring, &gens);
    Ok(RankOneEmbedding { gens, ideal, twist, saturated })
}
