//! A projective subscheme `X ⊂ P^n` given by its ideal, with its coordinate ring `A = R/I`
//! and lazily computed cohomology.

use std::sync::OnceLock;

use crate::error::{precondition, Error, Result};
use crate::homological::LocalCohomology;
use crate::module::FPModule;
use crate::poly::{Poly, Ring};
use crate::qpres;

#[derive(Debug)]
pub struct Subscheme {
    pub ring: Ring,
    pub gens: Vec<Poly>,
    pub ideal: FPModule,
    pub coordinate_ring: FPModule,
    cohomology: OnceLock<LocalCohomology>,
    saturated: OnceLock<bool>,
}

impl Subscheme {
    /// Rejects the zero ideal, the unit ideal and inhomogeneous generators.
    pub fn new(ring: Ring, gens: &[Poly]) -> Result<Self> {
        let gens: Vec<Poly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
        if gens.is_empty() {
            return precondition("the zero ideal has codimension 0");
        }
        if let Some(g) = gens.iter().find(|g| !g.is_homogeneous()) {
            return Err(Error::Precondition(format!("generator {g:?} is not homogeneous")));
        }
        let coordinate_ring = FPModule::quotient_ring(ring, &gens)?;
        if coordinate_ring.is_zero() {
            return precondition("the ideal is the unit ideal");
        }
        let ideal = FPModule::ideal(ring, &gens)?;
        Ok(Subscheme {
            ring,
            gens,
            ideal,
            coordinate_ring,
            cohomology: OnceLock::new(),
            saturated: OnceLock::new(),
        })
    }

    /// `n` with `X ⊂ P^n`.
    pub fn n(&self) -> usize {
        self.ring.nvars - 1
    }

    /// Krull dimension of `A`.
    pub fn dim_a(&self) -> usize {
        self.coordinate_ring.krull_dim().expect("nonzero coordinate ring")
    }

    /// `dim X = dim A - 1`; `None` when `X` is empty.
    pub fn dim_x(&self) -> Option<usize> {
        self.dim_a().checked_sub(1)
    }

    pub fn codim(&self) -> usize {
        self.ring.nvars - self.dim_a()
    }

    /// Local cohomology of `A`; `H^i_m(A) = H^{i+1}_m(I) = H^i_*(J_X)` for `i >= 1`.
    pub fn cohomology(&self) -> &LocalCohomology {
        self.cohomology
            .get_or_init(|| LocalCohomology::new(&self.coordinate_ring).expect("cohomology of R/I"))
    }

    pub fn is_saturated(&self) -> bool {
        *self.saturated.get_or_init(|| qpres::is_saturated(self.ring, &self.gens))
    }

    pub fn require_saturated(&self) -> Result<()> {
        if !self.is_saturated() {
            return precondition("ideal is not saturated; saturate it first");
        }
        Ok(())
    }

    /// Arithmetically Cohen-Macaulay: no intermediate cohomology of `A` and depth `A = dim A`.
    pub fn is_acm(&self) -> bool {
        let d = self.dim_a();
        (0..d).all(|i| self.cohomology().vanishes(i))
    }

    /// Index of speciality: the top degree of `H^{n-c+1}_*(J_X) = H^{dim A}_m(A)`.
    /// Defined for every nonempty `X`, including the arithmetically Cohen-Macaulay case.
    pub fn index_of_speciality(&self) -> Result<i32> {
        let d = self.dim_a();
        if d == 0 {
            return precondition("X is empty");
        }
        self.cohomology()
            .top_degree(d)
            .ok_or_else(|| Error::Invariant("top local cohomology of R/I vanishes".into()))
    }

    /// `reg X = max { j + top(H^j_m(I)) }`, read off the local cohomology of `A`.
    pub fn regularity_from_cohomology(&self) -> Option<i32> {
        let lc = self.cohomology();
        (1..=self.dim_a()).filter_map(|i| lc.top_degree(i).map(|t| t + i as i32 + 1)).max()
    }

    /// `reg I` from the Betti table of the minimal free resolution of `I`.
    pub fn regularity(&self) -> Option<i32> {
        self.ideal.resolution().betti().regularity()
    }
}
