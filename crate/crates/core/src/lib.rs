//! Computations with finitely presented graded modules over `F_p[x0..xn]`.

pub mod error;
pub mod field;
pub mod free;
pub mod groebner;
pub mod hom;
pub mod homological;
pub mod linalg;
pub mod monomial;
pub mod module;
pub mod poly;
pub mod qpres;
pub mod omega;
pub mod random;
pub mod scheme;
pub mod section;
pub mod surfaces;

pub use error::{Error, Result};
pub use free::{FreeModule, GradedMap, Vector};
pub use poly::{Poly, Ring};
