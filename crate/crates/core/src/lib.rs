//! Exact computations on classical simple Lie algebras: Chevalley bases,
//! polynomial invariants and harmonic polynomials, the exterior algebra and
//! its coboundary, the spaces `R^k(g)` cutting out the loci of adjoint orbits
//! of bounded dimension, standard polynomial identities on matrix algebras,
//! and abelian ideals of the Borel subalgebra with their Casimir eigenvalues.

#![allow(clippy::needless_range_loop)]

pub mod borelideals;
pub mod chevalley;
pub mod error;
pub mod exterior;
pub mod gammamap;
pub mod identities;
pub mod invariants;
pub mod linalg;
pub mod polyring;
pub mod rational;
pub mod rootdata;

pub use chevalley::{LieAlgebra, LieElement};
pub use error::{Error, Result};
pub use rational::Rational;
pub use rootdata::{CartanType, Family, RootSystem};
