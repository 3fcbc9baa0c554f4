//! Commutative differential graded algebras: free CDGAs with their
//! cohomology, finite-dimensional algebras given by multiplication tables,
//! and dual coalgebras with iterated diagonals.

mod dual;
mod finite;
mod free;
mod morphism;

pub use dual::DualCoalgebra;
pub use finite::{BasisLabel, FiniteAlgebra};
pub use free::{enumerate_monomials, CohomologyDegree, FreeCdga};
pub use morphism::CdgaMorphism;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CdgaError {
    #[error("differential of `{gen}` must be homogeneous of degree {expected}")]
    DifferentialDegree { gen: String, expected: i64 },
    #[error("d^2 != 0 on generator `{gen}`")]
    DifferentialSquare { gen: String },
    #[error("cohomology needs every generator in positive degree; `{gen}` has degree {degree}")]
    NonPositiveGenerator { gen: String, degree: i64 },
    #[error("{0}")]
    InvalidAlgebra(String),
    #[error("morphism does not commute with differentials on `{gen}`")]
    NotChainMap { gen: String },
    #[error("morphism image of `{gen}` is not homogeneous of its degree")]
    DegreeViolation { gen: String },
}
