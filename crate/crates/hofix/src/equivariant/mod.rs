//! Models of torus actions: Borel-fibration builders for the sphere and
//! projective families, equivariant pairs with the morphism covering the
//! fixed-point inclusion, indecomposables and localization over the
//! fraction field, and the induced model of the inclusion of fixed points
//! into homotopy fixed points.

mod borel;
mod indec;
mod kmodel;
mod pair;

pub use borel::{BorelFamily, BorelModel};
pub use indec::{
    indecomposables, is_t_minimal, lemma_aux_basis, localize_check, Indecomposables,
    LemmaTriple, LocalizeReport,
};
pub use kmodel::{
    never_equivalence_check, pi_k_injective_check, InjectivityReport, KModel, NeverEquivalence,
};
pub use pair::EquivariantPair;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EquivariantError {
    #[error(transparent)]
    Section(#[from] crate::section::SectionError),
    #[error(transparent)]
    Cdga(#[from] crate::cdga::CdgaError),
    #[error(transparent)]
    Elliptic(#[from] crate::elliptic::EllipticError),
    #[error("builder parameters are degree-inconsistent: {0}")]
    BadParameters(String),
    #[error("both sides of an equivariant pair must share one base algebra")]
    BaseMismatch,
    #[error("the fixed-point side must be trivial over the base")]
    FixedSideTwisted,
    #[error("psi image of `{gen}` must be homogeneous of its degree")]
    PsiDegree { gen: String },
    #[error("psi does not commute with the differentials on `{gen}`")]
    PsiNotChainMap { gen: String },
    #[error("no retraction known for this model")]
    NoRetraction,
    #[error("indecomposables need a minimal fiber model; `{gen}` has a linear differential")]
    NotMinimal { gen: String },
    #[error("the base must be presented by monomials in its variables")]
    NonMonomialBase,
    #[error("this operation is implemented for circle actions (rank one)")]
    NotRankOne,
    #[error("column reduction found no exponent for `{gen}`; the pair does not localize")]
    LemmaReductionFailed { gen: String },
    #[error("preconditions not met: {0}")]
    Preconditions(String),
}
