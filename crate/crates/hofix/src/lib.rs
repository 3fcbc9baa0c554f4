//! Exact-arithmetic Sullivan models of homotopy fixed point sets.
//!
//! Given a torus (or other connected group) action presented through the
//! relative Sullivan model of its Borel fibration, this crate constructs the
//! free CDGA model of the space of sections, cuts out path components,
//! certifies rational ellipticity through explicit witnesses, and models the
//! inclusion of the fixed point set into the homotopy fixed point set. All
//! arithmetic is exact over the rationals.
//!
//! ```
//! use hofix::algebra::q;
//! use hofix::equivariant::BorelModel;
//! use hofix::section::{
//!     enumerate_retractions, identify_catalog, simplify_presentation,
//!     ComponentModel, SectionModel,
//! };
//!
//! // A circle rotating the two-sphere: two path components of the
//! // homotopy fixed point set, each a rational three-sphere.
//! let borel = BorelModel::even_sphere(2, q(1), None)?;
//! let model = SectionModel::build(borel.rel(), false)?;
//! let retractions = enumerate_retractions(borel.rel())?;
//! assert_eq!(retractions.len(), 2);
//! for phi in &retractions {
//!     let component = ComponentModel::compute(&model, phi)?;
//!     let reduced = simplify_presentation(component.cdga());
//!     assert_eq!(identify_catalog(&reduced).to_string(), "S^3");
//! }
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod algebra;
pub mod cdga;
pub mod cli;
pub mod dsl;
pub mod elliptic;
pub mod equivariant;
pub mod linalg;
pub mod polymat;
pub mod roots;
pub mod section;

// The guide's code blocks run as doctests, so the book cannot drift from
// the library.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graded-algebra.md")]
    mod graded_algebra {}
    #[doc = include_str!("../../../book/src/cdga.md")]
    mod cdga {}
    #[doc = include_str!("../../../book/src/section-models.md")]
    mod section_models {}
    #[doc = include_str!("../../../book/src/ellipticity.md")]
    mod ellipticity {}
    #[doc = include_str!("../../../book/src/equivariant.md")]
    mod equivariant {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
