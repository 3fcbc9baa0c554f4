//! Sullivan models of section spaces of fibrations with finite evenly
//! graded base: the free model on v ⊗ β, its path components, and the
//! identification of simplified components against a small catalog.

mod catalog;
mod component;
mod model;
mod reduce;
mod relative;
mod retraction;
mod rho;

pub use catalog::{
    degree_multiset, identify_catalog, nonzero_differentials, odd_sphere_product_degrees,
    CatalogFactor, Identification,
};
pub use component::ComponentModel;
pub use model::SectionModel;
pub use reduce::{eliminate_contractibles, reduce_differentials, simplify_presentation};
pub use relative::{lift_fiber_poly, RelCtx, RelPoly, RelativeSullivan};
pub use retraction::{
    enumerate_retractions, rebase, triangular_order, triangular_order_of, Retraction,
};
pub use rho::{RhoReducer, SplitStrategy};

#[cfg(test)]
pub(crate) mod fixtures {
    pub(crate) use super::relative::tests::even_sphere_borel;
}

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SectionError {
    #[error(transparent)]
    Cdga(#[from] crate::cdga::CdgaError),
    #[error("the base algebra must be evenly graded")]
    OddBase,
    #[error("the base algebra must carry the zero differential")]
    BaseDifferential,
    #[error("fiber generator `{gen}` must have positive degree")]
    FiberDegree { gen: String },
    #[error("differential of `{gen}` must be homogeneous of degree {expected}")]
    DifferentialDegree { gen: String, expected: i64 },
    #[error("D^2 != 0 on fiber generator `{gen}`")]
    DifferentialSquare { gen: String },
    #[error("retraction value for `{gen}` must have its degree")]
    RetractionDegree { gen: String },
    #[error("not a retraction: the image of D `{gen}` is nonzero")]
    NotRetraction { gen: String },
    #[error(
        "retraction constraints at `{gen}` involve several unknowns at once; \
         supply the retraction explicitly"
    )]
    NonTriangular { gen: String },
    #[error(
        "retraction coefficient for `{gen}` is never constrained: the \
         retraction family is infinite"
    )]
    FreeRetractionParameter { gen: String },
    #[error("fiber differential has cyclic generator dependencies")]
    CyclicDifferential,
}
