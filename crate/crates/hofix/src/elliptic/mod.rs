//! Rational ellipticity through explicit witnesses: the associated pure
//! differential, the nilpotence certificate search for even generators, the
//! precedence order on component-model generators, and the lift of fiber
//! witnesses onto path components of section spaces.

mod lift;
mod order;
mod pure;
mod witness;

pub use lift::{certify_component_elliptic, lift_witness, LiftedWitness};
pub use order::Precedence;
pub use pure::{pure_part, PureCdga};
pub use witness::{
    check_elliptic, find_witnesses, verify_witness, EllipticityVerdict, EllipticityWitness,
    WitnessConfig, WitnessDifferential,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EllipticError {
    #[error("witness search needs every generator in positive degree; `{gen}` is not")]
    NonPositiveGenerator { gen: String },
    #[error("no triangular generator order exists for this differential")]
    NonTriangular,
    #[error(
        "the scaled dual element for `{gen}` needs degree {needed} but the base is truncated \
         below it; rebuild with a larger truncation"
    )]
    AlphaOutOfRange { gen: String, needed: i64 },
    #[error("witness lifting needs a base presented by monomials")]
    NonMonomialBase,
    #[error("no fiber witness available for `{gen}`")]
    MissingBaseWitness { gen: String },
    #[error("lifted remainder for `{gen}` leaves the ideal of preceding generators: {monomial}")]
    RemainderNotInIdeal { gen: String, monomial: String },
    #[error("the fiber model is not certified elliptic")]
    FiberNotElliptic,
}
