//! The correspondences between the classical and the double-functor side:
//! multicategories and DF operads, commutative monoids and Mackey-style DF
//! monoids, with round-trip checks in both directions.

mod extract;
mod mackey;
mod operad;
mod transform;

use serde_json::Value;
use thiserror::Error;

use crate::dblcat::DblCatError;
use crate::multicat::MulticatError;
use crate::report::Report;

pub use extract::{
    extract_multicat, multicat_from_df, roundtrip_check, ComparisonTransform, PointDecomposition,
};
pub use mackey::{
    check_df_monoid, df_from_monoid, df_monoid_of_mappings, mackey_from_monoid, monoid_from_mackey,
    DfMonoid,
};
pub use operad::{df_from_multicat, MulticatDf, UnderlyingCategory};
pub use transform::MorphismTransform;

#[derive(Debug, Error)]
pub enum BridgeError {
    #[error(transparent)]
    Multicat(#[from] MulticatError),
    #[error(transparent)]
    Dbl(#[from] DblCatError),
    #[error("refusing to extract from {}: {} failed checks", .0.subject, .0.failures())]
    CheckFailed(Box<Report>),
    #[error("Mackey data fails {check}: {witness}")]
    MackeyViolation { check: String, witness: Value },
    #[error("{0}")]
    NotAProduct(String),
    #[error("invalid DF monoid data: {0}")]
    Invalid(String),
}
