//! Finite categories and the proarrow layer of `Cat`: functors,
//! profunctors with coend composition, cells between them, and
//! isomorphism search.

mod cat;
mod cell;
mod coend;
pub mod corpus;
mod functor;
mod profunctor;
mod search;

use thiserror::Error;

pub use cat::{
    check_category, power_category, product_category, ArrowInfo, CategoryViolation, FinCat,
    MAX_ARROWS,
};
pub use cell::{
    associator, check_cell, embed_square, identity_cell, is_bijective_cell, left_unitor,
    paste_horizontal, paste_vertical, right_unitor, CellViolation, ProfCell,
};
pub use coend::{compose_profunctors, Composite};
pub use functor::{
    all_functors, check_functor, compose_functors, functors_equal, is_isomorphism, pairing,
    reindex, reindex_between, CatFunctor, FunctorViolation,
};
pub use profunctor::{
    check_profunctor, corepresentable_of, element_generators, hom_profunctor, product_profunctor,
    representable_of, sum_profunctor, Profunctor, ProfunctorViolation, Sides,
};
pub(crate) use profunctor::same_cat;
pub use search::{
    check_nat_iso, find_natural_iso, find_profunctor_iso, IsoSearchError, NatIso, Obstruction,
    DEFAULT_BUDGET,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinCatError {
    #[error("mismatched endpoints: {left} vs {right}")]
    MismatchedEndpoints { left: String, right: String },
    #[error("{what} has size {size}, above the bound {bound}")]
    SizeExceeded {
        what: String,
        size: usize,
        bound: usize,
    },
    #[error("invalid table: {0}")]
    Invalid(String),
    #[error("functor square does not commute at {0}")]
    NonCommuting(String),
}
