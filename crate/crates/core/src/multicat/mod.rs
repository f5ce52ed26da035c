//! Symmetric multicategories (coloured operads) with their laws checked
//! exhaustively up to an arity bound, and finite commutative monoids.

mod check;
mod monoid;
mod sym;

use thiserror::Error;

pub use check::{
    block_permutation, check_morphism, check_multicat, identity_morphism, shifted_permutation,
    MulticatMorphism,
};
pub use monoid::{check_comm_monoid, monoid_corpus, CommMonoid};
pub use sym::{
    discrete_multicat, endomorphism_multicat, identities_only_multicat, terminal_multicat,
    ActionTable, CompositionTable, MulticatTables, Profile, SymMulticat, DEFAULT_ARITY_BOUND,
    ENDO_HOM_LIMIT,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MulticatError {
    #[error("{what} is larger than {bound}")]
    SizeExceeded { what: String, bound: usize },
    #[error("arity {arity} exceeds the arity bound {bound}")]
    ArityExceeded { arity: usize, bound: usize },
    #[error("invalid multicategory data: {0}")]
    Invalid(String),
}
