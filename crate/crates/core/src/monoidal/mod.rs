//! DF monoidal categories and DF fibrations: representability of the
//! proarrows, the Beck-Chevalley condition, co-representability by
//! reindexing, the cartesian and cocartesian constructions from indexed
//! (co)products, and the collapse to isomorphism classes.

mod bc;
mod collapse;
mod indexed;
mod represent;

use thiserror::Error;

use crate::bridge::BridgeError;
use crate::dblcat::DblCatError;
use crate::fincat::FinCatError;

pub use bc::{check_beck_chevalley, check_fibration, BCReport, BcSquare};
pub use collapse::{iso_class_monoid, iso_classes};
pub use indexed::{indexed_monoidal, Mode};
pub use represent::{find_representing_functor, tensor_witnesses, TensorWitness};

#[derive(Debug, Error)]
pub enum MonoidalError {
    #[error("Φ along {map} is not representable: no universal element at {object}")]
    NotRepresentable { map: String, object: String },
    #[error("search budget of {budget} exhausted")]
    SearchBudgetExceeded { budget: u64 },
    #[error("missing limit: no {diagram}")]
    MissingLimits { diagram: String },
    #[error("Beck-Chevalley fails: {} failed checks", .0.report.failures())]
    BCViolation(Box<BCReport>),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Dbl(#[from] DblCatError),
    #[error(transparent)]
    Cat(#[from] FinCatError),
    #[error(transparent)]
    Bridge(#[from] BridgeError),
}
