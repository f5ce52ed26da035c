//! The bounded site of finite sets and pullbacks, lax double functor data
//! over it, and the checkers for its axioms.

mod checks;
mod operad;
mod product;
mod site;
mod transform;

use thiserror::Error;

use crate::fincat::FinCatError;
use crate::finset::FinSetError;

pub use checks::{check_lax_functor, check_pb_functoriality, check_product_preservation};
pub use operad::{DfOperad, DfOperadRules, Kernel1, Kernel2, TerminalDf};
pub use product::{
    check_product_diagram, paste_cells, product_projections, product_witness, PasteDirection,
    ProductDiagramViolation, ProductDiagramWitness,
};
pub use site::{BoundedSite, Square};
pub use transform::{check_double_transform, DoubleTransform, IdentityTransform};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DblCatError {
    #[error("{what} needs a set of size {size}, above the site bound {bound}")]
    SiteClosureExceeded {
        what: String,
        size: usize,
        bound: usize,
    },
    #[error("not a site map: {0}")]
    NotInSite(String),
    #[error("mismatched endpoints: {0}")]
    MismatchedEndpoints(String),
    #[error("rules failed: {0}")]
    Rules(String),
    #[error(transparent)]
    Cat(#[from] FinCatError),
    #[error(transparent)]
    Set(#[from] FinSetError),
}
