//! Finite models of double-functor operads over finite sets and pullbacks.
//!
//! The crate is organised bottom-up:
//!
//! * [`finset`]: finite sets, maps, pullbacks, sums and fibers;
//! * [`fincat`]: finite categories, functors, profunctors with coend
//!   composition, cells and isomorphism search;
//! * [`dblcat`]: the bounded site of finite sets, lax double functor data
//!   and its axiom checkers;
//! * [`multicat`]: symmetric multicategories and commutative monoids;
//! * [`bridge`]: the correspondences multicategory ↔ DF operad and
//!   commutative monoid ↔ Mackey functor;
//! * [`monoidal`]: representability, Beck-Chevalley, fibrations and the
//!   indexed (co)product constructions.
//!
//! Every universally quantified law is checked exhaustively up to a size
//! bound, and every verdict is a [`report::Report`] carrying that bound.

pub mod bridge;
pub mod dblcat;
pub mod fincat;
pub mod finset;
pub mod monoidal;
pub mod multicat;
pub mod radix;
pub mod report;
