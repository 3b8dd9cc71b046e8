//! Exact computational algebra for small finite rings.
//!
//! The crate builds finite rings compositionally (modular integers,
//! polynomial quotients, direct products, upper-triangular matrix rings,
//! quotients by two-sided ideals) and provides:
//!
//! * [`ring`] — construction, canonical element indexing, and exact
//!   structural arithmetic;
//! * [`analysis`] — units, idempotents, Jacobson radical, commutants, and
//!   the ring-class predicates (clean, uniquely clean, strongly clean,
//!   uniquely strongly clean, abelian, Boolean, local, uniquely bleached);
//! * [`sylvester`] — the operator equation `a·x − x·b = v`, solved either by
//!   brute-force scan or by the finite geometric series available when one
//!   side is a unit and the other nilpotent;
//! * [`usc`] — constructive strongly clean decompositions in triangular
//!   matrix rings, including the bicommutant and signed variants;
//! * [`oracle`] — assumption-free exhaustive enumeration of clean-type
//!   expressions, used to validate every decomposition algorithm.
//!
//! All rings are immutable after construction and every operation is a pure
//! function of its inputs, so values can be shared freely across threads.

pub mod analysis;
pub mod oracle;
pub mod ring;
pub mod sylvester;
pub mod usc;

pub use ring::{Elem, Ring, RingExpr, TriMatrix};
