//! Exact double Hurwitz numbers and the Toda-lattice identities satisfied by
//! their generating function.
//!
//! The crate is organised bottom-up:
//!
//! - [`partitions`]: integer partitions, centralizer orders, Maya sets and the
//!   two evaluations of the content polynomial `f2`.
//! - [`characters`]: symmetric-group characters via Murnaghan–Nakayama, memoized.
//! - [`formal_series`]: sparse truncated series over exact rationals in
//!   `q, β, p_k, p'_k` with optional auxiliary symbols `z, s_n, s'_n`.
//! - [`hurwitz`]: Burnside's covering count, Schur functions, the τ-function
//!   and connected double Hurwitz numbers.
//! - [`integrable`]: residual checks for the Toda equation, its one-variable
//!   specialization, the τₙ shift map and low-order Hirota equations.
//! - [`oracle`]: brute-force enumeration of monodromy tuples.
//!
//! Every number is an exact rational; there is no floating point anywhere.

pub mod characters;
pub mod error;
pub mod formal_series;
pub mod hurwitz;
pub mod integrable;
pub mod oracle;
pub mod partitions;
pub mod rational;

pub use characters::CharacterCache;
pub use error::{HurwitzError, Result};
pub use formal_series::{AuxMonomial, MonomialKey, PShift, Side, TruncatedSeries, Truncation};
pub use hurwitz::{Genus, HurwitzEngine, HurwitzRecord, HurwitzTables};
pub use integrable::{HirotaPerturbation, VerificationReport};
pub use oracle::{Discrepancy, EnumerationMode, OracleCaps};
pub use partitions::{MayaSet, Partition};
pub use rational::Rational;
