//! Exhaustive enumeration of complex Golay pairs with entries in
//! `{1, i, -1, -i}`.
//!
//! The search runs in four phases: half-sequence preprocessing with a
//! spectral filter, a sum-of-squares merge join producing candidate first
//! sequences, a clause-based partner search, and classification into
//! equivalence classes.

pub mod classify;
pub mod diophantine;
pub mod error;
pub mod join;
pub mod pipeline;
pub mod preprocess;
pub mod reference;
pub mod search;
pub mod seq;
pub mod solver;
pub mod spectral;

pub use classify::{classify_all, closure, counts, ClassCounts, ClassificationResult};
pub use error::{Error, Result};
pub use pipeline::{search, CountsRow, RunConfig, SearchOutcome, VerifyReport};
pub use preprocess::{HalfSequence, Parity};
pub use search::enumerate_partners;
pub use seq::{is_golay_pair, normalize, EquivOp, GaussianInt, PairRecord, Sequence, Z4};
pub use spectral::{exceeds_bound, FilterSchedule};
