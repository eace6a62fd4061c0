//! Combinatorics of intervals in the permutation pattern poset and in
//! generalized subword order over rooted forests.
//!
//! The crate is organized around a small number of layers:
//!
//! * [`perm`] — permutations in one-line notation, pattern containment,
//!   occurrences and embeddings, direct/skew sums and decompositions.
//! * [`poset`] — explicit intervals (element set, Hasse diagram, rank
//!   function) together with structural predicates: connectivity,
//!   rank-unimodality, Sperner via Dilworth, poset isomorphism.
//! * [`pattern`] — interval construction for the pattern poset.
//! * [`mobius`] — the Möbius function by the defining recursion and by the
//!   recursive formulas for decomposable top elements, cross-validated.
//! * [`disconnect`] — the embedding-partition disconnectivity test,
//!   augmentation constructors, subinterval scanning, and the Monte Carlo
//!   prevalence experiment.
//! * [`subword`] — words over a rooted-forest alphabet, disconnectivity
//!   characterizations, the (modified) position labeling, and the dual
//!   CL-shellability certifier, plus the layered-permutation bridge.
//! * [`topology`] — order complexes of open intervals, reduced Euler
//!   characteristic, Betti numbers over exact fields, Cohen-Macaulayness.
//! * [`scan`] — batch scanners, pinned regression fixtures, and JSON-lines records
//!   backing the command-line interface.

pub mod disconnect;
mod error;
mod linalg;
pub mod mobius;
pub mod pattern;
pub mod perm;
pub mod poset;
pub mod scan;
pub mod subword;
pub mod topology;

pub use error::Error;
pub use num_bigint::BigInt;
pub use perm::{DecompKind, Decomposition, Embedding, Permutation};
pub use poset::Interval;

pub type Result<T> = std::result::Result<T, Error>;
