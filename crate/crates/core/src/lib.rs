//! Factorization of finite relations into independent components.
//!
//! A partition of a relation's attributes is *independent* when the relation
//! equals the join of its projections onto the blocks. Independent partitions
//! are closed under meet, so every relation has a finest one, its *focus*;
//! projecting onto the focus blocks yields the relation's prime factors.
//!
//! The focus is computed without enumerating partitions: starting from the
//! partition into singletons, [`decomposition::alpha`] repeatedly finds the
//! minimal self-correlated sets of blocks ([`correlation`]), merges
//! overlapping ones and flattens the result back onto attributes. The
//! transformer is inflationary, its fixed points are exactly the independent
//! partitions, and the chain from the bottom reaches the focus in at most
//! `|scheme|` applications.
//!
//! ```
//! use relfocus::{decomposition, fixtures};
//!
//! let r = fixtures::separable_pairs();
//! let f = decomposition::factorize(&r).unwrap();
//! assert_eq!(r.scheme().partition_json(&f.focus), r#"[["A","B"],["C","D"]]"#);
//! assert_eq!((f.cells_flat, f.cells_factorized), (36, 12));
//! ```
//!
//! [`oracle`] holds brute-force counterparts of every query for differential
//! testing.

pub mod bitset;
pub mod correlation;
pub mod decomposition;
mod error;
pub mod fixtures;
pub mod io;
pub mod oracle;
pub mod partition;
pub mod relation;

pub use bitset::BitSet;
pub use error::{Error, ErrorKind, Result};
pub use partition::Partition;
pub use relation::{Relation, Scheme};
