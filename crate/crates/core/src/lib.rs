//! Enumeration and classification of maximal unitary Condorcet domains.
//!
//! A Condorcet domain is a set of linear orders on `n` alternatives whose
//! restriction to any three orders and three alternatives never forms a
//! Latin square; equivalently, every alternative triple satisfies a never
//! condition ("law"). This crate enumerates all maximal unitary Condorcet
//! domains for degrees 3..=7 with a pruned tree search over laws, reduces
//! them to isomorphism and flip classes, and classifies every class against
//! a catalogue of structural properties.

pub mod canon;
pub mod classify;
pub mod domain;
pub mod error;
pub mod files;
pub mod laws;
pub mod oracle;
pub mod perm;
pub mod schemes;
pub mod search;

pub use canon::{canonical_form, isomorphic, ClassKey};
pub use domain::Domain;
pub use error::{Error, Result};
pub use laws::{Law, LawTables};
pub use perm::Permutation;
pub use search::{enumerate_mucds, SearchConfig};
