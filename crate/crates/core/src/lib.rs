//! Equivariant linear maps between tensor power spaces `(R^n)^{⊗k} -> (R^n)^{⊗l}`
//! for the orthogonal, special orthogonal and symplectic groups.
//!
//! Spanning sets are built straight from diagram combinatorics:
//!
//! * [`diagrams`] enumerates (k,l)-Brauer diagrams and (l+k)\n-diagrams.
//! * [`spanmat`] turns a diagram into its sparse integer matrix.
//! * [`layers`] assembles spanning sets, feature and bias extensions, local
//!   symmetry products, and evaluates weighted layers.
//! * [`groups`] samples group elements and applies tensor power actions.
//! * [`verify`] checks equivariance numerically and compares span ranks with
//!   an independent dimension oracle.
//! * [`export`] reads and writes the JSON interchange format.

pub mod diagrams;
pub mod error;
pub mod export;
pub mod groups;
pub mod layers;
pub mod spanmat;
pub mod sparse;
pub mod verify;

pub use error::{Error, Result};
pub use groups::GroupKind;
pub use layers::{Factor, SpanningSet};
