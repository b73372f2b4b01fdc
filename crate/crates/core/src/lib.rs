//! Milnor invariants of pure braids and the algebra around them.
//!
//! The crate computes longitudes and Milnor μ-invariants through the Magnus
//! expansion, Orr coordinates in bracket kernels, Morita–Milnor classes in
//! the Koszul complex of a free nilpotent Lie algebra, tree combinations for
//! the tree part of the Kontsevich integral, and an independent route to μ
//! through the HOMFLYPT polynomial of fused cables.

pub mod diagrams;
pub mod error;
pub mod homflypt;
pub mod linalg;
pub mod magnus;
pub mod nilpotent;
pub mod rational;
pub mod words;

pub use error::{Error, ErrorKind, Result};
