//! Enumeration of Z/p-covers of stable weighted graphs, the symmetric
//! Δ-complex they form, its rational homology, and the loci inside it.

pub mod census;
pub mod complex;
pub mod error;
pub mod genus2;
pub mod graph;
pub mod linalg;
pub mod loci;
pub mod pcover;
mod present;

pub use error::{Error, Result};
pub use graph::{GraphBuilder, WeightedGraph};
pub use pcover::{CoverBuilder, CoverKey, PCover};
pub use present::{compose, inverse, sign};
