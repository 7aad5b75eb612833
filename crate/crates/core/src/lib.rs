//! Homomorphism densities of triangle blowups `K_{a,b,c}`, and the graphs
//! used to probe them: random graphs, blowups, tensor powers, Behrend sets
//! and Ruzsa–Szemerédi graphs.
//!
//! ```
//! use blowup_core::{counting, graph::Graph};
//!
//! let k4 = Graph::complete(4);
//! assert_eq!(counting::triangle_hom_count(&k4).count, 24u32.into());
//! ```

pub mod bounds;
pub mod constructions;
pub mod counting;
pub mod error;
pub mod graph;
pub mod io;
pub mod label;
pub mod numeric;
pub mod rng;

pub use error::{Error, Result};
pub use graph::{BlowupShape, Graph, VertexPartition};
