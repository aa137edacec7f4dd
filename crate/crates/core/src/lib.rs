//! Separations and tangles of small graphs, and the constructions that make
//! a tangle survive edge deletion, vertex suppression and restriction to a
//! component.
//!
//! ```
//! use tanglekit::graph::named::complete;
//! use tanglekit::tangles::enumerate_tangles;
//!
//! let k4 = complete(4);
//! assert_eq!(enumerate_tangles(&k4, 3).len(), 1);
//! ```

pub mod decomposition;
pub mod error;
pub mod generate;
pub mod graph;
pub mod inducing;
pub mod io;
pub mod paths;
pub mod pipeline;
pub mod provenance;
pub mod rainbow_cloud;
pub mod separations;
pub mod survival;
pub mod tangles;
pub mod vset;

pub use error::{Error, Result};
pub use graph::{edge, Edge, Graph};
pub use separations::{Separation, SeparationSystem};
pub use tangles::Tangle;
pub use vset::VertexSet;
