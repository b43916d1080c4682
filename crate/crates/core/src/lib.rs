//! Fully dynamic fair edge orientations.
//!
//! Every undirected edge is lifted to `b` parallel copies that are oriented
//! independently; the share of copies leaving a vertex is its fractional
//! out-degree. Insertions and deletions keep the orientation locally fair:
//! no copy `u -> v` survives while `u`'s degree is far above `v`'s. In-neighbours
//! are bucketed by a logarithmic class of their degree, which is refreshed
//! lazily in round-robin passes.
//!
//! ```
//! use fairorient::{OrientedMultigraph, Params, Fractional};
//!
//! let params = Params::new("1/10".parse().unwrap(), 1, 10).unwrap();
//! let mut g: OrientedMultigraph<Fractional> = OrientedMultigraph::new(params, 2).unwrap();
//! g.insert_edge(0, 1).unwrap();
//! assert_eq!(g.copies(0, 1).unwrap(), 5);
//! assert_eq!(g.copies(1, 0).unwrap(), 5);
//! ```

pub mod alloc_count;
pub mod bucket;
pub mod classes;
pub mod engine;
pub mod error;
pub mod model;
pub mod oracle;
pub mod packed;
pub mod params;
pub mod quality;
pub mod store;
pub mod unpacked;
pub mod variant;
pub mod workload;

pub type VertexId = u32;

pub use bucket::{ArrayBuckets, BucketKind, BucketStore, ListBuckets};
pub use classes::LogDegreeClasses;
pub use engine::UpdateOutcome;
pub use error::{Error, Result};
pub use model::{EngineTotals, OrientedMultigraph, StructureReport, Weight};
pub use params::{Lambda, Params};
pub use quality::{AuditMode, IntegralOrientation, QualityReport};
pub use store::{DiEdgeStore, Violation};
pub use variant::{AnyGraph, Fractional, FractionalList, Packed, PackedList, Variant};
