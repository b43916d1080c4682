//! Storage layer for the oriented multigraph.
//!
//! A store keeps, for every vertex `u`, its exact out-degree in the lifted
//! multigraph, the out-list `A+(u)` of directed-edge records `u -> v`, the
//! round-robin cursor and the bucketed in-neighbour records of `u`. Records
//! are addressed by `(source, position in the source's out-list)`; a position
//! is only valid until the next mutation of that out-list.
//!
//! The engine drives every store through the same primitive operations in
//! the same order, so two stores built from the same history hold identical
//! orientations.

use std::fmt::Debug;

use crate::bucket::BucketKind;
use crate::error::Result;
use crate::VertexId;

/// One failed structural check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub invariant: &'static str,
    pub location: String,
}

impl Violation {
    pub fn new(invariant: &'static str, location: impl Into<String>) -> Self {
        Violation {
            invariant,
            location: location.into(),
        }
    }
}

pub trait DiEdgeStore: Clone + Debug + Send {
    /// Record layout name, e.g. `"fractional"` or `"packed"`.
    const LAYOUT: &'static str;

    /// Builds an empty store for lift multiplicity `b`.
    fn with_lift(b: u32) -> Result<Self>;

    fn bucket_kind(&self) -> BucketKind;

    fn vertex_count(&self) -> usize;

    /// Grows the vertex arena so that `v` exists.
    fn ensure_vertex(&mut self, v: VertexId);

    fn out_degree(&self, u: VertexId) -> u32;

    fn robin(&self, u: VertexId) -> u32;

    fn set_robin(&mut self, u: VertexId, robin: u32);

    fn out_len(&self, u: VertexId) -> u32;

    fn target(&self, u: VertexId, pos: u32) -> VertexId;

    fn counter(&self, u: VertexId, pos: u32) -> u32;

    /// Cached log-degree class of the record.
    fn class(&self, u: VertexId, pos: u32) -> u32;

    fn bucket_pos(&self, u: VertexId, pos: u32) -> u32;

    /// Position of the paired record `v -> u` inside `A+(v)`.
    fn reverse(&self, u: VertexId, pos: u32) -> Option<u32>;

    /// Position of the record `u -> v`, found by scanning `A+(u)`.
    fn find_out(&self, u: VertexId, v: VertexId) -> Option<u32> {
        (0..self.out_len(u)).find(|&p| self.target(u, p) == v)
    }

    /// Adds one copy to an existing record.
    fn increment(&mut self, u: VertexId, pos: u32, b: u32) -> Result<()>;

    /// Creates `u -> v` with one copy, appending it to `A+(u)` and filing it
    /// under `class` in the buckets of `v`. `partner` is the position of
    /// `v -> u` in `A+(v)` when that record exists.
    fn create(&mut self, u: VertexId, v: VertexId, partner: Option<u32>, class: u32)
        -> Result<u32>;

    /// Removes one copy. Returns `true` when the record reached zero copies
    /// and was deleted; the last record of `A+(u)` then moves into `pos`.
    fn decrement(&mut self, u: VertexId, pos: u32) -> Result<bool>;

    /// Moves the record into the bucket of class `class`.
    fn reclass(&mut self, u: VertexId, pos: u32, class: u32) -> Result<()>;

    /// The first record of the highest non-empty in-bucket of `u`.
    fn max_in_first(&self, u: VertexId) -> Option<(VertexId, u32)>;

    /// Member at `pos` of in-bucket `class` of `v`, resolved to
    /// `(source, position)`.
    fn bucket_member(&self, v: VertexId, class: u32, pos: u32) -> Option<(VertexId, u32)>;

    /// Non-empty in-buckets of `v`, descending, as `(class, members)` where
    /// each member is resolved to `(source, position)`.
    fn in_buckets(&self, v: VertexId) -> Vec<(u32, Vec<(VertexId, u32)>)>;

    /// Store-specific checks: back-references the generic walk cannot see and
    /// bucket-backend shape.
    fn check_layout(&self, out: &mut Vec<Violation>);

    /// Bytes of one directed-edge record, excluding container overhead.
    fn record_bytes() -> usize;
}

/// New round-robin cursor after swap-removing `removed` from a list whose
/// last index was `old_last`.
pub(crate) fn robin_after_removal(robin: u32, removed: u32, old_last: u32) -> u32 {
    if robin != old_last {
        robin
    } else if removed < old_last {
        removed
    } else {
        0
    }
}
