//! Named store configurations and a runtime-selected graph.

use std::fmt;
use std::str::FromStr;

use crate::bucket::{ArrayBuckets, BucketKind, ListBuckets};
use crate::engine::UpdateOutcome;
use crate::error::{Error, Result};
use crate::model::{EngineTotals, OrientedMultigraph, StructureReport};
use crate::packed::{PackedStore, Slot, Widths};
use crate::params::Params;
use crate::quality::{audit_fairness, round_naive, AuditMode, IntegralOrientation, Violations};
use crate::unpacked::{RecordId, UnpackedStore};
use crate::VertexId;

/// Unpacked records, array buckets.
pub type Fractional = UnpackedStore<ArrayBuckets<RecordId>>;
/// Unpacked records, list buckets.
pub type FractionalList = UnpackedStore<ListBuckets<RecordId>>;
/// Packed records, array buckets.
pub type Packed = PackedStore<ArrayBuckets<Slot>>;
/// Packed records, list buckets.
pub type PackedList = PackedStore<ListBuckets<Slot>>;
/// Packed records with a 9-bit counter (b up to 511) and 13-bit reverse
/// index, for lifts beyond the default 8-bit counter.
pub type PackedWide = PackedStore<ArrayBuckets<Slot>, Widths<9, 10, 13>>;
pub type PackedWideList = PackedStore<ListBuckets<Slot>, Widths<9, 10, 13>>;

/// The implementations selectable from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Fractional,
    Packed,
    PackedList,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Fractional, Variant::Packed, Variant::PackedList];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Fractional => "fractional",
            Variant::Packed => "packed",
            Variant::PackedList => "packed-list",
        }
    }

    pub fn default_buckets(self) -> BucketKind {
        match self {
            Variant::PackedList => BucketKind::List,
            _ => BucketKind::Array,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown variant `{s}`")))
    }
}

impl FromStr for BucketKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "array" => Ok(BucketKind::Array),
            "list" => Ok(BucketKind::List),
            _ => Err(Error::Config(format!("unknown bucket store `{s}`"))),
        }
    }
}

/// A graph whose store is chosen at runtime.
#[derive(Debug, Clone)]
pub enum AnyGraph {
    Fractional(OrientedMultigraph<Fractional>),
    FractionalList(OrientedMultigraph<FractionalList>),
    Packed(OrientedMultigraph<Packed>),
    PackedList(OrientedMultigraph<PackedList>),
    PackedWide(OrientedMultigraph<PackedWide>),
    PackedWideList(OrientedMultigraph<PackedWideList>),
}

macro_rules! dispatch {
    ($self:expr, $g:ident => $body:expr) => {
        match $self {
            AnyGraph::Fractional($g) => $body,
            AnyGraph::FractionalList($g) => $body,
            AnyGraph::Packed($g) => $body,
            AnyGraph::PackedList($g) => $body,
            AnyGraph::PackedWide($g) => $body,
            AnyGraph::PackedWideList($g) => $body,
        }
    };
}

impl AnyGraph {
    /// Packed variants switch to the wide layout when `b` exceeds the
    /// default 8-bit counter.
    pub fn new(
        variant: Variant,
        buckets: Option<BucketKind>,
        params: Params,
        n: usize,
    ) -> Result<Self> {
        let buckets = buckets.unwrap_or(variant.default_buckets());
        let wide = params.b() > 255;
        Ok(match (variant, buckets, wide) {
            (Variant::Fractional, BucketKind::Array, _) => {
                AnyGraph::Fractional(OrientedMultigraph::new(params, n)?)
            }
            (Variant::Fractional, BucketKind::List, _) => {
                AnyGraph::FractionalList(OrientedMultigraph::new(params, n)?)
            }
            (_, BucketKind::Array, false) => AnyGraph::Packed(OrientedMultigraph::new(params, n)?),
            (_, BucketKind::List, false) => {
                AnyGraph::PackedList(OrientedMultigraph::new(params, n)?)
            }
            (_, BucketKind::Array, true) => {
                AnyGraph::PackedWide(OrientedMultigraph::new(params, n)?)
            }
            (_, BucketKind::List, true) => {
                AnyGraph::PackedWideList(OrientedMultigraph::new(params, n)?)
            }
        })
    }

    pub fn insert_edge(&mut self, u: VertexId, v: VertexId) -> Result<UpdateOutcome> {
        dispatch!(self, g => g.insert_edge(u, v))
    }

    pub fn delete_edge(&mut self, u: VertexId, v: VertexId) -> Result<UpdateOutcome> {
        dispatch!(self, g => g.delete_edge(u, v))
    }

    pub fn params(&self) -> &Params {
        dispatch!(self, g => g.params())
    }

    pub fn vertex_count(&self) -> usize {
        dispatch!(self, g => g.vertex_count())
    }

    pub fn edge_count(&self) -> usize {
        dispatch!(self, g => g.edge_count())
    }

    pub fn out_degree(&self, u: VertexId) -> u32 {
        dispatch!(self, g => g.out_degree(u))
    }

    pub fn totals(&self) -> EngineTotals {
        dispatch!(self, g => g.totals())
    }

    pub fn depth_bound(&self) -> u32 {
        dispatch!(self, g => g.depth_bound())
    }

    pub fn diedges(&self) -> Vec<(VertexId, VertexId, u32)> {
        dispatch!(self, g => g.diedges())
    }

    pub fn check_structure(&self) -> std::result::Result<(), StructureReport> {
        dispatch!(self, g => g.check_structure())
    }

    pub fn round_naive(&self) -> IntegralOrientation {
        dispatch!(self, g => round_naive(g))
    }

    pub fn audit_fairness(&self, mode: AuditMode) -> Violations {
        dispatch!(self, g => {
            let p = *g.params();
            audit_fairness(g, p.lambda(), p.theta(), mode)
        })
    }

    /// Layout name of the underlying store.
    pub fn layout(&self) -> &'static str {
        use crate::store::DiEdgeStore;
        match self {
            AnyGraph::Fractional(_) => Fractional::LAYOUT,
            AnyGraph::FractionalList(_) => FractionalList::LAYOUT,
            AnyGraph::Packed(_) => Packed::LAYOUT,
            AnyGraph::PackedList(_) => PackedList::LAYOUT,
            AnyGraph::PackedWide(_) => PackedWide::LAYOUT,
            AnyGraph::PackedWideList(_) => PackedWideList::LAYOUT,
        }
    }
}
