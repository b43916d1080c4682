//! The oriented lifted multigraph: every undirected edge `{u, v}` is held as
//! `b` directed copies split between the records `u -> v` and `v -> u`.

use std::fmt;

use crate::classes::LogDegreeClasses;
use crate::error::{Error, Result};
use crate::params::Params;
use crate::store::{DiEdgeStore, Violation};
use crate::variant::Fractional;
use crate::VertexId;

/// Running totals over the graph's lifetime.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EngineTotals {
    pub flips: u64,
    pub info_updates: u64,
}

/// Share of an edge oriented from one endpoint: `copies / b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Weight {
    pub copies: u32,
    pub b: u32,
}

impl Weight {
    pub fn as_f64(self) -> f64 {
        self.copies as f64 / self.b as f64
    }
}

#[derive(Debug, Clone)]
pub struct OrientedMultigraph<S = Fractional> {
    pub(crate) params: Params,
    pub(crate) classes: LogDegreeClasses,
    pub(crate) store: S,
    pub(crate) edges: usize,
    pub(crate) flips_enabled: bool,
    pub(crate) totals: EngineTotals,
    pub(crate) path: Vec<VertexId>,
}

impl<S: DiEdgeStore> OrientedMultigraph<S> {
    /// An empty orientation on `n` vertices; more vertices are added on first
    /// reference.
    pub fn new(params: Params, n: usize) -> Result<Self> {
        let mut store = S::with_lift(params.b())?;
        if n > 0 {
            let last = VertexId::try_from(n - 1)
                .map_err(|_| Error::Config(format!("{n} vertices exceed the id range")))?;
            store.ensure_vertex(last);
        }
        Ok(OrientedMultigraph {
            classes: LogDegreeClasses::new(params.lambda()),
            params,
            store,
            edges: 0,
            flips_enabled: true,
            totals: EngineTotals::default(),
            path: Vec::new(),
        })
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn classes(&self) -> &LogDegreeClasses {
        &self.classes
    }

    pub fn store(&self) -> &S {
        &self.store
    }

    /// Raw store access for fault-injection tests.
    #[doc(hidden)]
    pub fn store_mut(&mut self) -> &mut S {
        &mut self.store
    }

    /// Test hook: with flips disabled the engine still places copies and runs
    /// information updates but never reorients an existing copy.
    #[doc(hidden)]
    pub fn set_flips_enabled(&mut self, enabled: bool) {
        self.flips_enabled = enabled;
    }

    pub fn vertex_count(&self) -> usize {
        self.store.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn totals(&self) -> EngineTotals {
        self.totals
    }

    /// Out-degree of `u` in the lifted multigraph.
    pub fn out_degree(&self, u: VertexId) -> u32 {
        if (u as usize) < self.vertex_count() {
            self.store.out_degree(u)
        } else {
            0
        }
    }

    /// Positions of the records `u -> v` and `v -> u`.
    pub(crate) fn locate_pair(&self, u: VertexId, v: VertexId) -> (Option<u32>, Option<u32>) {
        let n = self.vertex_count();
        if u as usize >= n || v as usize >= n {
            return (None, None);
        }
        if let Some(p) = self.store.find_out(u, v) {
            (Some(p), self.store.reverse(u, p))
        } else {
            (None, self.store.find_out(v, u))
        }
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        let (fwd, bwd) = self.locate_pair(u, v);
        fwd.is_some() || bwd.is_some()
    }

    /// Number of copies oriented `u -> v`.
    pub fn copies(&self, u: VertexId, v: VertexId) -> Result<u32> {
        match self.locate_pair(u, v) {
            (None, None) => Err(Error::AbsentEdge(u, v)),
            (Some(p), _) => Ok(self.store.counter(u, p)),
            (None, Some(_)) => Ok(0),
        }
    }

    /// `d(u -> v)`, the fraction of the edge oriented out of `u`.
    pub fn fractional_weight(&self, u: VertexId, v: VertexId) -> Result<Weight> {
        Ok(Weight {
            copies: self.copies(u, v)?,
            b: self.params.b(),
        })
    }

    /// Every live record as `(source, target, counter)`, sorted.
    pub fn diedges(&self) -> Vec<(VertexId, VertexId, u32)> {
        let mut out = Vec::new();
        for u in 0..self.vertex_count() as VertexId {
            for p in 0..self.store.out_len(u) {
                out.push((u, self.store.target(u, p), self.store.counter(u, p)));
            }
        }
        out.sort_unstable();
        out
    }

    /// Walks every vertex, out-list and bucket and reports each broken
    /// invariant with its location.
    pub fn check_structure(&self) -> std::result::Result<(), StructureReport> {
        let mut bad = Vec::new();
        let s = &self.store;
        let b = self.params.b();
        let n = s.vertex_count();
        let mut degree_sum = 0u64;
        let mut in_records = vec![0usize; n];
        let mut paired = 0usize;
        let mut unpaired = 0usize;

        for u in 0..n as VertexId {
            let len = s.out_len(u);
            if s.robin(u) >= len.max(1) {
                bad.push(Violation::new(
                    "robin in range",
                    format!("vertex {u}: robin {} of {len}", s.robin(u)),
                ));
            }
            let mut copies = 0u64;
            for p in 0..len {
                let v = s.target(u, p);
                let c = s.counter(u, p);
                let here = || format!("{u}->{v} at {u}[{p}]");
                copies += c as u64;
                if v as usize >= n || v == u {
                    bad.push(Violation::new("target is another vertex", here()));
                    continue;
                }
                in_records[v as usize] += 1;
                if c == 0 || c > b {
                    bad.push(Violation::new(
                        "1 <= counter <= b",
                        format!("{}: {c}", here()),
                    ));
                }
                let class = s.class(u, p);
                let bpos = s.bucket_pos(u, p);
                if s.bucket_member(v, class, bpos) != Some((u, p)) {
                    bad.push(Violation::new(
                        "bucket_pos back-reference",
                        format!("{}: bucket {class} position {bpos}", here()),
                    ));
                }
                match s.reverse(u, p) {
                    Some(q) => {
                        paired += 1;
                        if q >= s.out_len(v) || s.target(v, q) != u || s.reverse(v, q) != Some(p) {
                            bad.push(Violation::new("reverse link", format!("{}: {q}", here())));
                        } else if c + s.counter(v, q) != b {
                            bad.push(Violation::new(
                                "pairing",
                                format!("{}: {c} + {} != {b}", here(), s.counter(v, q)),
                            ));
                        }
                    }
                    None => {
                        unpaired += 1;
                        if s.find_out(v, u).is_some() {
                            bad.push(Violation::new(
                                "reverse link",
                                format!("{}: missing", here()),
                            ));
                        } else if c != b {
                            bad.push(Violation::new("pairing", format!("{}: {c} != {b}", here())));
                        }
                    }
                }
            }
            if copies != s.out_degree(u) as u64 {
                bad.push(Violation::new(
                    "out_degree equals counter sum",
                    format!("vertex {u}: {} vs {copies}", s.out_degree(u)),
                ));
            }
            degree_sum += s.out_degree(u) as u64;
        }

        for v in 0..n as VertexId {
            let mut members = 0usize;
            for (class, slots) in s.in_buckets(v) {
                for (i, &(src, p)) in slots.iter().enumerate() {
                    members += 1;
                    let ok = (src as usize) < n
                        && p < s.out_len(src)
                        && s.target(src, p) == v
                        && s.class(src, p) == class
                        && s.bucket_pos(src, p) == i as u32;
                    if !ok {
                        bad.push(Violation::new(
                            "bucket member resolves to its record",
                            format!("bucket {class} of {v}, position {i}: ({src}, {p})"),
                        ));
                    }
                }
            }
            if members != in_records[v as usize] {
                bad.push(Violation::new(
                    "buckets hold exactly the in-records",
                    format!(
                        "vertex {v}: {members} members, {} in-records",
                        in_records[v as usize]
                    ),
                ));
            }
        }

        if degree_sum != b as u64 * self.edges as u64 {
            bad.push(Violation::new(
                "degree sum = b * |E|",
                format!("{degree_sum} != {b} * {}", self.edges),
            ));
        }
        if !paired.is_multiple_of(2) || unpaired + paired / 2 != self.edges {
            bad.push(Violation::new(
                "record pairs match edge count",
                format!(
                    "{unpaired} single + {paired} paired records, {} edges",
                    self.edges
                ),
            ));
        }
        s.check_layout(&mut bad);

        if bad.is_empty() {
            Ok(())
        } else {
            Err(StructureReport { violations: bad })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub violations: Vec<Violation>,
}

impl fmt::Display for StructureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} structural violation(s):", self.violations.len())?;
        for v in self.violations.iter().take(20) {
            writeln!(f, "  {}: {}", v.invariant, v.location)?;
        }
        Ok(())
    }
}

impl std::error::Error for StructureReport {}
