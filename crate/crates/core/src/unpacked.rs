//! The plain record layout: every directed-edge record lives in a shared
//! arena with a stable id, and both the out-lists and the buckets hold ids.

use crate::bucket::{ArrayBuckets, BucketKind, BucketStore};
use crate::error::{Error, Result};
use crate::store::{robin_after_removal, DiEdgeStore, Violation};
use crate::VertexId;

pub type RecordId = u32;

const NONE: u32 = u32::MAX;

/// All parallel copies of `source -> target` in the lifted multigraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiEdgeRecord {
    pub source: VertexId,
    pub target: VertexId,
    /// Zero marks a free arena slot.
    pub counter: u32,
    /// Cached class of `source`'s degree, as of the last information update.
    pub log_degree: u32,
    /// Arena id of `target -> source`, or `u32::MAX`.
    pub reverse: RecordId,
    pub out_pos: u32,
    pub bucket_pos: u32,
}

impl DiEdgeRecord {
    pub fn reverse(&self) -> Option<RecordId> {
        (self.reverse != NONE).then_some(self.reverse)
    }
}

#[derive(Debug, Clone, Default)]
pub struct VertexRecord<B> {
    pub out_degree: u32,
    pub out_list: Vec<RecordId>,
    pub robin: u32,
    pub buckets: B,
}

#[derive(Debug, Clone)]
pub struct UnpackedStore<B = ArrayBuckets<RecordId>> {
    b: u32,
    vertices: Vec<VertexRecord<B>>,
    records: Vec<DiEdgeRecord>,
    free: Vec<RecordId>,
}

impl<B: BucketStore<RecordId>> UnpackedStore<B> {
    fn id(&self, u: VertexId, pos: u32) -> RecordId {
        self.vertices[u as usize].out_list[pos as usize]
    }

    fn rec(&self, u: VertexId, pos: u32) -> &DiEdgeRecord {
        &self.records[self.id(u, pos) as usize]
    }

    pub fn vertex(&self, u: VertexId) -> &VertexRecord<B> {
        &self.vertices[u as usize]
    }

    pub fn record(&self, u: VertexId, pos: u32) -> &DiEdgeRecord {
        self.rec(u, pos)
    }

    /// Number of live records in the arena.
    pub fn live_records(&self) -> usize {
        self.records.len() - self.free.len()
    }

    /// Test hook: overwrite a record's out-list back-reference.
    #[doc(hidden)]
    pub fn corrupt_out_pos(&mut self, u: VertexId, pos: u32, value: u32) {
        let id = self.id(u, pos);
        self.records[id as usize].out_pos = value;
    }

    fn alloc(&mut self, record: DiEdgeRecord) -> RecordId {
        match self.free.pop() {
            Some(id) => {
                self.records[id as usize] = record;
                id
            }
            None => {
                self.records.push(record);
                self.records.len() as RecordId - 1
            }
        }
    }
}

impl<B: BucketStore<RecordId> + Send> DiEdgeStore for UnpackedStore<B> {
    const LAYOUT: &'static str = "fractional";

    fn with_lift(b: u32) -> Result<Self> {
        Ok(UnpackedStore {
            b,
            vertices: Vec::new(),
            records: Vec::new(),
            free: Vec::new(),
        })
    }

    fn bucket_kind(&self) -> BucketKind {
        B::KIND
    }

    fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    fn ensure_vertex(&mut self, v: VertexId) {
        let need = v as usize + 1;
        if self.vertices.len() < need {
            self.vertices.resize_with(need, VertexRecord::default);
        }
    }

    fn out_degree(&self, u: VertexId) -> u32 {
        self.vertices[u as usize].out_degree
    }

    fn robin(&self, u: VertexId) -> u32 {
        self.vertices[u as usize].robin
    }

    fn set_robin(&mut self, u: VertexId, robin: u32) {
        self.vertices[u as usize].robin = robin;
    }

    fn out_len(&self, u: VertexId) -> u32 {
        self.vertices[u as usize].out_list.len() as u32
    }

    fn target(&self, u: VertexId, pos: u32) -> VertexId {
        self.rec(u, pos).target
    }

    fn counter(&self, u: VertexId, pos: u32) -> u32 {
        self.rec(u, pos).counter
    }

    fn class(&self, u: VertexId, pos: u32) -> u32 {
        self.rec(u, pos).log_degree
    }

    fn bucket_pos(&self, u: VertexId, pos: u32) -> u32 {
        self.rec(u, pos).bucket_pos
    }

    fn reverse(&self, u: VertexId, pos: u32) -> Option<u32> {
        self.rec(u, pos)
            .reverse()
            .map(|r| self.records[r as usize].out_pos)
    }

    fn increment(&mut self, u: VertexId, pos: u32, b: u32) -> Result<()> {
        let id = self.id(u, pos) as usize;
        let rec = &mut self.records[id];
        if rec.counter >= b {
            return Err(Error::Integrity(format!(
                "counter of {u}->{} would exceed b = {b}",
                rec.target
            )));
        }
        rec.counter += 1;
        self.vertices[u as usize].out_degree += 1;
        Ok(())
    }

    fn create(
        &mut self,
        u: VertexId,
        v: VertexId,
        partner: Option<u32>,
        class: u32,
    ) -> Result<u32> {
        let out_pos = self.out_len(u);
        let reverse = partner.map_or(NONE, |q| self.vertices[v as usize].out_list[q as usize]);
        let id = self.alloc(DiEdgeRecord {
            source: u,
            target: v,
            counter: 1,
            log_degree: class,
            reverse,
            out_pos,
            bucket_pos: 0,
        });
        let bucket_pos = self.vertices[v as usize].buckets.insert(id, class);
        self.records[id as usize].bucket_pos = bucket_pos;
        if reverse != NONE {
            self.records[reverse as usize].reverse = id;
        }
        let vertex = &mut self.vertices[u as usize];
        vertex.out_list.push(id);
        vertex.out_degree += 1;
        Ok(out_pos)
    }

    fn decrement(&mut self, u: VertexId, pos: u32) -> Result<bool> {
        let id = self.id(u, pos);
        let rec = self.records[id as usize];
        if rec.counter == 0 || self.vertices[u as usize].out_degree == 0 {
            return Err(Error::Integrity(format!(
                "counter underflow on {u}->{}",
                rec.target
            )));
        }
        self.records[id as usize].counter -= 1;
        self.vertices[u as usize].out_degree -= 1;
        if rec.counter > 1 {
            return Ok(false);
        }

        if let Some(r) = rec.reverse() {
            self.records[r as usize].reverse = NONE;
        }
        let moved = self.vertices[rec.target as usize].buckets.remove(
            rec.log_degree,
            rec.bucket_pos,
            id,
        )?;
        if let Some(m) = moved {
            self.records[m as usize].bucket_pos = rec.bucket_pos;
        }
        let vertex = &mut self.vertices[u as usize];
        let old_last = vertex.out_list.len() as u32 - 1;
        vertex.out_list.swap_remove(pos as usize);
        if pos < old_last {
            let m = vertex.out_list[pos as usize];
            self.records[m as usize].out_pos = pos;
        }
        vertex.robin = robin_after_removal(vertex.robin, pos, old_last);
        self.free.push(id);
        Ok(true)
    }

    fn reclass(&mut self, u: VertexId, pos: u32, class: u32) -> Result<()> {
        let id = self.id(u, pos);
        let rec = self.records[id as usize];
        let buckets = &mut self.vertices[rec.target as usize].buckets;
        let moved = buckets.remove(rec.log_degree, rec.bucket_pos, id)?;
        let bucket_pos = buckets.insert(id, class);
        if let Some(m) = moved {
            self.records[m as usize].bucket_pos = rec.bucket_pos;
        }
        let rec = &mut self.records[id as usize];
        rec.log_degree = class;
        rec.bucket_pos = bucket_pos;
        Ok(())
    }

    fn max_in_first(&self, u: VertexId) -> Option<(VertexId, u32)> {
        let id = self.vertices[u as usize].buckets.max_bucket_first()?;
        let rec = &self.records[id as usize];
        Some((rec.source, rec.out_pos))
    }

    fn bucket_member(&self, v: VertexId, class: u32, pos: u32) -> Option<(VertexId, u32)> {
        let id = self.vertices[v as usize].buckets.get(class, pos)?;
        let r = self.records.get(id as usize)?;
        Some((r.source, r.out_pos))
    }

    fn in_buckets(&self, v: VertexId) -> Vec<(u32, Vec<(VertexId, u32)>)> {
        self.vertices[v as usize]
            .buckets
            .non_empty()
            .into_iter()
            .map(|(class, ids)| {
                let slots = ids
                    .iter()
                    .map(|&id| {
                        let r = &self.records[id as usize];
                        (r.source, r.out_pos)
                    })
                    .collect();
                (class, slots)
            })
            .collect()
    }

    fn check_layout(&self, out: &mut Vec<Violation>) {
        let mut listed = 0usize;
        for (u, vertex) in self.vertices.iter().enumerate() {
            for (p, &id) in vertex.out_list.iter().enumerate() {
                listed += 1;
                let Some(rec) = self.records.get(id as usize) else {
                    out.push(Violation::new(
                        "record id in arena",
                        format!("{u}[{p}] -> #{id}"),
                    ));
                    continue;
                };
                let here = || format!("record #{id} {u}->{} at {u}[{p}]", rec.target);
                if rec.counter == 0 {
                    out.push(Violation::new("listed record is live", here()));
                }
                if rec.source as usize != u {
                    out.push(Violation::new("record source matches owner", here()));
                }
                if rec.out_pos as usize != p {
                    out.push(Violation::new(
                        "out_pos back-reference",
                        format!("{}: out_pos = {}", here(), rec.out_pos),
                    ));
                }
                if let Some(r) = rec.reverse() {
                    if self.records.get(r as usize).map(|x| x.reverse) != Some(id) {
                        out.push(Violation::new("reverse link is mutual", here()));
                    }
                }
                if rec.counter > self.b {
                    out.push(Violation::new("counter <= b", here()));
                }
            }
            for (class, ids) in vertex.buckets.non_empty() {
                for (i, &id) in ids.iter().enumerate() {
                    let ok = self.records.get(id as usize).is_some_and(|r| {
                        r.counter > 0
                            && r.target as usize == u
                            && r.log_degree == class
                            && r.bucket_pos as usize == i
                    });
                    if !ok {
                        out.push(Violation::new(
                            "bucket member back-reference",
                            format!("bucket {class} of {u}, position {i}: #{id}"),
                        ));
                    }
                }
            }
            let mut shape = Vec::new();
            vertex.buckets.check_shape(&mut shape);
            out.extend(
                shape
                    .into_iter()
                    .map(|s| Violation::new("bucket backend shape", format!("vertex {u}: {s}"))),
            );
        }
        if listed != self.live_records() {
            out.push(Violation::new(
                "arena live count",
                format!("{listed} listed, {} live", self.live_records()),
            ));
        }
        for &id in &self.free {
            if self.records[id as usize].counter != 0 {
                out.push(Violation::new("free slots are dead", format!("#{id}")));
            }
        }
    }

    fn record_bytes() -> usize {
        std::mem::size_of::<DiEdgeRecord>()
    }
}
