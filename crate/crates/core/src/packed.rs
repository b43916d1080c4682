//! The packed record layout.
//!
//! Each out-list stores its records inline as three 32-bit words: the target
//! vertex, a word holding the counter, the cached class and the index of the
//! paired record in the target's out-list, and a word holding the record's
//! position inside its bucket. The source is never stored in the record; a
//! bucket member names its record as `(source, position)`.
//!
//! Field widths are fixed at compile time through [`WordLayout`]. Writing a
//! value that does not fit is an error, never a silent wrap.

use std::fmt::Debug;
use std::marker::PhantomData;

use crate::bucket::{ArrayBuckets, BucketKind, BucketStore};
use crate::error::{Error, Result};
use crate::store::{robin_after_removal, DiEdgeStore, Violation};
use crate::VertexId;

pub trait WordLayout: Copy + Debug + Default + Send + Sync + 'static {
    const COUNTER_BITS: u32;
    const CLASS_BITS: u32;
    const REV_BITS: u32;

    const VALID: () = assert!(
        Self::COUNTER_BITS > 0
            && Self::CLASS_BITS > 0
            && Self::REV_BITS > 1
            && Self::COUNTER_BITS + Self::CLASS_BITS + Self::REV_BITS <= 32
    );

    /// All-ones reverse field: no paired record.
    const NO_REV: u32 = (1 << Self::REV_BITS) - 1;
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Widths<const COUNTER: u32, const CLASS: u32, const REV: u32>;

impl<const COUNTER: u32, const CLASS: u32, const REV: u32> WordLayout
    for Widths<COUNTER, CLASS, REV>
{
    const COUNTER_BITS: u32 = COUNTER;
    const CLASS_BITS: u32 = CLASS;
    const REV_BITS: u32 = REV;
}

/// Counter 8 bits, class 10 bits, reverse index 14 bits.
pub type DefaultWidths = Widths<8, 10, 14>;

fn mask(bits: u32) -> u32 {
    if bits >= 32 {
        u32::MAX
    } else {
        (1 << bits) - 1
    }
}

fn fit(field: &'static str, value: u32, width: u32) -> Result<u32> {
    if value > mask(width) {
        Err(Error::FieldOverflow {
            field,
            value: value as u64,
            width,
        })
    } else {
        Ok(value)
    }
}

/// Packs `(counter, class, rev_index)` into one word, counter in the low bits.
pub fn pack<L: WordLayout>(counter: u32, class: u32, rev_index: u32) -> Result<u32> {
    let () = L::VALID;
    let counter = fit("counter", counter, L::COUNTER_BITS)?;
    let class = fit("class", class, L::CLASS_BITS)?;
    let rev = fit("rev_index", rev_index, L::REV_BITS)?;
    Ok(counter | class << L::COUNTER_BITS | rev << (L::COUNTER_BITS + L::CLASS_BITS))
}

pub fn unpack<L: WordLayout>(word: u32) -> (u32, u32, u32) {
    let counter = word & mask(L::COUNTER_BITS);
    let class = (word >> L::COUNTER_BITS) & mask(L::CLASS_BITS);
    let rev = (word >> (L::COUNTER_BITS + L::CLASS_BITS)) & mask(L::REV_BITS);
    (counter, class, rev)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PackedDiEdge {
    pub target: VertexId,
    pub word_a: u32,
    pub bucket_pos: u32,
}

/// How a bucket names a packed record.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Slot {
    pub source: VertexId,
    pub pos: u32,
}

#[derive(Debug, Clone, Default)]
struct PackedVertex<B> {
    degree: u32,
    robin: u32,
    out: Vec<PackedDiEdge>,
    buckets: B,
}

#[derive(Debug, Clone)]
pub struct PackedStore<B = ArrayBuckets<Slot>, L = DefaultWidths> {
    b: u32,
    vertices: Vec<PackedVertex<B>>,
    _layout: PhantomData<L>,
}

impl<B: BucketStore<Slot>, L: WordLayout> PackedStore<B, L> {
    fn rec(&self, u: VertexId, pos: u32) -> PackedDiEdge {
        self.vertices[u as usize].out[pos as usize]
    }

    fn fields(&self, u: VertexId, pos: u32) -> (u32, u32, u32) {
        unpack::<L>(self.rec(u, pos).word_a)
    }

    fn rec_mut(&mut self, u: VertexId, pos: u32) -> &mut PackedDiEdge {
        &mut self.vertices[u as usize].out[pos as usize]
    }

    fn set_rev(&mut self, u: VertexId, pos: u32, rev: u32) -> Result<()> {
        let (counter, class, _) = self.fields(u, pos);
        self.rec_mut(u, pos).word_a = pack::<L>(counter, class, rev)?;
        Ok(())
    }

    /// The packed record at `A+(u)[pos]`.
    pub fn record(&self, u: VertexId, pos: u32) -> PackedDiEdge {
        self.rec(u, pos)
    }
}

impl<B: BucketStore<Slot> + Send, L: WordLayout> DiEdgeStore for PackedStore<B, L> {
    const LAYOUT: &'static str = "packed";

    fn with_lift(b: u32) -> Result<Self> {
        fit("counter", b, L::COUNTER_BITS)?;
        Ok(PackedStore {
            b,
            vertices: Vec::new(),
            _layout: PhantomData,
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
            self.vertices.resize_with(need, PackedVertex::default);
        }
    }

    fn out_degree(&self, u: VertexId) -> u32 {
        self.vertices[u as usize].degree
    }

    fn robin(&self, u: VertexId) -> u32 {
        self.vertices[u as usize].robin
    }

    fn set_robin(&mut self, u: VertexId, robin: u32) {
        self.vertices[u as usize].robin = robin;
    }

    fn out_len(&self, u: VertexId) -> u32 {
        self.vertices[u as usize].out.len() as u32
    }

    fn target(&self, u: VertexId, pos: u32) -> VertexId {
        self.rec(u, pos).target
    }

    fn counter(&self, u: VertexId, pos: u32) -> u32 {
        self.fields(u, pos).0
    }

    fn class(&self, u: VertexId, pos: u32) -> u32 {
        self.fields(u, pos).1
    }

    fn bucket_pos(&self, u: VertexId, pos: u32) -> u32 {
        self.rec(u, pos).bucket_pos
    }

    fn reverse(&self, u: VertexId, pos: u32) -> Option<u32> {
        let rev = self.fields(u, pos).2;
        (rev != L::NO_REV).then_some(rev)
    }

    fn increment(&mut self, u: VertexId, pos: u32, b: u32) -> Result<()> {
        let (counter, class, rev) = self.fields(u, pos);
        if counter >= b {
            return Err(Error::Integrity(format!(
                "counter of {u}->{} would exceed b = {b}",
                self.rec(u, pos).target
            )));
        }
        self.rec_mut(u, pos).word_a = pack::<L>(counter + 1, class, rev)?;
        self.vertices[u as usize].degree += 1;
        Ok(())
    }

    fn create(
        &mut self,
        u: VertexId,
        v: VertexId,
        partner: Option<u32>,
        class: u32,
    ) -> Result<u32> {
        let pos = self.out_len(u);
        // Both directions store each other's index; the all-ones value is
        // reserved for "no partner".
        if let Some(q) = partner {
            let worst = q.max(pos);
            if worst >= L::NO_REV {
                return Err(Error::FieldOverflow {
                    field: "rev_index",
                    value: worst as u64,
                    width: L::REV_BITS,
                });
            }
        }
        let word_a = pack::<L>(1, class, partner.unwrap_or(L::NO_REV))?;
        let bucket_pos = self.vertices[v as usize]
            .buckets
            .insert(Slot { source: u, pos }, class);
        if let Some(q) = partner {
            self.set_rev(v, q, pos)?;
        }
        let vertex = &mut self.vertices[u as usize];
        vertex.out.push(PackedDiEdge {
            target: v,
            word_a,
            bucket_pos,
        });
        vertex.degree += 1;
        Ok(pos)
    }

    fn decrement(&mut self, u: VertexId, pos: u32) -> Result<bool> {
        let rec = self.rec(u, pos);
        let (counter, class, rev) = unpack::<L>(rec.word_a);
        if counter == 0 || self.vertices[u as usize].degree == 0 {
            return Err(Error::Integrity(format!(
                "counter underflow on {u}->{}",
                rec.target
            )));
        }
        self.vertices[u as usize].degree -= 1;
        if counter > 1 {
            self.rec_mut(u, pos).word_a = pack::<L>(counter - 1, class, rev)?;
            return Ok(false);
        }

        if rev != L::NO_REV {
            self.set_rev(rec.target, rev, L::NO_REV)?;
        }
        let moved = self.vertices[rec.target as usize].buckets.remove(
            class,
            rec.bucket_pos,
            Slot { source: u, pos },
        )?;
        if let Some(m) = moved {
            self.rec_mut(m.source, m.pos).bucket_pos = rec.bucket_pos;
        }

        let old_last = self.out_len(u) - 1;
        let vertex = &mut self.vertices[u as usize];
        vertex.out.swap_remove(pos as usize);
        vertex.robin = robin_after_removal(vertex.robin, pos, old_last);
        if pos < old_last {
            let m = self.rec(u, pos);
            let (_, m_class, m_rev) = unpack::<L>(m.word_a);
            self.vertices[m.target as usize].buckets.set(
                m_class,
                m.bucket_pos,
                Slot { source: u, pos },
            )?;
            if m_rev != L::NO_REV {
                self.set_rev(m.target, m_rev, pos)?;
            }
        }
        Ok(true)
    }

    fn reclass(&mut self, u: VertexId, pos: u32, class: u32) -> Result<()> {
        let rec = self.rec(u, pos);
        let (counter, old, rev) = unpack::<L>(rec.word_a);
        let word_a = pack::<L>(counter, class, rev)?;
        let slot = Slot { source: u, pos };
        let buckets = &mut self.vertices[rec.target as usize].buckets;
        let moved = buckets.remove(old, rec.bucket_pos, slot)?;
        let bucket_pos = buckets.insert(slot, class);
        if let Some(m) = moved {
            self.rec_mut(m.source, m.pos).bucket_pos = rec.bucket_pos;
        }
        let r = self.rec_mut(u, pos);
        r.word_a = word_a;
        r.bucket_pos = bucket_pos;
        Ok(())
    }

    fn max_in_first(&self, u: VertexId) -> Option<(VertexId, u32)> {
        let slot = self.vertices[u as usize].buckets.max_bucket_first()?;
        Some((slot.source, slot.pos))
    }

    fn bucket_member(&self, v: VertexId, class: u32, pos: u32) -> Option<(VertexId, u32)> {
        let slot = self.vertices[v as usize].buckets.get(class, pos)?;
        Some((slot.source, slot.pos))
    }

    fn in_buckets(&self, v: VertexId) -> Vec<(u32, Vec<(VertexId, u32)>)> {
        self.vertices[v as usize]
            .buckets
            .non_empty()
            .into_iter()
            .map(|(class, slots)| (class, slots.iter().map(|s| (s.source, s.pos)).collect()))
            .collect()
    }

    fn check_layout(&self, out: &mut Vec<Violation>) {
        for (u, vertex) in self.vertices.iter().enumerate() {
            for (p, rec) in vertex.out.iter().enumerate() {
                if unpack::<L>(rec.word_a).0 > self.b {
                    out.push(Violation::new(
                        "counter <= b",
                        format!("{u}->{} at {u}[{p}]", rec.target),
                    ));
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
    }

    fn record_bytes() -> usize {
        std::mem::size_of::<PackedDiEdge>()
    }
}
