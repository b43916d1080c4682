//! Per-vertex partition of in-neighbour records by cached log-degree class.
//!
//! Two interchangeable backends trade space for time:
//!
//! - [`ListBuckets`]: a singly linked list of the non-empty buckets, sorted by
//!   descending class. Finding a class walks the list.
//! - [`ArrayBuckets`]: a direct-address array where slot `i` holds class `i`.
//!   Empty buckets stay materialized and the array never shrinks.
//!
//! Both backends append on insert and swap-remove on removal, so for the same
//! history they keep members in exactly the same order.

use std::fmt::Debug;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BucketKind {
    List,
    Array,
}

impl BucketKind {
    pub fn name(self) -> &'static str {
        match self {
            BucketKind::List => "list",
            BucketKind::Array => "array",
        }
    }
}

pub trait BucketStore<M: Copy + Eq + Debug>: Default + Clone + Debug {
    const KIND: BucketKind;

    /// Appends `member` to class `class`; returns its position inside the
    /// bucket.
    fn insert(&mut self, member: M, class: u32) -> u32;

    /// Swap-removes `member`, which must sit at `pos` of class `class`.
    /// Returns the member that was moved into `pos`, if any.
    fn remove(&mut self, class: u32, pos: u32, member: M) -> Result<Option<M>>;

    /// Returns (creating if needed) the member array of class `class`.
    fn locate(&mut self, class: u32) -> &mut Vec<M>;

    fn get(&self, class: u32, pos: u32) -> Option<M>;

    /// Overwrites the member stored at `pos` of class `class`.
    fn set(&mut self, class: u32, pos: u32, member: M) -> Result<()>;

    /// First member of the non-empty bucket with the largest class.
    fn max_bucket_first(&self) -> Option<M>;

    /// Number of members over all buckets.
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Non-empty buckets in descending class order.
    fn non_empty(&self) -> Vec<(u32, &[M])>;

    /// Backend-specific shape invariants; each failure is pushed as text.
    fn check_shape(&self, out: &mut Vec<String>);
}

fn stale(class: u32, pos: u32) -> Error {
    Error::Integrity(format!("no member at position {pos} of bucket {class}"))
}

fn swap_remove_checked<M: Copy + Eq + Debug>(
    members: &mut Vec<M>,
    class: u32,
    pos: u32,
    member: M,
) -> Result<Option<M>> {
    let p = pos as usize;
    match members.get(p) {
        Some(&m) if m == member => {}
        Some(&m) => {
            return Err(Error::Integrity(format!(
                "bucket {class} position {pos} holds {m:?}, expected {member:?}"
            )))
        }
        None => return Err(stale(class, pos)),
    }
    members.swap_remove(p);
    Ok(members.get(p).copied())
}

/// Direct-address bucket array.
#[derive(Debug, Clone)]
pub struct ArrayBuckets<M> {
    slots: Vec<Vec<M>>,
    /// No bucket above `top` is non-empty.
    top: u32,
    len: usize,
}

impl<M> Default for ArrayBuckets<M> {
    fn default() -> Self {
        ArrayBuckets {
            slots: Vec::new(),
            top: 0,
            len: 0,
        }
    }
}

impl<M> ArrayBuckets<M> {
    /// Length of the direct-address array, including empty buckets.
    pub fn capacity_classes(&self) -> usize {
        self.slots.len()
    }
}

impl<M: Copy + Eq + Debug> BucketStore<M> for ArrayBuckets<M> {
    const KIND: BucketKind = BucketKind::Array;

    fn insert(&mut self, member: M, class: u32) -> u32 {
        let bucket = self.locate(class);
        bucket.push(member);
        let pos = bucket.len() as u32 - 1;
        self.len += 1;
        self.top = self.top.max(class);
        pos
    }

    fn remove(&mut self, class: u32, pos: u32, member: M) -> Result<Option<M>> {
        let bucket = self
            .slots
            .get_mut(class as usize)
            .ok_or_else(|| stale(class, pos))?;
        let moved = swap_remove_checked(bucket, class, pos, member)?;
        self.len -= 1;
        if class == self.top {
            while self.top > 0 && self.slots[self.top as usize].is_empty() {
                self.top -= 1;
            }
        }
        Ok(moved)
    }

    fn locate(&mut self, class: u32) -> &mut Vec<M> {
        let i = class as usize;
        if i >= self.slots.len() {
            self.slots.resize_with(i + 1, Vec::new);
        }
        &mut self.slots[i]
    }

    fn get(&self, class: u32, pos: u32) -> Option<M> {
        self.slots.get(class as usize)?.get(pos as usize).copied()
    }

    fn set(&mut self, class: u32, pos: u32, member: M) -> Result<()> {
        let slot = self
            .slots
            .get_mut(class as usize)
            .and_then(|b| b.get_mut(pos as usize))
            .ok_or_else(|| stale(class, pos))?;
        *slot = member;
        Ok(())
    }

    fn max_bucket_first(&self) -> Option<M> {
        if self.len == 0 {
            return None;
        }
        self.slots.get(self.top as usize)?.first().copied()
    }

    fn len(&self) -> usize {
        self.len
    }

    fn non_empty(&self) -> Vec<(u32, &[M])> {
        self.slots
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, b)| !b.is_empty())
            .map(|(i, b)| (i as u32, b.as_slice()))
            .collect()
    }

    fn check_shape(&self, out: &mut Vec<String>) {
        let counted: usize = self.slots.iter().map(Vec::len).sum();
        if counted != self.len {
            out.push(format!(
                "array buckets hold {counted} members but count {}",
                self.len
            ));
        }
        if let Some(i) = self
            .slots
            .iter()
            .enumerate()
            .skip(self.top as usize + 1)
            .find(|(_, b)| !b.is_empty())
            .map(|(i, _)| i)
        {
            out.push(format!("bucket {i} is non-empty above top {}", self.top));
        }
    }
}

const NIL: u32 = u32::MAX;

#[derive(Debug, Clone)]
struct ListNode<M> {
    index: u32,
    next: u32,
    members: Vec<M>,
}

/// Sorted singly linked list of non-empty buckets, largest class first.
/// Nodes live in a vector and link by index.
#[derive(Debug, Clone)]
pub struct ListBuckets<M> {
    nodes: Vec<ListNode<M>>,
    head: u32,
    len: usize,
}

impl<M> Default for ListBuckets<M> {
    fn default() -> Self {
        ListBuckets {
            nodes: Vec::new(),
            head: NIL,
            len: 0,
        }
    }
}

impl<M> ListBuckets<M> {
    /// Walks the list; returns `(predecessor, node)` of the first node whose
    /// index is `<= class`.
    fn seek(&self, class: u32) -> (u32, u32) {
        let (mut prev, mut cur) = (NIL, self.head);
        while cur != NIL && self.nodes[cur as usize].index > class {
            prev = cur;
            cur = self.nodes[cur as usize].next;
        }
        (prev, cur)
    }

    fn find(&self, class: u32) -> Option<u32> {
        let (_, cur) = self.seek(class);
        (cur != NIL && self.nodes[cur as usize].index == class).then_some(cur)
    }

    fn link_to(&mut self, prev: u32, node: u32) {
        if prev == NIL {
            self.head = node;
        } else {
            self.nodes[prev as usize].next = node;
        }
    }

    /// Unlinks the (empty) bucket of `class` and compacts the node vector.
    fn drop_node(&mut self, class: u32) {
        let (prev, node) = self.seek(class);
        let next = self.nodes[node as usize].next;
        self.link_to(prev, next);
        let last = self.nodes.len() as u32 - 1;
        if node != last {
            // Whoever links to the last node must follow it into `node`.
            let mut pred = NIL;
            let mut cur = self.head;
            while cur != last {
                pred = cur;
                cur = self.nodes[cur as usize].next;
            }
            self.link_to(pred, node);
        }
        self.nodes.swap_remove(node as usize);
    }
}

impl<M: Copy + Eq + Debug> BucketStore<M> for ListBuckets<M> {
    const KIND: BucketKind = BucketKind::List;

    fn insert(&mut self, member: M, class: u32) -> u32 {
        let bucket = self.locate(class);
        bucket.push(member);
        let pos = bucket.len() as u32 - 1;
        self.len += 1;
        pos
    }

    fn remove(&mut self, class: u32, pos: u32, member: M) -> Result<Option<M>> {
        let node = self.find(class).ok_or_else(|| stale(class, pos))?;
        let members = &mut self.nodes[node as usize].members;
        let moved = swap_remove_checked(members, class, pos, member)?;
        let emptied = members.is_empty();
        self.len -= 1;
        if emptied {
            self.drop_node(class);
        }
        Ok(moved)
    }

    fn locate(&mut self, class: u32) -> &mut Vec<M> {
        let (prev, cur) = self.seek(class);
        let node = if cur != NIL && self.nodes[cur as usize].index == class {
            cur
        } else {
            let node = self.nodes.len() as u32;
            self.nodes.push(ListNode {
                index: class,
                next: cur,
                members: Vec::new(),
            });
            self.link_to(prev, node);
            node
        };
        &mut self.nodes[node as usize].members
    }

    fn get(&self, class: u32, pos: u32) -> Option<M> {
        let node = self.find(class)?;
        self.nodes[node as usize].members.get(pos as usize).copied()
    }

    fn set(&mut self, class: u32, pos: u32, member: M) -> Result<()> {
        let node = self.find(class).ok_or_else(|| stale(class, pos))?;
        let slot = self.nodes[node as usize]
            .members
            .get_mut(pos as usize)
            .ok_or_else(|| stale(class, pos))?;
        *slot = member;
        Ok(())
    }

    fn max_bucket_first(&self) -> Option<M> {
        if self.head == NIL {
            return None;
        }
        self.nodes[self.head as usize].members.first().copied()
    }

    fn len(&self) -> usize {
        self.len
    }

    fn non_empty(&self) -> Vec<(u32, &[M])> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut cur = self.head;
        while cur != NIL {
            let node = &self.nodes[cur as usize];
            if !node.members.is_empty() {
                out.push((node.index, node.members.as_slice()));
            }
            cur = node.next;
        }
        out
    }

    fn check_shape(&self, out: &mut Vec<String>) {
        let mut seen = 0usize;
        let mut members = 0usize;
        let mut last: Option<u32> = None;
        let mut cur = self.head;
        while cur != NIL {
            if seen > self.nodes.len() {
                out.push("bucket list contains a cycle".into());
                return;
            }
            let node = &self.nodes[cur as usize];
            if node.members.is_empty() {
                out.push(format!("empty bucket {} left in list", node.index));
            }
            if let Some(prev) = last {
                if node.index >= prev {
                    out.push(format!(
                        "bucket list not strictly descending: {} after {prev}",
                        node.index
                    ));
                }
            }
            last = Some(node.index);
            members += node.members.len();
            seen += 1;
            cur = node.next;
        }
        if seen != self.nodes.len() {
            out.push(format!(
                "{} bucket nodes allocated but {seen} reachable",
                self.nodes.len()
            ));
        }
        if members != self.len {
            out.push(format!(
                "list buckets hold {members} members but count {}",
                self.len
            ));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn classes<B: BucketStore<u32>>(b: &B) -> Vec<u32> {
        b.non_empty().into_iter().map(|(i, _)| i).collect()
    }

    fn insert_basics<B: BucketStore<u32>>() {
        let mut b = B::default();
        assert_eq!(b.insert(10, 3), 0);
        assert_eq!(classes(&b), vec![3]);
        assert_eq!(b.insert(11, 3), 1);
        assert_eq!(b.non_empty(), vec![(3, &[10u32, 11][..])]);
        let mut shape = Vec::new();
        b.check_shape(&mut shape);
        assert!(shape.is_empty(), "{shape:?}");
    }

    #[test]
    fn insert_into_empty_and_twice() {
        insert_basics::<ArrayBuckets<u32>>();
        insert_basics::<ListBuckets<u32>>();
    }

    #[test]
    fn list_keeps_descending_order() {
        let mut b = ListBuckets::default();
        b.insert(1, 5);
        b.insert(2, 2);
        b.insert(3, 7);
        assert_eq!(classes(&b), vec![7, 5, 2]);
        // splice between existing indices
        b.locate(4).push(4);
        b.len += 1;
        assert_eq!(classes(&b), vec![7, 5, 4, 2]);
    }

    fn removal_semantics<B: BucketStore<u32>>() {
        let mut b = B::default();
        b.insert(1, 0);
        assert_eq!(b.remove(0, 0, 1).unwrap(), None);
        assert!(b.is_empty());
        assert_eq!(b.max_bucket_first(), None);

        for m in [7, 8, 9] {
            b.insert(m, 4);
        }
        // removing position 0 pulls the last member forward
        assert_eq!(b.remove(4, 0, 7).unwrap(), Some(9));
        assert_eq!(b.get(4, 0), Some(9));
        assert_eq!(b.get(4, 1), Some(8));
        assert!(b.remove(4, 5, 8).is_err());
        assert!(b.remove(4, 1, 9).is_err());
        assert!(b.remove(6, 0, 9).is_err());
        b.remove(4, 1, 8).unwrap();
        b.remove(4, 0, 9).unwrap();
        assert!(b.is_empty());
        let mut shape = Vec::new();
        b.check_shape(&mut shape);
        assert!(shape.is_empty(), "{shape:?}");
    }

    #[test]
    fn remove_swaps_last_into_hole() {
        removal_semantics::<ArrayBuckets<u32>>();
        removal_semantics::<ListBuckets<u32>>();
    }

    #[test]
    fn list_drops_emptied_buckets() {
        let mut b = ListBuckets::default();
        for (m, c) in [(1, 5), (2, 2), (3, 7), (4, 5)] {
            b.insert(m, c);
        }
        b.remove(5, 0, 1).unwrap();
        b.remove(7, 0, 3).unwrap();
        assert_eq!(classes(&b), vec![5, 2]);
        b.remove(5, 0, 4).unwrap();
        b.remove(2, 0, 2).unwrap();
        assert!(b.nodes.is_empty());
        assert_eq!(b.head, NIL);
    }

    fn max_first<B: BucketStore<u32>>() {
        let mut b = B::default();
        assert_eq!(b.max_bucket_first(), None);
        b.insert(30, 0);
        assert_eq!(b.max_bucket_first(), Some(30));
        b.insert(10, 5);
        b.insert(11, 5);
        b.insert(20, 2);
        assert_eq!(b.max_bucket_first(), Some(10));
        b.remove(5, 0, 10).unwrap();
        assert_eq!(b.max_bucket_first(), Some(11));
        b.remove(5, 0, 11).unwrap();
        assert_eq!(b.max_bucket_first(), Some(20));
    }

    #[test]
    fn max_bucket_first_picks_top_class_head() {
        max_first::<ArrayBuckets<u32>>();
        max_first::<ListBuckets<u32>>();
    }

    #[test]
    fn array_locate_grows_with_empty_buckets() {
        let mut b = ArrayBuckets::<u32>::default();
        b.locate(9);
        assert_eq!(b.capacity_classes(), 10);
        b.locate(462);
        assert_eq!(b.capacity_classes(), 463);
        assert!(b.slots[100].is_empty());
        b.locate(3);
        assert_eq!(b.capacity_classes(), 463);
    }

    #[test]
    fn list_locate_reuses_existing() {
        let mut b = ListBuckets::<u32>::default();
        b.insert(1, 3);
        b.locate(3).push(2);
        b.len += 1;
        assert_eq!(b.nodes.len(), 1);
        assert_eq!(b.non_empty(), vec![(3, &[1u32, 2][..])]);
    }

    #[derive(Debug, Clone)]
    enum Op {
        Insert(u32),
        Remove(usize),
        Reclass(usize, u32),
    }

    fn op() -> impl Strategy<Value = Op> {
        prop_oneof![
            3 => (0u32..40).prop_map(Op::Insert),
            2 => any::<usize>().prop_map(Op::Remove),
            1 => (any::<usize>(), 0u32..40).prop_map(|(i, c)| Op::Reclass(i, c)),
        ]
    }

    /// Replays `ops` on a backend, tracking every member's (class, pos) the
    /// way the graph stores do.
    fn replay<B: BucketStore<u32>>(ops: &[Op]) -> (B, Vec<Option<u32>>) {
        let mut b = B::default();
        let mut loc: Vec<Option<(u32, u32)>> = Vec::new();
        let mut firsts = Vec::new();
        let live = |loc: &Vec<Option<(u32, u32)>>| -> Vec<u32> {
            (0..loc.len() as u32)
                .filter(|&m| loc[m as usize].is_some())
                .collect()
        };
        let take = |b: &mut B, loc: &mut Vec<Option<(u32, u32)>>, m: u32| {
            let (c, p) = loc[m as usize].take().unwrap();
            if let Some(moved) = b.remove(c, p, m).unwrap() {
                loc[moved as usize] = Some((c, p));
            }
        };
        for op in ops {
            match *op {
                Op::Insert(c) => {
                    let m = loc.len() as u32;
                    let p = b.insert(m, c);
                    loc.push(Some((c, p)));
                }
                Op::Remove(i) => {
                    let l = live(&loc);
                    if !l.is_empty() {
                        take(&mut b, &mut loc, l[i % l.len()]);
                    }
                }
                Op::Reclass(i, c) => {
                    let l = live(&loc);
                    if !l.is_empty() {
                        let m = l[i % l.len()];
                        take(&mut b, &mut loc, m);
                        let p = b.insert(m, c);
                        loc[m as usize] = Some((c, p));
                    }
                }
            }
            firsts.push(b.max_bucket_first());
            for (m, l) in loc.iter().enumerate() {
                if let Some((c, p)) = *l {
                    assert_eq!(b.get(c, p), Some(m as u32));
                }
            }
        }
        (b, firsts)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn backends_agree(ops in proptest::collection::vec(op(), 1000..1500)) {
            let (a, fa) = replay::<ArrayBuckets<u32>>(&ops);
            let (l, fl) = replay::<ListBuckets<u32>>(&ops);
            prop_assert_eq!(a.non_empty(), l.non_empty());
            prop_assert_eq!(fa, fl);
            let mut shape = Vec::new();
            a.check_shape(&mut shape);
            l.check_shape(&mut shape);
            prop_assert!(shape.is_empty(), "{:?}", shape);
        }
    }
}
