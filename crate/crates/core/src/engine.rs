//! Edge insertion and deletion with round-robin flips and lazy information
//! updates.
//!
//! The directed operations recurse along a path of flips. Both are written as
//! loops: insertion records the path and runs the informing passes afterwards
//! in reverse order, which is the order the recursive formulation produces.

use crate::error::{Error, Result};
use crate::model::OrientedMultigraph;
use crate::store::DiEdgeStore;
use crate::VertexId;

/// Work done by one top-level update.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct UpdateOutcome {
    /// Copies reoriented, summed over all `b` directed operations.
    pub flips: u64,
    /// Information updates, including the one made when a record is created.
    pub info_updates: u64,
    /// Longest flip chain of a single directed operation.
    pub max_depth: u32,
}

impl UpdateOutcome {
    fn absorb_depth(&mut self, depth: u32) {
        self.flips += depth as u64;
        self.max_depth = self.max_depth.max(depth);
    }
}

impl<S: DiEdgeStore> OrientedMultigraph<S> {
    /// Upper bound on the flip chain of a single directed operation:
    /// `ceil(log_{1+lambda}(b * n)) + 2`.
    pub fn depth_bound(&self) -> u32 {
        let bn = (self.params.b() as u64 * self.vertex_count().max(1) as u64).min(u32::MAX as u64);
        let c = self.classes.class_of(bn as u32);
        // class_of is a floor; one more covers the ceiling.
        c + 1 + 2
    }

    /// Inserts the undirected edge `{u, v}` as `b` directed copies, each
    /// placed at the endpoint of currently smaller out-degree (ties go to `u`).
    pub fn insert_edge(&mut self, u: VertexId, v: VertexId) -> Result<UpdateOutcome> {
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        self.store.ensure_vertex(u.max(v));
        if self.has_edge(u, v) {
            return Err(Error::DuplicateEdge(u, v));
        }
        let mut out = UpdateOutcome::default();
        self.edges += 1;
        for _ in 0..self.params.b() {
            let (fwd, bwd) = self.locate_pair(u, v);
            if self.store.out_degree(u) <= self.store.out_degree(v) {
                self.insert_diedge(u, v, fwd, bwd, &mut out)?;
            } else {
                self.insert_diedge(v, u, bwd, fwd, &mut out)?;
            }
        }
        self.finish(&out);
        Ok(out)
    }

    /// Deletes the undirected edge `{u, v}`, one copy at a time: a copy
    /// oriented `v -> u` if one exists, otherwise `u -> v`.
    pub fn delete_edge(&mut self, u: VertexId, v: VertexId) -> Result<UpdateOutcome> {
        if !self.has_edge(u, v) {
            return Err(Error::AbsentEdge(u, v));
        }
        let mut out = UpdateOutcome::default();
        for _ in 0..self.params.b() {
            match self.locate_pair(u, v) {
                (_, Some(q)) => self.delete_diedge(v, q, &mut out)?,
                (Some(p), None) => self.delete_diedge(u, p, &mut out)?,
                (None, None) => {
                    return Err(Error::Integrity(format!(
                        "edge {{{u}, {v}}} ran out of copies before b deletions"
                    )))
                }
            }
        }
        self.edges -= 1;
        self.finish(&out);
        Ok(out)
    }

    fn finish(&mut self, out: &UpdateOutcome) {
        self.totals.flips += out.flips;
        self.totals.info_updates += out.info_updates;
        debug_assert!(
            out.max_depth <= self.depth_bound(),
            "flip chain {} exceeds bound {}",
            out.max_depth,
            self.depth_bound()
        );
        let per_op = 2 * self.params.scan_budget() as u64 + 1;
        debug_assert!(
            out.info_updates <= self.params.b() as u64 * per_op * (out.max_depth as u64 + 1),
            "{} information updates exceed the work bound",
            out.info_updates
        );
    }

    /// Adds one copy of `u -> v`. `existing` is the record's position in
    /// `A+(u)`; `partner` is the position of `v -> u` in `A+(v)`.
    fn add(
        &mut self,
        u: VertexId,
        v: VertexId,
        existing: Option<u32>,
        partner: Option<u32>,
        out: &mut UpdateOutcome,
    ) -> Result<u32> {
        match existing {
            Some(p) => {
                self.store.increment(u, p, self.params.b())?;
                Ok(p)
            }
            None => {
                let class = self.classes.class_of(self.store.out_degree(u) + 1);
                out.info_updates += 1;
                self.store.create(u, v, partner, class)
            }
        }
    }

    /// Informs the records following the cursor of `u`, each at most once,
    /// without moving the cursor.
    fn info_pass(&mut self, u: VertexId, out: &mut UpdateOutcome) -> Result<()> {
        let len = self.store.out_len(u);
        if len == 0 {
            return Ok(());
        }
        let start = self.store.robin(u) % len;
        let count = self.params.scan_budget().min(len);
        let class = self.classes.class_of(self.store.out_degree(u));
        out.info_updates += count as u64;
        for k in 1..=count {
            let pos = (start + k) % len;
            if class != self.store.class(u, pos) {
                self.store.reclass(u, pos, class)?;
            }
        }
        Ok(())
    }

    fn insert_diedge(
        &mut self,
        mut u: VertexId,
        mut v: VertexId,
        mut existing: Option<u32>,
        mut partner: Option<u32>,
        out: &mut UpdateOutcome,
    ) -> Result<()> {
        let budget = self.params.scan_budget();
        let mut path = std::mem::take(&mut self.path);
        path.clear();
        let mut depth = 0u32;
        loop {
            self.add(u, v, existing, partner, out)?;
            path.push(u);
            let Some(r) = self.scan(u, budget) else {
                break;
            };
            let x = self.store.target(u, r);
            debug_assert!(
                self.store.out_degree(u) > self.store.out_degree(x),
                "flip from {u} to {x} does not lower the larger degree"
            );
            let rev = self.store.reverse(u, r);
            let freed = self.store.decrement(u, r)?;
            depth += 1;
            existing = rev;
            partner = if freed { None } else { Some(r) };
            v = u;
            u = x;
        }
        out.absorb_depth(depth);
        for &w in path.iter().rev() {
            self.info_pass(w, out)?;
        }
        self.path = path;
        Ok(())
    }

    /// Round-robin scan of up to `budget` records after the cursor. Returns
    /// the position of the first flip candidate, leaving the cursor on it.
    fn scan(&mut self, u: VertexId, budget: u32) -> Option<u32> {
        let len = self.store.out_len(u);
        let start = self.store.robin(u) % len;
        if self.flips_enabled {
            let du = self.store.out_degree(u);
            for k in 1..=budget.min(len) {
                let r = (start + k) % len;
                let x = self.store.target(u, r);
                if self.params.exceeds(du, self.store.out_degree(x)) {
                    self.store.set_robin(u, r);
                    return Some(r);
                }
            }
        }
        // Beyond one full turn the cursor only keeps rotating.
        self.store
            .set_robin(u, ((start as u64 + budget as u64) % len as u64) as u32);
        None
    }

    fn delete_diedge(
        &mut self,
        mut u: VertexId,
        mut pos: u32,
        out: &mut UpdateOutcome,
    ) -> Result<()> {
        let mut depth = 0u32;
        loop {
            self.store.decrement(u, pos)?;
            let candidate = self.store.max_in_first(u).filter(|&(x, _)| {
                self.flips_enabled
                    && self
                        .params
                        .exceeds(self.store.out_degree(x), self.store.out_degree(u))
            });
            let Some((x, px)) = candidate else {
                self.info_pass(u, out)?;
                break;
            };
            let existing = self.store.reverse(x, px);
            self.add(u, x, existing, Some(px), out)?;
            depth += 1;
            u = x;
            pos = px;
        }
        out.absorb_depth(depth);
        Ok(())
    }
}
