//! Rounding to an integral orientation, quality metrics and the fairness
//! auditor.

use crate::model::OrientedMultigraph;
use crate::params::Lambda;
use crate::store::DiEdgeStore;
use crate::VertexId;

/// One direction per undirected edge.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntegralOrientation {
    n: usize,
    /// Sorted arcs `(u, v)`, meaning `u -> v`.
    arcs: Vec<(VertexId, VertexId)>,
    out_degrees: Vec<u32>,
}

impl IntegralOrientation {
    /// Builds the orientation from arcs on vertices `0..n`. Arcs naming a
    /// vertex `>= n` grow `n`.
    pub fn from_arcs(n: usize, mut arcs: Vec<(VertexId, VertexId)>) -> Self {
        arcs.sort_unstable();
        let n = arcs
            .iter()
            .map(|&(u, v)| u.max(v) as usize + 1)
            .max()
            .unwrap_or(0)
            .max(n);
        let mut out_degrees = vec![0u32; n];
        for &(u, _) in &arcs {
            out_degrees[u as usize] += 1;
        }
        IntegralOrientation {
            n,
            arcs,
            out_degrees,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[(VertexId, VertexId)] {
        &self.arcs
    }

    pub fn out_degrees(&self) -> &[u32] {
        &self.out_degrees
    }

    pub fn out_degree(&self, u: VertexId) -> u32 {
        self.out_degrees.get(u as usize).copied().unwrap_or(0)
    }

    /// Undirected edges as `(min, max)`, sorted.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut e: Vec<_> = self
            .arcs
            .iter()
            .map(|&(u, v)| (u.min(v), u.max(v)))
            .collect();
        e.sort_unstable();
        e
    }

    pub fn metrics(&self) -> QualityReport {
        metrics(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct QualityReport {
    pub max_out: u32,
    pub sum_sq: u64,
    /// Filled in when an audit was run.
    pub fairness_violations: Option<usize>,
}

/// Orients `{u, v}` as `u -> v` when more than half of its copies point that
/// way, breaking an exact half toward the smaller id.
pub fn round_naive<S: DiEdgeStore>(g: &OrientedMultigraph<S>) -> IntegralOrientation {
    let b = g.params().b() as u64;
    let arcs = g
        .diedges()
        .into_iter()
        .filter(|&(u, v, c)| 2 * c as u64 > b || (2 * c as u64 == b && u < v))
        .map(|(u, v, _)| (u, v))
        .collect();
    IntegralOrientation::from_arcs(g.vertex_count(), arcs)
}

pub fn metrics(o: &IntegralOrientation) -> QualityReport {
    QualityReport {
        max_out: o.out_degrees.iter().copied().max().unwrap_or(0),
        sum_sq: o.out_degrees.iter().map(|&d| d as u64 * d as u64).sum(),
        fairness_violations: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuditMode {
    /// The engine's own flip threshold, including the `b/4` floor.
    Operational,
    /// The plain fairness inequality without the floor.
    Ideal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FairnessViolation {
    pub u: VertexId,
    pub v: VertexId,
    pub degree_u: u32,
    pub degree_v: u32,
}

pub type Violations = Vec<FairnessViolation>;

/// `d_u > (1 + lambda) * d_v + theta_scaled`, plus `4 * d_u > b` in
/// operational mode.
fn unfair(lambda: Lambda, theta_scaled: u64, b: u64, mode: AuditMode, du: u32, dv: u32) -> bool {
    let (p, q) = (lambda.num() as u64, lambda.den() as u64);
    let (du, dv) = (du as u64, dv as u64);
    let floor_ok = match mode {
        AuditMode::Operational => 4 * du > b,
        AuditMode::Ideal => true,
    };
    floor_ok && q * du > (q + p) * dv + q * theta_scaled
}

/// Every record `u -> v` with at least one copy whose endpoints break the
/// fairness inequality. Degrees count lifted copies, so `theta` is scaled by
/// `b`.
pub fn audit_fairness<S: DiEdgeStore>(
    g: &OrientedMultigraph<S>,
    lambda: Lambda,
    theta: u32,
    mode: AuditMode,
) -> Violations {
    let b = g.params().b() as u64;
    g.diedges()
        .into_iter()
        .filter_map(|(u, v, _)| {
            let (du, dv) = (g.out_degree(u), g.out_degree(v));
            unfair(lambda, theta as u64 * b, b, mode, du, dv).then_some(FairnessViolation {
                u,
                v,
                degree_u: du,
                degree_v: dv,
            })
        })
        .collect()
}

/// The ideal fairness audit on an integral orientation.
pub fn audit_integral(o: &IntegralOrientation, lambda: Lambda, theta: u32) -> Violations {
    o.arcs
        .iter()
        .filter_map(|&(u, v)| {
            let (du, dv) = (o.out_degree(u), o.out_degree(v));
            unfair(lambda, theta as u64, 1, AuditMode::Ideal, du, dv).then_some(FairnessViolation {
                u,
                v,
                degree_u: du,
                degree_v: dv,
            })
        })
        .collect()
}
