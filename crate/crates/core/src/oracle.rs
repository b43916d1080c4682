//! Exact reference orientations for small graphs.
//!
//! `solve_exact` removes improving paths until none is left. A path
//! `u ~> w` along oriented edges with `d(u) >= d(w) + 2` is improving:
//! reversing it lowers `d(u)` and raises `d(w)` by one, which strictly
//! decreases the squared sum. An orientation without improving paths
//! minimises the squared sum and the maximum out-degree at the same time.
//!
//! `solve_brute` enumerates all `2^m` orientations and serves as the oracle
//! for the oracle.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::quality::IntegralOrientation;
use crate::VertexId;

pub const EXACT_MAX_VERTICES: usize = 256;
pub const EXACT_MAX_EDGES: usize = 4096;
pub const BRUTE_MAX_EDGES: usize = 20;

fn vertex_span(n: usize, edges: &[(VertexId, VertexId)]) -> usize {
    edges
        .iter()
        .map(|&(u, v)| u.max(v) as usize + 1)
        .max()
        .unwrap_or(0)
        .max(n)
}

fn check_simple(edges: &[(VertexId, VertexId)]) -> Result<()> {
    let mut seen: Vec<_> = edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    for &(u, v) in &seen {
        if u == v {
            return Err(Error::SelfLoop(u));
        }
    }
    seen.sort_unstable();
    if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateEdge(w[0].0, w[0].1));
    }
    Ok(())
}

/// Optimal orientation by improving-path elimination.
pub fn solve_exact(n: usize, edges: &[(VertexId, VertexId)]) -> Result<IntegralOrientation> {
    let n = vertex_span(n, edges);
    if n > EXACT_MAX_VERTICES {
        return Err(Error::SizeCap {
            what: "vertices",
            limit: EXACT_MAX_VERTICES,
            actual: n,
        });
    }
    if edges.len() > EXACT_MAX_EDGES {
        return Err(Error::SizeCap {
            what: "edges",
            limit: EXACT_MAX_EDGES,
            actual: edges.len(),
        });
    }
    check_simple(edges)?;

    // tail[e] is the current source of edge e.
    let mut tail = Vec::with_capacity(edges.len());
    let mut degree = vec![0u32; n];
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(u, v)) in edges.iter().enumerate() {
        let t = if degree[u as usize] <= degree[v as usize] {
            u
        } else {
            v
        };
        degree[t as usize] += 1;
        tail.push(t);
        incident[u as usize].push(e);
        incident[v as usize].push(e);
    }
    let head = |e: usize, tail: &[VertexId]| {
        let (a, b) = edges[e];
        if tail[e] == a {
            b
        } else {
            a
        }
    };

    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![u32::MAX; n];
    let mut round = 0u32;
    let mut queue = VecDeque::new();
    loop {
        let mut order: Vec<usize> = (0..n).filter(|&u| degree[u] >= 2).collect();
        order.sort_unstable_by_key(|&u| (std::cmp::Reverse(degree[u]), u));
        let mut improved = false;
        for s in order {
            if degree[s] < 2 {
                continue;
            }
            round += 1;
            queue.clear();
            queue.push_back(s);
            seen[s] = round;
            let mut found = None;
            'bfs: while let Some(x) = queue.pop_front() {
                for &e in &incident[x] {
                    if tail[e] as usize != x {
                        continue;
                    }
                    let y = head(e, &tail) as usize;
                    if seen[y] == round {
                        continue;
                    }
                    seen[y] = round;
                    parent[y] = e;
                    if degree[y] + 2 <= degree[s] {
                        found = Some(y);
                        break 'bfs;
                    }
                    queue.push_back(y);
                }
            }
            if let Some(w) = found {
                let mut y = w;
                while y != s {
                    let e = parent[y];
                    let x = tail[e] as usize;
                    tail[e] = y as VertexId;
                    y = x;
                }
                degree[s] -= 1;
                degree[w] += 1;
                improved = true;
            }
        }
        if !improved {
            break;
        }
    }

    let arcs = edges
        .iter()
        .enumerate()
        .map(|(e, _)| (tail[e], head(e, &tail)))
        .collect();
    Ok(IntegralOrientation::from_arcs(n, arcs))
}

/// Exhaustive search over all orientations. Among those with the smallest
/// squared sum, then the smallest maximum, returns the lexicographically
/// first, where edge 0 listed as given counts as the most significant choice
/// and orienting `(u, v)` as `u -> v` comes before `v -> u`.
pub fn solve_brute(n: usize, edges: &[(VertexId, VertexId)]) -> Result<IntegralOrientation> {
    let m = edges.len();
    if m > BRUTE_MAX_EDGES {
        return Err(Error::SizeCap {
            what: "edges",
            limit: BRUTE_MAX_EDGES,
            actual: m,
        });
    }
    check_simple(edges)?;
    let n = vertex_span(n, edges);

    // Choice code: bit (m - 1 - i) set means edge i is reversed.
    let reversed = |code: u32, i: usize| code >> (m - 1 - i) & 1 == 1;
    let mut degree = vec![0u32; n];
    let mut hist = vec![0u32; m + 1];
    hist[0] = n as u32;
    for &(u, _) in edges {
        hist[degree[u as usize] as usize] -= 1;
        degree[u as usize] += 1;
        hist[degree[u as usize] as usize] += 1;
    }
    let mut sum_sq: u64 = degree.iter().map(|&d| d as u64 * d as u64).sum();
    let mut max = degree.iter().copied().max().unwrap_or(0);
    let mut best = (sum_sq, max, 0u32);

    let mut gray = 0u32;
    for k in 1u32..(1u32 << m) {
        let bit = k.trailing_zeros();
        gray ^= 1 << bit;
        let i = m - 1 - bit as usize;
        let (a, b) = edges[i];
        let (from, to) = if reversed(gray, i) { (a, b) } else { (b, a) };
        // Move one unit of out-degree from `from` to `to`.
        let df = degree[from as usize];
        hist[df as usize] -= 1;
        hist[df as usize - 1] += 1;
        degree[from as usize] = df - 1;
        let dt = degree[to as usize];
        hist[dt as usize] -= 1;
        hist[dt as usize + 1] += 1;
        degree[to as usize] = dt + 1;
        sum_sq = sum_sq + 2 * dt as u64 + 1 - (2 * df as u64 - 1);
        if dt + 1 > max {
            max = dt + 1;
        }
        while max > 0 && hist[max as usize] == 0 {
            max -= 1;
        }
        if (sum_sq, max, gray) < best {
            best = (sum_sq, max, gray);
        }
    }

    let arcs = edges
        .iter()
        .enumerate()
        .map(|(i, &(u, v))| if reversed(best.2, i) { (v, u) } else { (u, v) })
        .collect();
    Ok(IntegralOrientation::from_arcs(n, arcs))
}
