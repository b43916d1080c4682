//! Random instances, update streams and their text formats.
//!
//! Stream file:
//!
//! ```text
//! # fairorient-stream v1 n=4 ops=2 seed=7 mode=lex prng=chacha8
//! i 0 1
//! d 0 1
//! ```
//!
//! The header is optional; without it `n` is one more than the largest id.
//! Unknown `key=value` header tokens are kept but ignored. Other lines that
//! start with `#` and blank lines are skipped.
//!
//! Orientation file: an optional `# fairorient-orientation v1 n=<n>` header
//! followed by one `u v` line per edge, meaning `u -> v`.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::engine::UpdateOutcome;
use crate::error::{Error, Result};
use crate::model::OrientedMultigraph;
use crate::quality::IntegralOrientation;
use crate::store::DiEdgeStore;
use crate::VertexId;

/// Generator recorded in stream headers.
pub const PRNG_NAME: &str = "chacha8";

const STREAM_MAGIC: &str = "fairorient-stream";
const ORIENTATION_MAGIC: &str = "fairorient-orientation";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Insert,
    Delete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Update {
    pub op: Op,
    pub u: VertexId,
    pub v: VertexId,
}

impl Update {
    pub fn insert(u: VertexId, v: VertexId) -> Self {
        Update {
            op: Op::Insert,
            u,
            v,
        }
    }

    pub fn delete(u: VertexId, v: VertexId) -> Self {
        Update {
            op: Op::Delete,
            u,
            v,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Header {
    pub n: usize,
    pub seed: Option<u64>,
    pub mode: String,
    /// Tokens this version does not interpret, in file order.
    pub extra: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UpdateStream {
    pub header: Header,
    pub updates: Vec<Update>,
}

impl UpdateStream {
    pub fn len(&self) -> usize {
        self.updates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.updates.is_empty()
    }

    /// Checks that every insert names an absent edge, every delete a present
    /// one, no update is a self-loop and all ids are below `n`.
    pub fn validate(&self) -> Result<()> {
        let mut present = HashSet::new();
        for (i, up) in self.updates.iter().enumerate() {
            let bad = |msg: String| {
                Err(Error::Stream {
                    update: i + 1,
                    message: msg,
                })
            };
            let (u, v) = (up.u, up.v);
            if u == v {
                return bad(format!("self-loop on {u}"));
            }
            if u.max(v) as usize >= self.header.n {
                return bad(format!("vertex {} outside n = {}", u.max(v), self.header.n));
            }
            let key = (u.min(v), u.max(v));
            match up.op {
                Op::Insert if !present.insert(key) => {
                    return bad(format!("insert of present edge {{{u}, {v}}}"))
                }
                Op::Delete if !present.remove(&key) => {
                    return bad(format!("delete of absent edge {{{u}, {v}}}"))
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Edges present after the whole stream, sorted as `(min, max)`.
    pub fn final_edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut present = BTreeSet::new();
        for up in &self.updates {
            let key = (up.u.min(up.v), up.u.max(up.v));
            match up.op {
                Op::Insert => present.insert(key),
                Op::Delete => present.remove(&key),
            };
        }
        present.into_iter().collect()
    }
}

fn pair_of(n: u64, k: u64) -> (VertexId, VertexId) {
    // Row u holds the pairs (u, u+1..n); it starts at offset(u).
    let offset = |u: u64| u * (2 * n - u - 1) / 2;
    let (mut lo, mut hi) = (0u64, n - 1);
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if offset(mid) <= k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let u = lo;
    let v = u + 1 + (k - offset(u));
    (u as VertexId, v as VertexId)
}

/// `m` distinct edges drawn uniformly from all pairs of `n` vertices with a
/// ChaCha8 generator seeded by `seed`. Returned sorted.
pub fn gen_gnm(n: usize, m: u64, seed: u64) -> Result<Vec<(VertexId, VertexId)>> {
    let pairs = (n as u64) * (n as u64).saturating_sub(1) / 2;
    if m > pairs || n > VertexId::MAX as usize {
        return Err(Error::InfeasibleEdgeCount { n, m });
    }
    let total = usize::try_from(pairs).map_err(|_| Error::InfeasibleEdgeCount { n, m })?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<_> = index::sample(&mut rng, total, m as usize)
        .into_iter()
        .map(|k| pair_of(n as u64, k as u64))
        .collect();
    edges.sort_unstable();
    Ok(edges)
}

fn normalized(edges: &[(VertexId, VertexId)]) -> Vec<(VertexId, VertexId)> {
    let mut e: Vec<_> = edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    e.sort_unstable();
    e
}

fn span(n: usize, edges: &[(VertexId, VertexId)]) -> usize {
    edges
        .iter()
        .map(|&(u, v)| u.max(v) as usize + 1)
        .max()
        .unwrap_or(0)
        .max(n)
}

/// Inserts in lexicographic order of `(min endpoint, max endpoint)`.
pub fn seq_lex(n: usize, edges: &[(VertexId, VertexId)]) -> UpdateStream {
    UpdateStream {
        header: Header {
            n: span(n, edges),
            seed: None,
            mode: "lex".into(),
            extra: Vec::new(),
        },
        updates: normalized(edges)
            .into_iter()
            .map(|(u, v)| Update::insert(u, v))
            .collect(),
    }
}

/// Lex build, then delete every edge oriented out of the upper half of the
/// vertices ranked by reference out-degree (ties by smaller id).
pub fn seq_top50(
    n: usize,
    edges: &[(VertexId, VertexId)],
    reference: &IntegralOrientation,
) -> UpdateStream {
    let mut stream = seq_lex(n, edges);
    stream.header.mode = "top50".into();
    let n = stream.header.n.max(reference.vertex_count());
    let mut ranked: Vec<VertexId> = (0..n as VertexId).collect();
    ranked.sort_by_key(|&u| (std::cmp::Reverse(reference.out_degree(u)), u));
    let top: HashSet<VertexId> = ranked[..n.div_ceil(2)].iter().copied().collect();
    let doomed: Vec<_> = reference
        .arcs()
        .iter()
        .filter(|(u, _)| top.contains(u))
        .copied()
        .collect();
    stream.updates.extend(
        normalized(&doomed)
            .into_iter()
            .map(|(u, v)| Update::delete(u, v)),
    );
    stream
}

/// Lex build, then repeatedly delete the smallest-target reference out-edge
/// of the vertex of largest remaining out-degree (ties by smaller id) until
/// the maximum reaches half the reference maximum, rounded up.
pub fn seq_out50(
    n: usize,
    edges: &[(VertexId, VertexId)],
    reference: &IntegralOrientation,
) -> UpdateStream {
    let mut stream = seq_lex(n, edges);
    stream.header.mode = "out50".into();
    stream.updates.extend(
        out50_deletions(reference)
            .into_iter()
            .map(|(u, v)| Update::delete(u.min(v), u.max(v))),
    );
    stream
}

/// The arcs removed by the out50 rule, in removal order.
pub fn out50_deletions(reference: &IntegralOrientation) -> Vec<(VertexId, VertexId)> {
    let n = reference.vertex_count();
    let mut out: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    for &(u, v) in reference.arcs() {
        out[u as usize].push(v);
    }
    // Pop from the back to take the smallest target first.
    for targets in &mut out {
        targets.sort_unstable_by(|a, b| b.cmp(a));
    }
    let opt = reference.metrics().max_out;
    let goal = opt.div_ceil(2);
    let mut heap: BTreeSet<(std::cmp::Reverse<u32>, VertexId)> = (0..n as VertexId)
        .map(|u| (std::cmp::Reverse(out[u as usize].len() as u32), u))
        .collect();
    let mut removed = Vec::new();
    while let Some(&(std::cmp::Reverse(d), u)) = heap.first() {
        if d <= goal {
            break;
        }
        heap.pop_first();
        let v = out[u as usize].pop().expect("degree matches out-list");
        removed.push((u, v));
        heap.insert((std::cmp::Reverse(d - 1), u));
    }
    removed
}

/// Applies every update in order and sums the outcomes.
pub fn replay<S: DiEdgeStore>(
    g: &mut OrientedMultigraph<S>,
    updates: &[Update],
) -> Result<UpdateOutcome> {
    let mut total = UpdateOutcome::default();
    for up in updates {
        let o = match up.op {
            Op::Insert => g.insert_edge(up.u, up.v)?,
            Op::Delete => g.delete_edge(up.u, up.v)?,
        };
        total.flips += o.flips;
        total.info_updates += o.info_updates;
        total.max_depth = total.max_depth.max(o.max_depth);
    }
    Ok(total)
}

fn parse_id(token: &str, line: usize) -> Result<VertexId> {
    if token.is_empty() || !token.bytes().all(|c| c.is_ascii_digit()) {
        return Err(Error::format(line, format!("`{token}` is not a vertex id")));
    }
    token
        .parse()
        .map_err(|_| Error::format(line, format!("vertex id `{token}` is out of range")))
}

/// Splits `# <magic> v1 key=value ...` into its tokens, or `None` when the
/// line is not a header for `magic`.
fn header_tokens<'a>(line: &'a str, magic: &str) -> Option<std::str::SplitWhitespace<'a>> {
    let rest = line.strip_prefix('#')?;
    let mut tokens = rest.split_whitespace();
    (tokens.next() == Some(magic)).then_some(tokens)
}

fn parse_header(mut tokens: std::str::SplitWhitespace<'_>) -> Result<(Header, Option<usize>)> {
    match tokens.next() {
        Some("v1") => {}
        other => {
            return Err(Error::format(
                1,
                format!("unsupported version `{}`", other.unwrap_or("")),
            ))
        }
    }
    let mut header = Header::default();
    let (mut n, mut ops) = (None, None);
    for token in tokens {
        let (key, value) = token
            .split_once('=')
            .ok_or_else(|| Error::format(1, format!("header token `{token}` is not key=value")))?;
        let number = || {
            value
                .parse::<u64>()
                .map_err(|_| Error::format(1, format!("`{key}` must be a number, got `{value}`")))
        };
        match key {
            "n" => n = Some(number()?),
            "ops" => ops = Some(number()? as usize),
            "seed" => header.seed = Some(number()?),
            "mode" => header.mode = value.to_string(),
            _ => header.extra.push((key.to_string(), value.to_string())),
        }
    }
    let n = n.ok_or_else(|| Error::format(1, "header lacks n="))?;
    if n > VertexId::MAX as u64 + 1 {
        return Err(Error::format(
            1,
            format!("n = {n} exceeds the vertex id range"),
        ));
    }
    header.n = n as usize;
    Ok((header, ops))
}

pub fn parse_stream(text: &str) -> Result<UpdateStream> {
    let mut stream = UpdateStream::default();
    let mut declared = None;
    let mut has_header = false;
    let mut max_id: Option<VertexId> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.strip_suffix('\r').unwrap_or(raw);
        if body.trim().is_empty() {
            continue;
        }
        if body.starts_with('#') {
            if let Some(tokens) = header_tokens(body, STREAM_MAGIC) {
                if line != 1 {
                    return Err(Error::format(line, "stream header must be the first line"));
                }
                let (header, ops) = parse_header(tokens)?;
                stream.header = header;
                declared = ops;
                has_header = true;
            }
            continue;
        }
        let mut fields = body.split(' ');
        let (op, u, v) = match (fields.next(), fields.next(), fields.next(), fields.next()) {
            (Some(op), Some(u), Some(v), None) => (op, u, v),
            _ => {
                return Err(Error::format(
                    line,
                    format!("expected `i|d u v`, got `{body}`"),
                ))
            }
        };
        let op = match op {
            "i" => Op::Insert,
            "d" => Op::Delete,
            _ => return Err(Error::format(line, format!("unknown operation `{op}`"))),
        };
        let (u, v) = (parse_id(u, line)?, parse_id(v, line)?);
        if has_header && u.max(v) as usize >= stream.header.n {
            return Err(Error::format(
                line,
                format!("vertex {} outside n = {}", u.max(v), stream.header.n),
            ));
        }
        max_id = max_id.max(Some(u.max(v)));
        stream.updates.push(Update { op, u, v });
    }
    if let Some(ops) = declared {
        if ops != stream.updates.len() {
            return Err(Error::format(
                1,
                format!(
                    "header declares {ops} ops, body has {}",
                    stream.updates.len()
                ),
            ));
        }
    }
    if !has_header {
        stream.header.mode = "raw".into();
        stream.header.n = max_id.map_or(0, |m| m as usize + 1);
    }
    Ok(stream)
}

pub fn write_stream(stream: &UpdateStream) -> String {
    let h = &stream.header;
    let mut out = format!("# {STREAM_MAGIC} v1 n={} ops={}", h.n, stream.updates.len());
    if let Some(seed) = h.seed {
        let _ = write!(out, " seed={seed}");
    }
    let mode = if h.mode.is_empty() { "raw" } else { &h.mode };
    let _ = write!(out, " mode={mode}");
    for (k, v) in &h.extra {
        let _ = write!(out, " {k}={v}");
    }
    out.push('\n');
    for up in &stream.updates {
        let op = match up.op {
            Op::Insert => 'i',
            Op::Delete => 'd',
        };
        let _ = writeln!(out, "{op} {} {}", up.u, up.v);
    }
    out
}

pub fn parse_orientation(text: &str) -> Result<IntegralOrientation> {
    let mut n = 0usize;
    let mut arcs = Vec::new();
    let mut seen = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.strip_suffix('\r').unwrap_or(raw);
        if body.trim().is_empty() {
            continue;
        }
        if body.starts_with('#') {
            if let Some(tokens) = header_tokens(body, ORIENTATION_MAGIC) {
                if line != 1 {
                    return Err(Error::format(
                        line,
                        "orientation header must be the first line",
                    ));
                }
                let (header, _) = parse_header(tokens)?;
                n = header.n;
            }
            continue;
        }
        let mut fields = body.split(' ');
        let (u, v) = match (fields.next(), fields.next(), fields.next()) {
            (Some(u), Some(v), None) => (parse_id(u, line)?, parse_id(v, line)?),
            _ => return Err(Error::format(line, format!("expected `u v`, got `{body}`"))),
        };
        if u == v {
            return Err(Error::format(line, format!("self-loop on {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::format(
                line,
                format!("edge {{{u}, {v}}} listed twice"),
            ));
        }
        arcs.push((u, v));
    }
    Ok(IntegralOrientation::from_arcs(n, arcs))
}

pub fn write_orientation(o: &IntegralOrientation) -> String {
    let mut out = format!("# {ORIENTATION_MAGIC} v1 n={}\n", o.vertex_count());
    for &(u, v) in o.arcs() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}
