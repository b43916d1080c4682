//! Replays streams through configured graphs and records one row per cell.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::time::{Duration, Instant};

use fairorient::alloc_count::{live_bytes, peak_bytes, reset_peak};
use fairorient::oracle::solve_exact;
use fairorient::workload::{
    gen_gnm, parse_stream, seq_lex, seq_out50, seq_top50, Op, Update, UpdateStream, PRNG_NAME,
};
use fairorient::{
    AnyGraph, AuditMode, BucketKind, Error, Fractional, IntegralOrientation, Lambda,
    OrientedMultigraph, Params, UpdateOutcome, Variant, VertexId,
};

use crate::error::{BenchError, Result};
use crate::table::{Row, Status};

/// Deletion pattern appended to a lexicographic build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Lex,
    Top50,
    Out50,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Lex => "lex",
            Mode::Top50 => "top50",
            Mode::Out50 => "out50",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> fairorient::Result<Self> {
        [Mode::Lex, Mode::Top50, Mode::Out50]
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown mode `{s}`")))
    }
}

/// Source of the reference orientation that drives the deletion patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reference {
    /// The exact oracle; limited to its size caps.
    Exact,
    /// The rounded engine orientation at lambda = 1/100, theta = 0, b = 401.
    Engine,
}

impl Reference {
    pub fn name(self) -> &'static str {
        match self {
            Reference::Exact => "exact",
            Reference::Engine => "engine",
        }
    }
}

impl fmt::Display for Reference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Reference {
    type Err = Error;

    fn from_str(s: &str) -> fairorient::Result<Self> {
        match s {
            "exact" => Ok(Reference::Exact),
            "engine" => Ok(Reference::Engine),
            _ => Err(Error::Config(format!("unknown reference `{s}`"))),
        }
    }
}

fn reference_orientation(
    n: usize,
    edges: &[(VertexId, VertexId)],
    reference: Reference,
) -> fairorient::Result<IntegralOrientation> {
    match reference {
        Reference::Exact => solve_exact(n, edges),
        Reference::Engine => {
            let params = Params::new(Lambda::new(1, 100)?, 0, 401)?;
            let mut g: OrientedMultigraph<Fractional> = OrientedMultigraph::new(params, n)?;
            fairorient::workload::replay(&mut g, &seq_lex(n, edges).updates)?;
            Ok(fairorient::quality::round_naive(&g))
        }
    }
}

/// A G(n, m) instance turned into an update stream.
pub fn generate(
    n: usize,
    m: u64,
    seed: u64,
    mode: Mode,
    reference: Reference,
) -> fairorient::Result<UpdateStream> {
    let edges = gen_gnm(n, m, seed)?;
    let mut stream = match mode {
        Mode::Lex => seq_lex(n, &edges),
        Mode::Top50 => seq_top50(n, &edges, &reference_orientation(n, &edges, reference)?),
        Mode::Out50 => seq_out50(n, &edges, &reference_orientation(n, &edges, reference)?),
    };
    stream.header.seed = Some(seed);
    stream.header.extra.push(("prng".into(), PRNG_NAME.into()));
    if mode != Mode::Lex {
        stream
            .header
            .extra
            .push(("reference".into(), reference.name().into()));
    }
    Ok(stream)
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub stream: UpdateStream,
}

impl Instance {
    /// Reads and validates a stream file. The instance is named after the
    /// file name.
    pub fn load(path: &Path) -> Result<Self> {
        let shown = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|e| BenchError::io(&shown, e))?;
        let stream = parse_stream(&text).map_err(|source| BenchError::Input {
            path: shown.clone(),
            source,
        })?;
        stream.validate().map_err(|source| BenchError::Input {
            path: shown.clone(),
            source,
        })?;
        let name = path
            .file_name()
            .map_or(shown.clone(), |f| f.to_string_lossy().into_owned());
        Ok(Instance { name, stream })
    }

    pub fn generated(
        n: usize,
        m: u64,
        seed: u64,
        mode: Mode,
        reference: Reference,
    ) -> Result<Self> {
        Ok(Instance {
            name: format!("gnm-n{n}-m{m}-s{seed}"),
            stream: generate(n, m, seed, mode, reference)?,
        })
    }

    pub fn mode(&self) -> &str {
        if self.stream.header.mode.is_empty() {
            "raw"
        } else {
            &self.stream.header.mode
        }
    }
}

/// One implementation with one parameter setting.
#[derive(Debug, Clone, Copy)]
pub struct Cell {
    pub variant: Variant,
    /// Overrides the variant's default bucket store.
    pub buckets: Option<BucketKind>,
    pub params: Params,
}

impl Cell {
    /// The variant name, suffixed with the bucket store when it differs from
    /// the variant's default.
    pub fn label(&self) -> String {
        match self.buckets {
            Some(kind) if kind != self.variant.default_buckets() => {
                let kind = match kind {
                    BucketKind::Array => "array",
                    BucketKind::List => "list",
                };
                format!("{}+{kind}", self.variant)
            }
            _ => self.variant.to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    pub repeats: u32,
    pub timeout: Option<Duration>,
    /// Time chunks of updates instead of each update.
    pub batch_timing: bool,
    pub audit: bool,
    pub oracle: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            repeats: 3,
            timeout: None,
            batch_timing: false,
            audit: false,
            oracle: false,
        }
    }
}

const BATCH: usize = 4096;

fn apply(g: &mut AnyGraph, up: &Update) -> fairorient::Result<UpdateOutcome> {
    match up.op {
        Op::Insert => g.insert_edge(up.u, up.v),
        Op::Delete => g.delete_edge(up.u, up.v),
    }
}

/// Engine time for the whole stream, or `None` once the timeout is passed.
fn timed_replay(
    g: &mut AnyGraph,
    updates: &[Update],
    cfg: &RunConfig,
) -> fairorient::Result<Option<Duration>> {
    let limit = cfg.timeout.unwrap_or(Duration::MAX);
    let mut total = Duration::ZERO;
    if cfg.batch_timing {
        for chunk in updates.chunks(BATCH) {
            let t = Instant::now();
            for up in chunk {
                apply(g, up)?;
            }
            total += t.elapsed();
            if total > limit {
                return Ok(None);
            }
        }
    } else {
        for up in updates {
            let t = Instant::now();
            apply(g, up)?;
            total += t.elapsed();
            if total > limit {
                return Ok(None);
            }
        }
    }
    Ok(Some(total))
}

/// Runs one cell `cfg.repeats` times and keeps the fastest time. Metric
/// columns come from the last repeat; they do not vary between repeats.
pub fn run_cell(instance: &Instance, cell: &Cell, cfg: &RunConfig) -> Result<Row> {
    let stream = &instance.stream;
    let mut row = Row {
        instance: instance.name.clone(),
        mode: instance.mode().to_string(),
        variant: cell.label(),
        lambda: cell.params.lambda().to_string(),
        theta: cell.params.theta(),
        b: cell.params.b(),
        ops: stream.len() as u64,
        ..Row::default()
    };
    let mut best: Option<Duration> = None;
    let mut peak = 0usize;
    let mut last = None;
    for _ in 0..cfg.repeats.max(1) {
        let base = live_bytes();
        reset_peak();
        let mut g = AnyGraph::new(cell.variant, cell.buckets, cell.params, stream.header.n)?;
        let Some(t) = timed_replay(&mut g, &stream.updates, cfg)? else {
            row.status = Status::Oot;
            return Ok(row);
        };
        peak = peak.max(peak_bytes().saturating_sub(base));
        best = Some(best.map_or(t, |b| b.min(t)));
        last = Some(g);
    }
    let g = last.expect("at least one repeat");
    let quality = g.round_naive().metrics();
    let totals = g.totals();
    row.time_ns = best.map(|t| t.as_nanos() as u64);
    row.peak_bytes = Some(peak as u64);
    row.max_out = Some(quality.max_out);
    row.sum_sq = Some(quality.sum_sq);
    row.flips = Some(totals.flips);
    row.info_updates = Some(totals.info_updates);
    if cfg.audit {
        row.violations = Some(g.audit_fairness(AuditMode::Operational).len() as u64);
    }
    if cfg.oracle {
        match solve_exact(stream.header.n, &stream.final_edges()) {
            Ok(o) => {
                let q = o.metrics();
                row.opt_max_out = Some(q.max_out);
                row.opt_sum_sq = Some(q.sum_sq);
            }
            Err(Error::SizeCap { .. }) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(row)
}

/// Every instance against every cell, sequentially so that the allocator
/// peak belongs to a single graph.
pub fn run_all(instances: &[Instance], cells: &[Cell], cfg: &RunConfig) -> Result<Vec<Row>> {
    let mut rows = Vec::with_capacity(instances.len() * cells.len());
    for instance in instances {
        for cell in cells {
            rows.push(run_cell(instance, cell, cfg)?);
        }
    }
    Ok(rows)
}
