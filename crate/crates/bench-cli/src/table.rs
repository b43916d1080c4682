//! The results table: one row per (instance, variant, parameters) cell.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use crate::error::{BenchError, Result};

pub const COLUMNS: [&str; 14] = [
    "instance",
    "mode",
    "variant",
    "lambda",
    "theta",
    "b",
    "ops",
    "time_ns",
    "peak_bytes",
    "max_out",
    "sum_sq",
    "flips",
    "info_updates",
    "status",
];
pub const AUDIT_COLUMNS: [&str; 1] = ["violations"];
pub const ORACLE_COLUMNS: [&str; 2] = ["opt_max_out", "opt_sum_sq"];

/// First line of every results file.
pub const MEMORY_NOTE: &str =
    "# peak_bytes: heap bytes counted by the global allocator during replay, not OS RSS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Status {
    #[default]
    Ok,
    /// The cell exceeded its timeout.
    Oot,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Ok => "ok",
            Status::Oot => "OOT",
        })
    }
}

impl FromStr for Status {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ok" => Ok(Status::Ok),
            "OOT" => Ok(Status::Oot),
            _ => Err(BenchError::Table(format!("unknown status `{s}`"))),
        }
    }
}

/// Metric columns are empty for cells that ran out of time.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Row {
    pub instance: String,
    pub mode: String,
    pub variant: String,
    pub lambda: String,
    pub theta: u32,
    pub b: u32,
    pub ops: u64,
    pub time_ns: Option<u64>,
    pub peak_bytes: Option<u64>,
    pub max_out: Option<u32>,
    pub sum_sq: Option<u64>,
    pub flips: Option<u64>,
    pub info_updates: Option<u64>,
    pub status: Status,
    pub violations: Option<u64>,
    pub opt_max_out: Option<u32>,
    pub opt_sum_sq: Option<u64>,
}

impl Row {
    pub fn algorithm(&self) -> String {
        format!(
            "{} lambda={} theta={} b={}",
            self.variant, self.lambda, self.theta, self.b
        )
    }

    pub fn instance_key(&self) -> String {
        format!("{} {}", self.instance, self.mode)
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Which optional column groups to emit.
#[derive(Debug, Clone, Copy, Default)]
pub struct Extras {
    pub audit: bool,
    pub oracle: bool,
}

pub fn write_rows<W: Write>(out: W, rows: &[Row], extras: Extras) -> Result<()> {
    let mut out = out;
    writeln!(out, "{MEMORY_NOTE}").map_err(|e| BenchError::io("output", e))?;
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = COLUMNS.to_vec();
    if extras.audit {
        header.extend(AUDIT_COLUMNS);
    }
    if extras.oracle {
        header.extend(ORACLE_COLUMNS);
    }
    let csv_err = |e| BenchError::csv("output", e);
    w.write_record(&header).map_err(csv_err)?;
    for r in rows {
        let mut rec = vec![
            r.instance.clone(),
            r.mode.clone(),
            r.variant.clone(),
            r.lambda.clone(),
            r.theta.to_string(),
            r.b.to_string(),
            r.ops.to_string(),
            opt(r.time_ns),
            opt(r.peak_bytes),
            opt(r.max_out),
            opt(r.sum_sq),
            opt(r.flips),
            opt(r.info_updates),
            r.status.to_string(),
        ];
        if extras.audit {
            rec.push(opt(r.violations));
        }
        if extras.oracle {
            rec.push(opt(r.opt_max_out));
            rec.push(opt(r.opt_sum_sq));
        }
        w.write_record(&rec).map_err(csv_err)?;
    }
    w.flush().map_err(|e| BenchError::io("output", e))
}

/// Reads a results table. Lines starting with `#` are skipped; the core
/// columns are required, the optional groups are read when present.
pub fn read_rows<R: Read>(input: R, name: &str) -> Result<Vec<Row>> {
    let mut rd = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(input);
    let headers = rd.headers().map_err(|e| BenchError::csv(name, e))?.clone();
    let index = |col: &str| headers.iter().position(|h| h == col);
    let mut core = [0usize; 14];
    for (slot, col) in core.iter_mut().zip(COLUMNS) {
        *slot = index(col)
            .ok_or_else(|| BenchError::Table(format!("{name}: missing column `{col}`")))?;
    }
    let violations = index("violations");
    let opt_max = index("opt_max_out");
    let opt_sq = index("opt_sum_sq");

    let mut rows = Vec::new();
    for (i, rec) in rd.records().enumerate() {
        let rec = rec.map_err(|e| BenchError::csv(name, e))?;
        let line = rec.position().map_or(i + 2, |p| p.line() as usize);
        let bad = |col: &str, v: &str| {
            BenchError::Table(format!("{name}: line {line}: bad `{col}` value `{v}`"))
        };
        let field = |k: usize| rec.get(k).unwrap_or("");
        fn num<T: FromStr>(v: &str) -> Option<Option<T>> {
            if v.is_empty() {
                Some(None)
            } else {
                v.parse().ok().map(Some)
            }
        }
        let at = |j: usize| core[j];
        let req = |j: usize| -> Result<u64> {
            num::<u64>(field(at(j)))
                .flatten()
                .ok_or_else(|| bad(COLUMNS[j], field(at(j))))
        };
        let opt_col = |k: Option<usize>, col: &str| -> Result<Option<u64>> {
            match k {
                None => Ok(None),
                Some(k) => num::<u64>(field(k)).ok_or_else(|| bad(col, field(k))),
            }
        };
        let narrow = |v: Option<u64>, col: &str| -> Result<Option<u32>> {
            v.map(|x| u32::try_from(x).map_err(|_| bad(col, &x.to_string())))
                .transpose()
        };
        let optional = |j: usize| -> Result<Option<u64>> {
            num::<u64>(field(at(j))).ok_or_else(|| bad(COLUMNS[j], field(at(j))))
        };
        rows.push(Row {
            instance: field(at(0)).to_string(),
            mode: field(at(1)).to_string(),
            variant: field(at(2)).to_string(),
            lambda: field(at(3)).to_string(),
            theta: narrow(Some(req(4)?), "theta")?.unwrap_or(0),
            b: narrow(Some(req(5)?), "b")?.unwrap_or(0),
            ops: req(6)?,
            time_ns: optional(7)?,
            peak_bytes: optional(8)?,
            max_out: narrow(optional(9)?, "max_out")?,
            sum_sq: optional(10)?,
            flips: optional(11)?,
            info_updates: optional(12)?,
            status: field(at(13))
                .parse()
                .map_err(|_| bad("status", field(at(13))))?,
            violations: opt_col(violations, "violations")?,
            opt_max_out: narrow(opt_col(opt_max, "opt_max_out")?, "opt_max_out")?,
            opt_sum_sq: opt_col(opt_sq, "opt_sum_sq")?,
        });
    }
    Ok(rows)
}
